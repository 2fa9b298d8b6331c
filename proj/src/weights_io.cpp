#include "qtrain/weights_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qtrain {
namespace {

// %.17g survives a decimal round trip bit-exactly for doubles.
std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void save_model(const std::string& path, const ExportedModel& model) {
    if (static_cast<int>(model.weights.size()) != model.spec.param_count())
        throw std::invalid_argument("model: weight count does not match network spec");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("model: cannot write " + path);
    out << "qtrain-weights 1\n";
    out << "network " << format_network_spec(model.spec) << "\n";
    out << "m " << model.weights.size() << "\n";
    out << "gamma " << fmt_double(model.gamma) << "\n";
    for (double w : model.weights) out << fmt_double(w) << "\n";
    if (!out) throw std::runtime_error("model: write failed for " + path);
}

ExportedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("model: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "qtrain-weights 1")
        throw std::runtime_error("model: unsupported header in " + path);

    ExportedModel model;
    std::size_t m = 0;
    if (!std::getline(in, line) || line.rfind("network ", 0) != 0)
        throw std::runtime_error("model: missing network line");
    model.spec = parse_network_spec(line.substr(8));
    if (!std::getline(in, line) || line.rfind("m ", 0) != 0)
        throw std::runtime_error("model: missing m line");
    m = std::stoul(line.substr(2));
    if (!std::getline(in, line) || line.rfind("gamma ", 0) != 0)
        throw std::runtime_error("model: missing gamma line");
    model.gamma = std::stod(line.substr(6));

    model.weights.reserve(m);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        model.weights.push_back(std::stod(line));
    }
    if (model.weights.size() != m)
        throw std::runtime_error("model: expected " + std::to_string(m) + " weights, got " +
                                 std::to_string(model.weights.size()));
    if (static_cast<int>(m) != model.spec.param_count())
        throw std::runtime_error("model: weight count does not match network spec");
    return model;
}

EvalResult evaluate_model(const ExportedModel& model, const Dataset& data) {
    EvalResult result;
    const int classes = data.class_count;
    result.confusion.assign(classes, std::vector<long long>(classes, 0));
    long long correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Prediction pred = forward(model.spec, model.weights, data.features[i]);
        ++result.confusion[data.labels[i]][pred.predicted_class];
        correct += pred.predicted_class == data.labels[i];
    }
    result.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    return result;
}

}  // namespace qtrain
