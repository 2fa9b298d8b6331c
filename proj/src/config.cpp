#include "qtrain/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qtrain {
namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::int64_t parse_shots(const std::string& v) {
    if (v == "exact" || v == "inf") return 0;
    const std::int64_t shots = std::stoll(v);
    if (shots < 1) throw std::invalid_argument("shots must be 'exact' or a positive integer");
    return shots;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

}  // namespace

void apply_override(RunConfig& config, const std::string& raw_key, const std::string& value) {
    // Section prefixes are cosmetic; the last path component is the key.
    std::string key = raw_key;
    if (const auto dot = key.rfind('.'); dot != std::string::npos) key = key.substr(dot + 1);

    TrainingConfig& t = config.training;
    if (key == "dataset")
        t.dataset = value;
    else if (key == "network")
        t.network = value;
    else if (key == "qnn_layers")
        t.qnn_layers = std::stoi(value);
    else if (key == "shots")
        t.shots = parse_shots(value);
    else if (key == "seed")
        t.seed = std::stoull(value);
    else if (key == "periods")
        t.periods = std::stoi(value);
    else if (key == "phi_evals")
        t.phi_evals = std::stoll(value);
    else if (key == "gamma_evals")
        t.gamma_evals = std::stoll(value);
    else if (key == "gamma_init")
        t.gamma_init = std::stod(value);
    else if (key == "rho_begin")
        t.rho_begin = std::stod(value);
    else if (key == "rho_end")
        t.rho_end = std::stod(value);
    else if (key == "nm_step")
        t.nm_step = std::stod(value);
    else if (key == "cobyla_resume")
        t.cobyla_resume = parse_bool(value);
    else if (key == "iris_path")
        t.iris_path = value;
    else if (key == "mnist_dir")
        t.mnist_dir = value;
    else if (key == "train_limit")
        t.train_limit = std::stoi(value);
    else if (key == "test_limit")
        t.test_limit = std::stoi(value);
    else if (key == "out_dir")
        config.out_dir = value;
    else
        throw std::invalid_argument("config: unknown key '" + raw_key + "'");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        apply_override(config, section.empty() ? key : section + "." + key, value);
    }
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace qtrain
