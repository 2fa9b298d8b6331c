#include "qtrain/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace qtrain {
namespace {

using nlohmann::json;

constexpr double kScoreFloor = 1e-12;  // clamp before log in the cross-entropy

// Sub-seed stream ids derived from the session seed.
constexpr std::uint64_t kStreamSplit = 1;
constexpr std::uint64_t kStreamMapping = 2;
constexpr std::uint64_t kStreamPhiInit = 3;
constexpr std::uint64_t kStreamShotBase = 1000;

}  // namespace

void TrainingConfig::validate() const {
    if (dataset != "iris" && dataset != "mnist")
        throw std::invalid_argument("config: dataset must be iris or mnist");
    if (qnn_layers < 1) throw std::invalid_argument("config: qnn_layers must be >= 1");
    if (shots < 0) throw std::invalid_argument("config: shots must be exact (0) or >= 1");
    if (periods < 1 || phi_evals < 1 || gamma_evals < 1)
        throw std::invalid_argument("config: periods and stage budgets must be >= 1");
    if (!std::isfinite(gamma_init)) throw std::invalid_argument("config: gamma_init not finite");
    if (!(rho_begin > rho_end) || !(rho_end > 0))
        throw std::invalid_argument("config: need rho_begin > rho_end > 0");
}

NetworkSpec TrainingConfig::network_spec() const {
    if (!network.empty()) return parse_network_spec(network);
    if (dataset == "iris") return parse_network_spec("input:4 dense:4:16 relu dense:16:3 softmax");
    return parse_network_spec(
        "input:1x28x28 conv:1:4:5:5 relu maxpool:2 conv:4:8:5:5 relu maxpool:2 flatten "
        "dense:128:44 relu dense:44:10 softmax");
}

LossReport evaluate_loss(const NetworkSpec& spec, const std::vector<double>& weights,
                         const Dataset& data) {
    LossReport report;
    report.n_data = static_cast<long long>(data.size());
    const std::size_t n = data.size();
    std::vector<double> ce(n);
    std::vector<char> fail(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const Prediction pred = forward(spec, weights, data.features[i]);
        const double p = std::max(kScoreFloor, pred.class_scores[data.labels[i]]);
        ce[i] = -std::log(p);
        fail[i] = pred.predicted_class != data.labels[i];
    }
    double ce_sum = 0.0;
    long long n_fail = 0;
    for (std::size_t i = 0; i < n; ++i) {  // fixed-order reduction
        ce_sum += ce[i];
        n_fail += fail[i];
    }
    report.cross_entropy = ce_sum / static_cast<double>(n);
    report.n_fail = n_fail;
    report.failure_rate = static_cast<double>(n_fail) / static_cast<double>(n);
    report.total_loss = report.cross_entropy + report.failure_rate;
    return report;
}

LossReport evaluate_loss(const AnsatzSpec& ansatz, const std::vector<double>& phi, double gamma,
                         const NetworkSpec& spec, const MappingTable& mapping, const Dataset& data,
                         std::int64_t shots, std::uint64_t shot_seed) {
    const Statevector state = build_ansatz_state(ansatz, phi);
    const ProbabilityDistribution dist =
        shots > 0 ? sample_probabilities(state, shots, shot_seed) : exact_probabilities(state);
    const std::vector<double> weights = apply_mapping(mapping, dist, gamma);
    return evaluate_loss(spec, weights, data);
}

double evaluate_accuracy(const AnsatzSpec& ansatz, const std::vector<double>& phi, double gamma,
                         const NetworkSpec& spec, const MappingTable& mapping,
                         const Dataset& data) {
    const Statevector state = build_ansatz_state(ansatz, phi);
    const std::vector<double> weights = apply_mapping(mapping, exact_probabilities(state), gamma);
    const std::size_t n = data.size();
    std::vector<char> hit(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        hit[i] = forward(spec, weights, data.features[i]).predicted_class == data.labels[i];
    long long correct = 0;
    for (std::size_t i = 0; i < n; ++i) correct += hit[i];
    return static_cast<double>(correct) / static_cast<double>(n);
}

RunRecord run_training_session(const TrainingConfig& config, const DatasetSplit& data) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    RunRecord record;
    record.config = config;

    const NetworkSpec spec = config.network_spec();
    record.network_text = format_network_spec(spec);
    const int weight_count = spec.param_count();

    record.mapping = build_mapping(weight_count, derive_seed(config.seed, kStreamMapping));
    AnsatzSpec ansatz{record.mapping.num_qubits, config.qnn_layers};
    record.qnn_param_count = ansatz.param_count();

    SplitRng phi_rng(derive_seed(config.seed, kStreamPhiInit));
    std::vector<double> phi(ansatz.param_count());
    for (double& a : phi) a = phi_rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    double gamma = config.gamma_init;

    long long eval_counter = 0;
    char current_stage = 'p';

    auto record_eval = [&](const LossReport& report) {
        record.metrics.push_back({eval_counter, current_stage, report.total_loss,
                                  report.cross_entropy, report.failure_rate});
        ++eval_counter;
    };

    auto loss_at = [&](const std::vector<double>& p, double g) {
        const std::uint64_t shot_seed =
            derive_seed(config.seed, kStreamShotBase + static_cast<std::uint64_t>(eval_counter));
        const LossReport report = evaluate_loss(ansatz, p, g, spec, record.mapping, data.train,
                                                config.shots, shot_seed);
        record_eval(report);
        return report.total_loss;
    };

    CountedObjective phi_objective([&](const std::vector<double>& p) { return loss_at(p, gamma); });
    CobylaOptimizer phi_optimizer(phi, config.rho_begin, config.rho_end);

    for (int period = 0; period < config.periods; ++period) {
        current_stage = 'p';
        if (config.cobyla_resume) {
            if (period > 0) {
                phi_optimizer.reset_radius();
                // Gamma moved since the last angle stage; refresh the pivot's
                // stored loss (one evaluation, on the stage's budget).
                const double f = loss_at(phi, gamma);
                phi_optimizer.recenter(phi, f);
                phi_optimizer.run(phi_objective, config.phi_evals - 1);
            } else {
                phi_optimizer.run(phi_objective, config.phi_evals);
            }
            phi = phi_optimizer.best_x();
        } else {
            CobylaOptimizer fresh(phi, config.rho_begin, config.rho_end);
            fresh.run(phi_objective, config.phi_evals);
            phi = fresh.best_x();
        }

        current_stage = 'g';
        CountedObjective gamma_objective(
            [&](const std::vector<double>& g) { return loss_at(phi, g[0]); });
        NelderMeadParams nm;
        nm.initial_step = config.nm_step;
        const auto gamma_result =
            nelder_mead_minimize(gamma_objective, {gamma}, config.gamma_evals, nm);
        gamma = gamma_result.best_x[0];

        PeriodMetric pm;
        pm.period = period;
        pm.train_accuracy = evaluate_accuracy(ansatz, phi, gamma, spec, record.mapping, data.train);
        pm.test_accuracy = evaluate_accuracy(ansatz, phi, gamma, spec, record.mapping, data.test);
        pm.best_train_loss = gamma_result.best_f;
        record.periods.push_back(pm);
    }

    record.final_phi = phi;
    record.final_gamma = gamma;
    record.best_phi = phi;
    record.best_gamma = gamma;
    double best_loss = std::numeric_limits<double>::infinity();
    for (const auto& m : record.metrics) best_loss = std::min(best_loss, m.loss);
    record.best_train_loss = best_loss;

    const Statevector state = build_ansatz_state(ansatz, phi);
    record.final_weights = apply_mapping(record.mapping, exact_probabilities(state), gamma);
    record.final_train_accuracy =
        evaluate_accuracy(ansatz, phi, gamma, spec, record.mapping, data.train);
    record.final_test_accuracy =
        evaluate_accuracy(ansatz, phi, gamma, spec, record.mapping, data.test);
    record.best_test_accuracy = record.final_test_accuracy;

    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return record;
}

RunRecord run_training_session(const TrainingConfig& config) {
    config.validate();
    DatasetSplit data;
    if (config.dataset == "iris")
        data = load_iris(config.iris_path, derive_seed(config.seed, kStreamSplit));
    else
        data = load_mnist(config.mnist_dir, config.train_limit, config.test_limit,
                          derive_seed(config.seed, kStreamSplit));
    return run_training_session(config, data);
}

namespace {

json config_to_json(const TrainingConfig& c) {
    return json{{"dataset", c.dataset},
                {"network", c.network},
                {"qnn_layers", c.qnn_layers},
                {"shots", c.shots},
                {"seed", c.seed},
                {"periods", c.periods},
                {"phi_evals", c.phi_evals},
                {"gamma_evals", c.gamma_evals},
                {"gamma_init", c.gamma_init},
                {"rho_begin", c.rho_begin},
                {"rho_end", c.rho_end},
                {"nm_step", c.nm_step},
                {"cobyla_resume", c.cobyla_resume},
                {"iris_path", c.iris_path},
                {"mnist_dir", c.mnist_dir},
                {"train_limit", c.train_limit},
                {"test_limit", c.test_limit}};
}

TrainingConfig config_from_json(const json& j) {
    TrainingConfig c;
    j.at("dataset").get_to(c.dataset);
    j.at("network").get_to(c.network);
    j.at("qnn_layers").get_to(c.qnn_layers);
    j.at("shots").get_to(c.shots);
    j.at("seed").get_to(c.seed);
    j.at("periods").get_to(c.periods);
    j.at("phi_evals").get_to(c.phi_evals);
    j.at("gamma_evals").get_to(c.gamma_evals);
    j.at("gamma_init").get_to(c.gamma_init);
    j.at("rho_begin").get_to(c.rho_begin);
    j.at("rho_end").get_to(c.rho_end);
    j.at("nm_step").get_to(c.nm_step);
    j.at("cobyla_resume").get_to(c.cobyla_resume);
    j.at("iris_path").get_to(c.iris_path);
    j.at("mnist_dir").get_to(c.mnist_dir);
    j.at("train_limit").get_to(c.train_limit);
    j.at("test_limit").get_to(c.test_limit);
    return c;
}

json mapping_to_json(const MappingTable& t) {
    json paired = json::array();
    for (const auto& p : t.paired) paired.push_back({p.weight_index, p.basis_a, p.basis_b});
    json single = json::array();
    for (const auto& s : t.single) single.push_back({s.weight_index, s.basis});
    return json{{"weight_count", t.weight_count},
                {"num_qubits", t.num_qubits},
                {"seed", t.seed},
                {"paired", paired},
                {"single", single}};
}

MappingTable mapping_from_json(const json& j) {
    MappingTable t;
    j.at("weight_count").get_to(t.weight_count);
    j.at("num_qubits").get_to(t.num_qubits);
    j.at("seed").get_to(t.seed);
    for (const auto& p : j.at("paired"))
        t.paired.push_back({p.at(0).get<int>(), p.at(1).get<std::size_t>(),
                            p.at(2).get<std::size_t>()});
    for (const auto& s : j.at("single"))
        t.single.push_back({s.at(0).get<int>(), s.at(1).get<std::size_t>()});
    return t;
}

}  // namespace

std::string run_record_to_json(const RunRecord& r) {
    json metrics = json::array();
    for (const auto& m : r.metrics)
        metrics.push_back({m.eval_index, std::string(1, m.stage), m.loss, m.ce, m.fail_rate});
    json periods = json::array();
    for (const auto& p : r.periods)
        periods.push_back({{"period", p.period},
                           {"train_accuracy", p.train_accuracy},
                           {"test_accuracy", p.test_accuracy},
                           {"best_train_loss", p.best_train_loss}});
    json j{{"format", "qtrain-run"},
           {"version", 1},
           {"config", config_to_json(r.config)},
           {"mapping", mapping_to_json(r.mapping)},
           {"network", r.network_text},
           {"qnn_param_count", r.qnn_param_count},
           {"metrics", metrics},
           {"periods", periods},
           {"best_phi", r.best_phi},
           {"best_gamma", r.best_gamma},
           {"best_train_loss", r.best_train_loss},
           {"final_phi", r.final_phi},
           {"final_gamma", r.final_gamma},
           {"final_weights", r.final_weights},
           {"final_train_accuracy", r.final_train_accuracy},
           {"final_test_accuracy", r.final_test_accuracy},
           {"best_test_accuracy", r.best_test_accuracy},
           {"wall_seconds", r.wall_seconds}};
    return j.dump(2);
}

RunRecord run_record_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.value("format", "") != "qtrain-run")
        throw std::runtime_error("run record: unrecognized format");
    RunRecord r;
    r.config = config_from_json(j.at("config"));
    r.mapping = mapping_from_json(j.at("mapping"));
    j.at("network").get_to(r.network_text);
    j.at("qnn_param_count").get_to(r.qnn_param_count);
    for (const auto& m : j.at("metrics"))
        r.metrics.push_back({m.at(0).get<long long>(), m.at(1).get<std::string>()[0],
                             m.at(2).get<double>(), m.at(3).get<double>(),
                             m.at(4).get<double>()});
    for (const auto& p : j.at("periods"))
        r.periods.push_back({p.at("period").get<int>(), p.at("train_accuracy").get<double>(),
                             p.at("test_accuracy").get<double>(),
                             p.at("best_train_loss").get<double>()});
    j.at("best_phi").get_to(r.best_phi);
    j.at("best_gamma").get_to(r.best_gamma);
    j.at("best_train_loss").get_to(r.best_train_loss);
    j.at("final_phi").get_to(r.final_phi);
    j.at("final_gamma").get_to(r.final_gamma);
    j.at("final_weights").get_to(r.final_weights);
    j.at("final_train_accuracy").get_to(r.final_train_accuracy);
    j.at("final_test_accuracy").get_to(r.final_test_accuracy);
    j.at("best_test_accuracy").get_to(r.best_test_accuracy);
    j.at("wall_seconds").get_to(r.wall_seconds);
    return r;
}

void write_metrics_csv(const std::string& path, const RunRecord& record) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "eval_index,stage,loss,ce,fail_rate\n";
    out.precision(17);
    for (const auto& m : record.metrics)
        out << m.eval_index << "," << (m.stage == 'p' ? "phi" : "gamma") << "," << m.loss << ","
            << m.ce << "," << m.fail_rate << "\n";
}

}  // namespace qtrain
