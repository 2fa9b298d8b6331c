// Training orchestration: composes circuit simulation -> probability mapping
// -> classical forward pass into the classification loss (cross-entropy plus
// failure rate), alternates a COBYLA stage over the circuit angles with a
// Nelder-Mead stage over the scaling factor, and records every evaluation.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtrain/ansatz.hpp"
#include "qtrain/dataset.hpp"
#include "qtrain/mapping.hpp"
#include "qtrain/network.hpp"
#include "qtrain/optimize.hpp"

namespace qtrain {

struct TrainingConfig {
    std::string dataset = "iris";  // iris | mnist
    std::string network;           // textual NetworkSpec; empty = dataset default
    int qnn_layers = 1;
    std::int64_t shots = 0;  // 0 = exact statevector probabilities
    std::uint64_t seed = 0;
    int periods = 1;
    long long phi_evals = 100;
    long long gamma_evals = 10;
    double gamma_init = 0.3;
    double rho_begin = 0.5;
    double rho_end = 1e-4;
    double nm_step = 0.1;
    // true: the angle optimizer's simplex survives across periods (only the
    // trust radius resets). Needed when phi_evals < param_count + 2.
    bool cobyla_resume = false;

    std::string iris_path = "data/iris.csv";
    std::string mnist_dir = "data/mnist";
    int train_limit = 0;  // <= 0: full split
    int test_limit = 0;

    void validate() const;
    NetworkSpec network_spec() const;  // parses `network` or the dataset default
};

struct LossReport {
    double total_loss = 0.0;
    double cross_entropy = 0.0;
    double failure_rate = 0.0;
    long long n_fail = 0;
    long long n_data = 0;
};

struct EvalMetric {
    long long eval_index = 0;
    char stage = 'p';  // 'p' = angle stage, 'g' = scaling stage
    double loss = 0.0;
    double ce = 0.0;
    double fail_rate = 0.0;
};

struct PeriodMetric {
    int period = 0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double best_train_loss = 0.0;
};

struct RunRecord {
    TrainingConfig config;
    MappingTable mapping;
    std::string network_text;
    int qnn_param_count = 0;
    std::vector<EvalMetric> metrics;
    std::vector<PeriodMetric> periods;
    std::vector<double> best_phi;
    double best_gamma = 0.0;
    double best_train_loss = 0.0;
    std::vector<double> final_phi;
    double final_gamma = 0.0;
    std::vector<double> final_weights;  // from exact probabilities at final phi/gamma
    double final_train_accuracy = 0.0;
    double final_test_accuracy = 0.0;
    double best_test_accuracy = 0.0;  // test accuracy at the best-loss parameters
    double wall_seconds = 0.0;
};

LossReport evaluate_loss(const NetworkSpec& spec, const std::vector<double>& weights,
                         const Dataset& data);

LossReport evaluate_loss(const AnsatzSpec& ansatz, const std::vector<double>& phi, double gamma,
                         const NetworkSpec& spec, const MappingTable& mapping, const Dataset& data,
                         std::int64_t shots, std::uint64_t shot_seed);

double evaluate_accuracy(const AnsatzSpec& ansatz, const std::vector<double>& phi, double gamma,
                         const NetworkSpec& spec, const MappingTable& mapping,
                         const Dataset& data);

RunRecord run_training_session(const TrainingConfig& config, const DatasetSplit& data);

// Loads datasets itself, per config paths.
RunRecord run_training_session(const TrainingConfig& config);

// JSON / CSV persistence (run.json and metrics.csv of a run directory).
std::string run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const std::string& json_text);
void write_metrics_csv(const std::string& path, const RunRecord& record);

}  // namespace qtrain
