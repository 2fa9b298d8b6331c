// qtrain command line: `train` runs a full session and writes the run
// directory (run.json, metrics.csv, weights.dat), `eval` scores an exported
// model classically, `inspect` summarizes run records into plot-ready CSV.
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "qtrain/config.hpp"
#include "qtrain/trainer.hpp"
#include "qtrain/weights_io.hpp"

namespace fs = std::filesystem;
using namespace qtrain;

namespace {

struct TrainArgs {
    std::string config_path;
    std::optional<std::string> dataset, network, shots, iris_path, mnist_dir, out_dir;
    std::optional<int> qnn_layers, periods, train_limit, test_limit;
    std::optional<long long> phi_evals, gamma_evals;
    std::optional<std::uint64_t> seed;
    std::optional<double> gamma_init;
    std::optional<bool> cobyla_resume;
};

void apply_flag(RunConfig& cfg, const std::string& key, const auto& opt) {
    if (opt) apply_override(cfg, key, [&] {
        if constexpr (std::is_same_v<std::decay_t<decltype(*opt)>, std::string>)
            return *opt;
        else if constexpr (std::is_same_v<std::decay_t<decltype(*opt)>, bool>)
            return std::string(*opt ? "true" : "false");
        else
            return std::to_string(*opt);
    }());
}

RunConfig resolve_config(const TrainArgs& args) {
    RunConfig cfg;
    if (!args.config_path.empty()) cfg = load_config_file(args.config_path);

    const RunConfig defaults;
    const bool iris_from_file = cfg.training.iris_path != defaults.training.iris_path;
    const bool mnist_from_file = cfg.training.mnist_dir != defaults.training.mnist_dir;

    apply_flag(cfg, "dataset", args.dataset);
    apply_flag(cfg, "network", args.network);
    apply_flag(cfg, "qnn_layers", args.qnn_layers);
    apply_flag(cfg, "shots", args.shots);
    apply_flag(cfg, "seed", args.seed);
    apply_flag(cfg, "periods", args.periods);
    apply_flag(cfg, "phi_evals", args.phi_evals);
    apply_flag(cfg, "gamma_evals", args.gamma_evals);
    apply_flag(cfg, "gamma_init", args.gamma_init);
    apply_flag(cfg, "cobyla_resume", args.cobyla_resume);
    apply_flag(cfg, "iris_path", args.iris_path);
    apply_flag(cfg, "mnist_dir", args.mnist_dir);
    apply_flag(cfg, "train_limit", args.train_limit);
    apply_flag(cfg, "test_limit", args.test_limit);
    apply_flag(cfg, "out_dir", args.out_dir);

    // Dataset root fallback: flag > config > QTRAIN_DATA_DIR > built-in.
    if (const char* root = std::getenv("QTRAIN_DATA_DIR")) {
        if (!args.iris_path && !iris_from_file)
            cfg.training.iris_path = std::string(root) + "/iris.csv";
        if (!args.mnist_dir && !mnist_from_file)
            cfg.training.mnist_dir = std::string(root) + "/mnist";
    }
    return cfg;
}

std::string timestamp_tag() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", std::localtime(&t));
    return buf;
}

int cmd_train(const TrainArgs& args) {
    const RunConfig cfg = resolve_config(args);
    cfg.training.validate();

    // Load data before touching the output directory; a missing dataset must
    // not leave partial artifacts behind.
    DatasetSplit data;
    if (cfg.training.dataset == "iris")
        data = load_iris(cfg.training.iris_path, derive_seed(cfg.training.seed, 1));
    else
        data = load_mnist(cfg.training.mnist_dir, cfg.training.train_limit,
                          cfg.training.test_limit, derive_seed(cfg.training.seed, 1));

    const RunRecord record = run_training_session(cfg.training, data);

    const fs::path run_dir = fs::path(cfg.out_dir) /
                             (timestamp_tag() + "-seed" + std::to_string(cfg.training.seed));
    fs::create_directories(run_dir);
    {
        std::ofstream out(run_dir / "run.json");
        out << run_record_to_json(record) << "\n";
    }
    write_metrics_csv((run_dir / "metrics.csv").string(), record);
    save_model((run_dir / "weights.dat").string(),
               {record.config.network_spec(), record.final_gamma, record.final_weights});

    std::cout << "run dir:        " << run_dir.string() << "\n"
              << "qnn params:     " << record.qnn_param_count << " / " << record.mapping.weight_count
              << " weights (ratio " << 100.0 * record.qnn_param_count / record.mapping.weight_count
              << "%)\n"
              << "final train acc " << record.final_train_accuracy << "\n"
              << "final test acc  " << record.final_test_accuracy << "\n";
    return 0;
}

int cmd_eval(const std::string& weights_path, const std::string& dataset,
             const std::string& split, const std::string& iris_path, const std::string& mnist_dir,
             std::uint64_t seed) {
    const ExportedModel model = load_model(weights_path);
    DatasetSplit data;
    if (dataset == "iris")
        data = load_iris(iris_path, derive_seed(seed, 1));
    else
        data = load_mnist(mnist_dir, 0, 0, derive_seed(seed, 1));
    const Dataset& d = split == "train" ? data.train : data.test;

    const EvalResult result = evaluate_model(model, d);
    std::cout << "samples:  " << d.size() << "\n"
              << "accuracy: " << result.accuracy << "\n"
              << "confusion (rows = true class, cols = predicted):\n";
    for (const auto& row : result.confusion) {
        for (long long v : row) std::cout << v << " ";
        std::cout << "\n";
    }
    return 0;
}

int cmd_inspect(const std::vector<std::string>& record_paths, const std::string& loss_csv,
                const std::string& accuracy_csv, const std::string& shots_csv) {
    std::vector<RunRecord> records;
    for (const auto& p : record_paths) {
        std::ifstream in(p);
        if (!in) throw std::runtime_error("cannot open " + p);
        std::stringstream buf;
        buf << in.rdbuf();
        records.push_back(run_record_from_json(buf.str()));
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
        const RunRecord& r = records[i];
        std::cout << record_paths[i] << ":\n"
                  << "  dataset " << r.config.dataset << ", M = " << r.mapping.weight_count
                  << ", N = " << r.mapping.num_qubits << " qubits, L = " << r.config.qnn_layers
                  << "\n"
                  << "  mapping: " << r.mapping.paired.size() << " paired / "
                  << r.mapping.single.size() << " single-basis weights\n"
                  << "  qnn params " << r.qnn_param_count << " (ratio "
                  << 100.0 * r.qnn_param_count / r.mapping.weight_count << "%)\n"
                  << "  shots " << (r.config.shots == 0 ? std::string("exact")
                                                        : std::to_string(r.config.shots))
                  << ", final test accuracy " << r.final_test_accuracy << "\n";
    }

    if (!loss_csv.empty()) {
        std::ofstream out(loss_csv);
        out << "eval_index,loss,stage\n";
        out.precision(17);
        for (const auto& m : records.front().metrics)
            out << m.eval_index << "," << m.loss << "," << (m.stage == 'p' ? "phi" : "gamma")
                << "\n";
    }
    if (!accuracy_csv.empty()) {
        std::ofstream out(accuracy_csv);
        out << "period,train_accuracy,test_accuracy\n";
        out.precision(17);
        for (const auto& p : records.front().periods)
            out << p.period << "," << p.train_accuracy << "," << p.test_accuracy << "\n";
    }
    if (!shots_csv.empty()) {
        std::ofstream out(shots_csv);
        out << "shots,final_test_accuracy\n";
        out.precision(17);
        for (const auto& r : records)
            out << r.config.shots << "," << r.final_test_accuracy << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Train classical neural networks through a simulated quantum circuit"};
    app.require_subcommand(1);

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "Run a training session");
    train->add_option("--config", train_args.config_path, "Config file");
    train->add_option("--dataset", train_args.dataset, "iris or mnist");
    train->add_option("--network", train_args.network, "Network spec override");
    train->add_option("--qnn-layers", train_args.qnn_layers, "Ansatz layer count");
    train->add_option("--shots", train_args.shots, "'exact' or a shot count");
    train->add_option("--seed", train_args.seed, "Session seed");
    train->add_option("--periods", train_args.periods, "Training periods");
    train->add_option("--phi-evals", train_args.phi_evals, "Angle-stage evaluation budget");
    train->add_option("--gamma-evals", train_args.gamma_evals, "Scaling-stage evaluation budget");
    train->add_option("--gamma-init", train_args.gamma_init, "Initial scaling factor");
    train->add_option("--cobyla-resume", train_args.cobyla_resume,
                      "Keep the angle optimizer's simplex across periods");
    train->add_option("--iris-path", train_args.iris_path, "Iris CSV path");
    train->add_option("--mnist-dir", train_args.mnist_dir, "MNIST IDX directory");
    train->add_option("--train-limit", train_args.train_limit, "Stratified train subsample size");
    train->add_option("--test-limit", train_args.test_limit, "Stratified test subsample size");
    train->add_option("--out", train_args.out_dir, "Output directory root");

    std::string weights_path, eval_dataset = "iris", eval_split = "test";
    std::string eval_iris = "data/iris.csv", eval_mnist = "data/mnist";
    std::uint64_t eval_seed = 0;
    auto* eval = app.add_subcommand("eval", "Evaluate an exported model (classical only)");
    eval->add_option("weights", weights_path, "weights.dat file")->required();
    eval->add_option("--dataset", eval_dataset, "iris or mnist");
    eval->add_option("--split", eval_split, "train or test");
    eval->add_option("--iris-path", eval_iris, "Iris CSV path");
    eval->add_option("--mnist-dir", eval_mnist, "MNIST IDX directory");
    eval->add_option("--seed", eval_seed, "Split seed (must match the producing run)");

    std::vector<std::string> record_paths;
    std::string loss_csv, accuracy_csv, shots_csv;
    auto* inspect = app.add_subcommand("inspect", "Summarize run records");
    inspect->add_option("records", record_paths, "run.json files")->required();
    inspect->add_option("--loss-csv", loss_csv, "Write loss-vs-evaluation series (first record)");
    inspect->add_option("--accuracy-csv", accuracy_csv,
                        "Write per-period accuracy series (first record)");
    inspect->add_option("--shots-csv", shots_csv,
                        "Write shots-vs-final-test-accuracy table (all records)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) return cmd_train(train_args);
        if (*eval) {
            if (const char* root = std::getenv("QTRAIN_DATA_DIR")) {
                if (eval_iris == "data/iris.csv") eval_iris = std::string(root) + "/iris.csv";
                if (eval_mnist == "data/mnist") eval_mnist = std::string(root) + "/mnist";
            }
            return cmd_eval(weights_path, eval_dataset, eval_split, eval_iris, eval_mnist,
                            eval_seed);
        }
        if (*inspect) return cmd_inspect(record_paths, loss_csv, accuracy_csv, shots_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
