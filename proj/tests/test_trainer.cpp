#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "qtrain/trainer.hpp"
#include "qtrain/weights_io.hpp"

using namespace qtrain;

namespace {

TrainingConfig iris_config() {
    TrainingConfig c;
    c.dataset = "iris";
    if (const char* root = std::getenv("QTRAIN_DATA_DIR"))
        c.iris_path = std::string(root) + "/iris.csv";
    return c;
}

}  // namespace

TEST_CASE("gamma = 0 gives the uniform-prediction loss on iris") {
    const TrainingConfig c = iris_config();
    const auto data = load_iris(c.iris_path, 1);
    const NetworkSpec spec = c.network_spec();
    const MappingTable mapping = build_mapping(spec.param_count(), 5);
    AnsatzSpec ansatz{mapping.num_qubits, 1};
    std::vector<double> phi(ansatz.param_count(), 0.5);

    const LossReport report =
        evaluate_loss(ansatz, phi, 0.0, spec, mapping, data.train, 0, 0);
    CHECK(report.cross_entropy == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    // argmax ties resolve to class 0, so the failure rate is the share of
    // non-class-0 training samples
    long long class0 = 0;
    for (int label : data.train.labels) class0 += label == 0;
    const double expected_fail = 1.0 - static_cast<double>(class0) / data.train.size();
    CHECK(report.failure_rate == doctest::Approx(expected_fail).epsilon(1e-12));
    CHECK(report.total_loss == report.cross_entropy + report.failure_rate);

    const double acc =
        evaluate_accuracy(ansatz, phi, 0.0, spec, mapping, data.train);
    CHECK(acc == doctest::Approx(static_cast<double>(class0) / data.train.size()).epsilon(1e-12));
}

TEST_CASE("a perfectly separating network reaches the loss lower bound") {
    // One feature, two classes at x = -1 / +1, huge-margin dense classifier.
    Dataset data;
    data.class_count = 2;
    data.sample_shape = {1, 1, 1};
    for (int i = 0; i < 10; ++i) {
        data.features.push_back({i % 2 == 0 ? -1.0 : 1.0});
        data.labels.push_back(i % 2);
    }
    const auto spec = parse_network_spec("input:1 dense:1:2 softmax");
    // logits (-1000 x, +1000 x)
    const std::vector<double> weights = {-1000.0, 1000.0, 0.0, 0.0};
    const LossReport report = evaluate_loss(spec, weights, data);
    CHECK(report.n_fail == 0);
    CHECK(report.failure_rate == 0.0);
    CHECK(report.cross_entropy < 1e-12);
    CHECK(report.total_loss == report.cross_entropy);
}

TEST_CASE("minimal smoke session emits a well-formed record") {
    TrainingConfig c = iris_config();
    c.qnn_layers = 1;
    c.periods = 1;
    c.phi_evals = 34;  // dim 32 + 2
    c.gamma_evals = 3;
    c.seed = 11;
    const RunRecord record = run_training_session(c);

    CHECK(record.qnn_param_count == 32);
    CHECK(record.mapping.weight_count == 131);
    CHECK(record.metrics.size() <= 37);
    CHECK(record.metrics.size() >= 35);
    CHECK(record.periods.size() == 1);
    CHECK(record.final_phi.size() == 32);
    CHECK(record.final_weights.size() == 131);
    for (std::size_t i = 0; i < record.metrics.size(); ++i) {
        const auto& m = record.metrics[i];
        CHECK(m.eval_index == static_cast<long long>(i));
        CHECK(std::abs(m.loss - (m.ce + m.fail_rate)) < 1e-12);
    }
    // stage tags: first phi_evals are 'p', then 'g'
    for (int i = 0; i < 34; ++i) CHECK(record.metrics[i].stage == 'p');
    for (std::size_t i = 34; i < record.metrics.size(); ++i)
        CHECK(record.metrics[i].stage == 'g');
}

TEST_CASE("session evaluation budget is respected") {
    TrainingConfig c = iris_config();
    c.periods = 3;
    c.phi_evals = 40;
    c.gamma_evals = 5;
    c.seed = 2;
    const RunRecord record = run_training_session(c);
    CHECK(record.metrics.size() <= static_cast<std::size_t>(3 * 45));
    CHECK(record.periods.size() == 3);
}

TEST_CASE("exact-mode sessions are bit-reproducible") {
    TrainingConfig c = iris_config();
    c.periods = 2;
    c.phi_evals = 34;
    c.gamma_evals = 4;
    c.seed = 77;
    const RunRecord a = run_training_session(c);
    const RunRecord b = run_training_session(c);
    CHECK(a.final_phi == b.final_phi);
    CHECK(a.final_gamma == b.final_gamma);
    CHECK(a.final_weights == b.final_weights);
    CHECK(a.final_test_accuracy == b.final_test_accuracy);
    REQUIRE(a.metrics.size() == b.metrics.size());
    for (std::size_t i = 0; i < a.metrics.size(); ++i) {
        CHECK(a.metrics[i].loss == b.metrics[i].loss);
        CHECK(a.metrics[i].ce == b.metrics[i].ce);
    }
}

TEST_CASE("shot-mode sessions replay identical stochastic trajectories") {
    TrainingConfig c = iris_config();
    c.periods = 1;
    c.phi_evals = 34;
    c.gamma_evals = 3;
    c.shots = 256;
    c.seed = 5;
    const RunRecord a = run_training_session(c);
    const RunRecord b = run_training_session(c);
    REQUIRE(a.metrics.size() == b.metrics.size());
    for (std::size_t i = 0; i < a.metrics.size(); ++i)
        CHECK(a.metrics[i].loss == b.metrics[i].loss);
}

TEST_CASE("run record json round trips") {
    TrainingConfig c = iris_config();
    c.periods = 1;
    c.phi_evals = 34;
    c.gamma_evals = 3;
    c.seed = 21;
    const RunRecord a = run_training_session(c);
    const RunRecord b = run_record_from_json(run_record_to_json(a));
    CHECK(b.final_phi == a.final_phi);
    CHECK(b.final_weights == a.final_weights);
    CHECK(b.mapping.paired.size() == a.mapping.paired.size());
    CHECK(b.metrics.size() == a.metrics.size());
    CHECK(b.config.seed == a.config.seed);
    CHECK(b.network_text == a.network_text);
    CHECK_THROWS(run_record_from_json("{\"format\": \"other\"}"));
}

TEST_CASE("exported weights reproduce accuracy and respect the gamma bound") {
    TrainingConfig c = iris_config();
    c.periods = 2;
    c.phi_evals = 50;
    c.gamma_evals = 5;
    c.seed = 31;
    const RunRecord record = run_training_session(c);

    const auto dir = std::filesystem::temp_directory_path() / "qtrain_trainer_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "weights.dat").string();
    save_model(path, {c.network_spec(), record.final_gamma, record.final_weights});
    const ExportedModel model = load_model(path);
    CHECK(model.weights == record.final_weights);
    CHECK(model.gamma == record.final_gamma);

    const auto data = load_iris(c.iris_path, derive_seed(c.seed, 1));
    const EvalResult result = evaluate_model(model, data.test);
    CHECK(result.accuracy == record.final_test_accuracy);
    for (double w : model.weights) CHECK(std::abs(w) < std::abs(model.gamma));
}

TEST_CASE("config validation") {
    TrainingConfig c = iris_config();
    c.dataset = "cifar";
    CHECK_THROWS(c.validate());
    c = iris_config();
    c.periods = 0;
    CHECK_THROWS(c.validate());
    c = iris_config();
    c.shots = -3;
    CHECK_THROWS(c.validate());
    c = iris_config();
    c.rho_begin = 1e-5;
    CHECK_THROWS(c.validate());
}
