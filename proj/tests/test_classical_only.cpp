// Links only the classical library (see tests/CMakeLists.txt): evaluating an
// exported model must not pull in any quantum-simulation code path.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "qtrain/dataset.hpp"
#include "qtrain/weights_io.hpp"

using namespace qtrain;

TEST_CASE("exported model round trip and classical evaluation") {
    const auto dir = std::filesystem::temp_directory_path() / "qtrain_classical_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "model.dat").string();

    ExportedModel model;
    model.spec = parse_network_spec("input:4 dense:4:16 relu dense:16:3 softmax");
    model.gamma = 0.31;
    model.weights.assign(131, 0.0);
    for (std::size_t i = 0; i < model.weights.size(); ++i)
        model.weights[i] = (i % 2 ? -1.0 : 1.0) * 0.001 * static_cast<double>(i % 97);
    save_model(path, model);

    const ExportedModel loaded = load_model(path);
    CHECK(loaded.weights == model.weights);  // full round-trip precision
    CHECK(loaded.gamma == model.gamma);
    CHECK(format_network_spec(loaded.spec) == format_network_spec(model.spec));

    std::string iris = "data/iris.csv";
    if (const char* root = std::getenv("QTRAIN_DATA_DIR")) iris = std::string(root) + "/iris.csv";
    const auto data = load_iris(iris, 1);
    const EvalResult a = evaluate_model(loaded, data.test);
    const EvalResult b = evaluate_model(model, data.test);
    CHECK(a.accuracy == b.accuracy);
    long long total = 0;
    for (const auto& row : a.confusion)
        for (long long v : row) total += v;
    CHECK(total == 50);
}

TEST_CASE("corrupted model headers are rejected cleanly") {
    const auto dir = std::filesystem::temp_directory_path() / "qtrain_classical_test";
    std::filesystem::create_directories(dir);

    const auto bad1 = (dir / "bad1.dat").string();
    std::ofstream(bad1) << "qtrain-weights 99\nnetwork input:1 dense:1:1\nm 2\ngamma 0.3\n0\n0\n";
    CHECK_THROWS(load_model(bad1));

    const auto bad2 = (dir / "bad2.dat").string();
    std::ofstream(bad2) << "qtrain-weights 1\nnetwork input:1 dense:1:1\nm 5\ngamma 0.3\n0\n0\n";
    CHECK_THROWS(load_model(bad2));  // wrong weight count

    CHECK_THROWS(load_model((dir / "missing.dat").string()));
}

TEST_CASE("zero-weight model predicts the tie-break class everywhere") {
    ExportedModel model;
    model.spec = parse_network_spec("input:4 dense:4:16 relu dense:16:3 softmax");
    model.gamma = 0.0;
    model.weights.assign(131, 0.0);

    std::string iris = "data/iris.csv";
    if (const char* root = std::getenv("QTRAIN_DATA_DIR")) iris = std::string(root) + "/iris.csv";
    const auto data = load_iris(iris, 1);
    const EvalResult result = evaluate_model(model, data.test);
    long long class0 = 0;
    for (int label : data.test.labels) class0 += label == 0;
    CHECK(result.accuracy ==
          doctest::Approx(static_cast<double>(class0) / data.test.size()).epsilon(1e-12));
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t p = 1; p < 3; ++p) CHECK(result.confusion[c][p] == 0);
    }
}
