// Python module exposing the main operations: ansatz simulation, the
// probability-to-weight mapping, network inference, training sessions, and
// model export.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qtrain/trainer.hpp"
#include "qtrain/weights_io.hpp"

namespace py = pybind11;
using namespace qtrain;

PYBIND11_MODULE(_qtrain, m) {
    m.doc() = "hybrid trainer: classical networks driven by a simulated parameterized circuit";

    py::class_<AnsatzSpec>(m, "AnsatzSpec")
        .def(py::init([](int qubits, int layers) {
                 AnsatzSpec s{qubits, layers};
                 s.validate();
                 return s;
             }),
             py::arg("num_qubits"), py::arg("num_layers"))
        .def_readonly("num_qubits", &AnsatzSpec::num_qubits)
        .def_readonly("num_layers", &AnsatzSpec::num_layers)
        .def("param_count", &AnsatzSpec::param_count);

    m.def(
        "circuit_probabilities",
        [](const AnsatzSpec& spec, const std::vector<double>& angles) {
            const Statevector state = build_ansatz_state(spec, angles);
            return exact_probabilities(state).probs;
        },
        py::arg("spec"), py::arg("angles"),
        "Exact measurement probabilities of the ansatz state.");
    m.def(
        "sampled_probabilities",
        [](const AnsatzSpec& spec, const std::vector<double>& angles, std::int64_t shots,
           std::uint64_t seed) {
            const Statevector state = build_ansatz_state(spec, angles);
            return sample_probabilities(state, shots, seed).probs;
        },
        py::arg("spec"), py::arg("angles"), py::arg("shots"), py::arg("seed"),
        "Finite-shot estimate of the measurement probabilities.");

    py::class_<MappingTable>(m, "MappingTable")
        .def_readonly("weight_count", &MappingTable::weight_count)
        .def_readonly("num_qubits", &MappingTable::num_qubits)
        .def_property_readonly("paired_count",
                               [](const MappingTable& t) { return t.paired.size(); })
        .def_property_readonly("single_count",
                               [](const MappingTable& t) { return t.single.size(); });
    m.def("build_mapping", &build_mapping, py::arg("weight_count"), py::arg("seed"));
    m.def(
        "map_probabilities_to_weights",
        [](const MappingTable& table, const std::vector<double>& probs, double gamma) {
            ProbabilityDistribution dist;
            dist.probs = probs;
            return apply_mapping(table, dist, gamma);
        },
        py::arg("table"), py::arg("probs"), py::arg("gamma"));

    py::class_<NetworkSpec>(m, "NetworkSpec")
        .def("param_count", &NetworkSpec::param_count)
        .def("__repr__", [](const NetworkSpec& s) { return format_network_spec(s); });
    m.def("parse_network_spec", &parse_network_spec, py::arg("text"));
    m.def(
        "predict",
        [](const NetworkSpec& spec, const std::vector<double>& weights,
           const std::vector<double>& sample) {
            const Prediction p = forward(spec, weights, sample);
            return py::make_tuple(p.predicted_class, p.class_scores);
        },
        py::arg("spec"), py::arg("weights"), py::arg("sample"));

    py::class_<TrainingConfig>(m, "TrainingConfig")
        .def(py::init<>())
        .def_readwrite("dataset", &TrainingConfig::dataset)
        .def_readwrite("network", &TrainingConfig::network)
        .def_readwrite("qnn_layers", &TrainingConfig::qnn_layers)
        .def_readwrite("shots", &TrainingConfig::shots)
        .def_readwrite("seed", &TrainingConfig::seed)
        .def_readwrite("periods", &TrainingConfig::periods)
        .def_readwrite("phi_evals", &TrainingConfig::phi_evals)
        .def_readwrite("gamma_evals", &TrainingConfig::gamma_evals)
        .def_readwrite("gamma_init", &TrainingConfig::gamma_init)
        .def_readwrite("cobyla_resume", &TrainingConfig::cobyla_resume)
        .def_readwrite("iris_path", &TrainingConfig::iris_path)
        .def_readwrite("mnist_dir", &TrainingConfig::mnist_dir)
        .def_readwrite("train_limit", &TrainingConfig::train_limit)
        .def_readwrite("test_limit", &TrainingConfig::test_limit);

    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("final_gamma", &RunRecord::final_gamma)
        .def_readonly("final_phi", &RunRecord::final_phi)
        .def_readonly("final_weights", &RunRecord::final_weights)
        .def_readonly("final_train_accuracy", &RunRecord::final_train_accuracy)
        .def_readonly("final_test_accuracy", &RunRecord::final_test_accuracy)
        .def_readonly("best_train_loss", &RunRecord::best_train_loss)
        .def_readonly("qnn_param_count", &RunRecord::qnn_param_count)
        .def_property_readonly("losses", [](const RunRecord& r) {
            std::vector<double> out;
            out.reserve(r.metrics.size());
            for (const auto& m : r.metrics) out.push_back(m.loss);
            return out;
        });
    m.def(
        "run_training_session",
        [](const TrainingConfig& config) { return run_training_session(config); },
        py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("run_record_to_json", &run_record_to_json, py::arg("record"));

    py::class_<ExportedModel>(m, "ExportedModel")
        .def_readonly("gamma", &ExportedModel::gamma)
        .def_readonly("weights", &ExportedModel::weights);
    m.def(
        "export_model",
        [](const std::string& path, const std::string& network_text, double gamma,
           const std::vector<double>& weights) {
            save_model(path, {parse_network_spec(network_text), gamma, weights});
        },
        py::arg("path"), py::arg("network_text"), py::arg("gamma"), py::arg("weights"));
    m.def("load_model", &load_model, py::arg("path"));
    m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("index"));
    m.def(
        "evaluate_exported",
        [](const std::string& path, const std::string& iris_path, std::uint64_t split_seed) {
            const ExportedModel model = load_model(path);
            const DatasetSplit data = load_iris(iris_path, split_seed);
            const EvalResult r = evaluate_model(model, data.test);
            return py::make_tuple(r.accuracy, r.confusion);
        },
        py::arg("path"), py::arg("iris_path"), py::arg("split_seed"));
}
