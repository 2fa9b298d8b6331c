"""Smoke test for the _qtrain python module (run via ctest with PYTHONPATH set)."""

import math
import os
import tempfile

import _qtrain as qt


def data_root():
    return os.environ.get("QTRAIN_DATA_DIR", "data")


def test_circuit_probabilities():
    spec = qt.AnsatzSpec(3, 1)
    assert spec.param_count() == 12
    probs = qt.circuit_probabilities(spec, [0.0] * 12)
    assert len(probs) == 8
    assert abs(sum(probs) - 1.0) < 1e-12
    assert all(abs(p - 0.125) < 1e-12 for p in probs)

    sampled = qt.sampled_probabilities(spec, [0.3] * 12, 4096, 1)
    assert abs(sum(sampled) - 1.0) < 1e-12
    assert sampled == qt.sampled_probabilities(spec, [0.3] * 12, 4096, 1)


def test_mapping():
    table = qt.build_mapping(131, 5)
    assert table.num_qubits == 8
    assert table.paired_count == 125
    assert table.single_count == 6
    probs = [1.0 / 256] * 256
    weights = qt.map_probabilities_to_weights(table, probs, 0.3)
    assert len(weights) == 131
    assert all(abs(w) < 0.3 for w in weights)


def test_network():
    spec = qt.parse_network_spec("input:4 dense:4:16 relu dense:16:3 softmax")
    assert spec.param_count() == 131
    cls, scores = qt.predict(spec, [0.0] * 131, [1.0, 2.0, 3.0, 4.0])
    assert cls == 0
    assert abs(sum(scores) - 1.0) < 1e-12
    assert all(abs(s - 1.0 / 3.0) < 1e-12 for s in scores)


def test_training_and_export():
    cfg = qt.TrainingConfig()
    cfg.dataset = "iris"
    cfg.iris_path = os.path.join(data_root(), "iris.csv")
    cfg.periods = 1
    cfg.phi_evals = 40
    cfg.gamma_evals = 5
    cfg.seed = 3
    record = qt.run_training_session(cfg)
    assert record.qnn_param_count == 32
    assert len(record.final_weights) == 131
    assert len(record.losses) >= 40
    assert all(math.isfinite(x) for x in record.losses)
    assert 0.0 <= record.final_test_accuracy <= 1.0
    assert "qtrain-run" in qt.run_record_to_json(record)

    path = os.path.join(tempfile.gettempdir(), "qtrain_py_smoke.dat")
    qt.export_model(path, "input:4 dense:4:16 relu dense:16:3 softmax",
                    record.final_gamma, record.final_weights)
    loaded = qt.load_model(path)
    assert loaded.weights == record.final_weights

    # the trainer derives the dataset split seed as stream 1 of the run seed
    split_seed = qt.derive_seed(cfg.seed, 1)
    accuracy, confusion = qt.evaluate_exported(path, cfg.iris_path, split_seed)
    assert accuracy == record.final_test_accuracy
    assert sum(sum(row) for row in confusion) == 50


def main():
    test_circuit_probabilities()
    test_mapping()
    test_network()
    test_training_and_export()
    print("python smoke: OK")


if __name__ == "__main__":
    main()
