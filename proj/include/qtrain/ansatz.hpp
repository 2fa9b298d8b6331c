// EfficientSU2-style hardware-efficient ansatz: an initial Hadamard layer,
// then L repetitions of [Ry block, Rz block, linear CNOT chain], closed by a
// final Ry+Rz block. Parameter count is 2*N*(L+1); angles are consumed in
// circuit order, Ry for qubits 0..N-1 then Rz for qubits 0..N-1 per block.
#pragma once

#include <stdexcept>
#include <vector>

#include "qtrain/statevector.hpp"

namespace qtrain {

struct AnsatzSpec {
    int num_qubits = 1;
    int num_layers = 1;  // entanglement pattern is fixed: linear CNOT chain

    int param_count() const { return 2 * num_qubits * (num_layers + 1); }

    void validate() const {
        if (num_qubits < 1) throw std::invalid_argument("ansatz: num_qubits must be >= 1");
        if (num_layers < 1) throw std::invalid_argument("ansatz: num_layers must be >= 1");
    }
};

inline Statevector build_ansatz_state(const AnsatzSpec& spec, const std::vector<double>& angles) {
    spec.validate();
    if (static_cast<int>(angles.size()) != spec.param_count())
        throw std::invalid_argument("ansatz: angle count does not match spec");
    for (double a : angles)
        if (!std::isfinite(a)) throw std::invalid_argument("ansatz: non-finite angle");

    const int n = spec.num_qubits;
    Statevector state(n);
    for (int q = 0; q < n; ++q) state.apply_h(q);

    std::size_t next = 0;
    auto rotation_block = [&] {
        for (int q = 0; q < n; ++q) state.apply_ry(q, angles[next++]);
        for (int q = 0; q < n; ++q) state.apply_rz(q, angles[next++]);
    };

    for (int layer = 0; layer < spec.num_layers; ++layer) {
        rotation_block();
        for (int q = 0; q + 1 < n; ++q) state.apply_cnot(q, q + 1);
    }
    rotation_block();
    return state;
}

}  // namespace qtrain
