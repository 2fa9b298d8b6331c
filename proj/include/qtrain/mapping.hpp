// Maps the 2^N measurement probabilities of an N-qubit state onto M classical
// network weights. Three stages: a frozen random assignment of basis indices
// to weight indices (2^N - M weights average two bases, the rest read one),
// a sign fixed by weight-index parity, and a gamma*tanh rescaling that keeps
// the average weight magnitude independent of the system size.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qtrain/rng.hpp"
#include "qtrain/statevector.hpp"

namespace qtrain {

struct PairedAssignment {
    int weight_index;
    std::size_t basis_a;
    std::size_t basis_b;
};

struct SingleAssignment {
    int weight_index;
    std::size_t basis;
};

struct MappingTable {
    int weight_count = 0;   // M
    int num_qubits = 0;     // N = ceil(log2 M)
    std::uint64_t seed = 0;
    std::vector<PairedAssignment> paired;
    std::vector<SingleAssignment> single;
};

inline int qubits_for_weights(int weight_count) {
    int n = 1;
    while ((std::size_t{1} << n) < static_cast<std::size_t>(weight_count)) ++n;
    return n;
}

// Random draw order is fixed: (1) partial Fisher-Yates over the weight list
// picks the 2^N - M paired weights, (2) one full shuffle of the basis list,
// consumed two bases per paired weight in pick order, then one basis per
// remaining weight in ascending weight order. A table is therefore
// reconstructible bit-for-bit from (M, seed).
inline MappingTable build_mapping(int weight_count, std::uint64_t seed) {
    if (weight_count < 2) throw std::invalid_argument("mapping: weight count must be >= 2");

    MappingTable table;
    table.weight_count = weight_count;
    table.num_qubits = qubits_for_weights(weight_count);
    table.seed = seed;

    const std::size_t dim = std::size_t{1} << table.num_qubits;
    const std::size_t n_paired = dim - static_cast<std::size_t>(weight_count);

    SplitRng rng(seed);

    std::vector<int> weights(weight_count);
    for (int j = 0; j < weight_count; ++j) weights[j] = j;
    for (std::size_t i = 0; i < n_paired; ++i) {
        const std::size_t j = i + rng.next_below(weights.size() - i);
        std::swap(weights[i], weights[j]);
    }
    std::vector<int> single_weights(weights.begin() + n_paired, weights.end());
    std::sort(single_weights.begin(), single_weights.end());

    std::vector<std::size_t> bases(dim);
    for (std::size_t i = 0; i < dim; ++i) bases[i] = i;
    rng.shuffle(bases);

    std::size_t next_basis = 0;
    table.paired.reserve(n_paired);
    for (std::size_t i = 0; i < n_paired; ++i) {
        table.paired.push_back({weights[i], bases[next_basis], bases[next_basis + 1]});
        next_basis += 2;
    }
    table.single.reserve(single_weights.size());
    for (int j : single_weights) table.single.push_back({j, bases[next_basis++]});

    return table;
}

// Weight-index parity sign: +1 for even 0-based index, -1 for odd. The sign
// sits inside the tanh argument; tanh is odd so the placement only matters
// notationally.
inline double parity_sign(int weight_index) { return weight_index % 2 == 0 ? 1.0 : -1.0; }

inline std::vector<double> apply_mapping(const MappingTable& table,
                                         const ProbabilityDistribution& dist,
                                         double gamma) {
    const std::size_t dim = std::size_t{1} << table.num_qubits;
    if (dist.probs.size() != dim)
        throw std::invalid_argument("mapping: distribution length does not match 2^N");

    const double pair_scale = std::ldexp(1.0, table.num_qubits - 2);    // 2^(N-2)
    const double single_scale = std::ldexp(1.0, table.num_qubits - 1);  // 2^(N-1)

    std::vector<double> weights(table.weight_count, 0.0);
    for (const auto& a : table.paired) {
        const double p = dist.probs[a.basis_a] + dist.probs[a.basis_b];
        weights[a.weight_index] =
            gamma * std::tanh(parity_sign(a.weight_index) * pair_scale * gamma * p);
    }
    for (const auto& a : table.single) {
        const double p = dist.probs[a.basis];
        weights[a.weight_index] =
            gamma * std::tanh(parity_sign(a.weight_index) * single_scale * gamma * p);
    }
    return weights;
}

}  // namespace qtrain
