// Dense statevector simulation: the few gates needed for the EfficientSU2
// ansatz (H, Ry, Rz, CNOT), exact probability extraction and finite-shot
// sampling. Basis index bit b (least significant = 0) corresponds to qubit b.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qtrain/rng.hpp"

namespace qtrain {

class Statevector {
public:
    using amplitude = std::complex<double>;

    explicit Statevector(int num_qubits)
        : num_qubits_(num_qubits) {
        if (num_qubits < 1) throw std::invalid_argument("num_qubits must be >= 1");
        amps_.assign(std::size_t{1} << num_qubits, amplitude{0.0, 0.0});
        amps_[0] = amplitude{1.0, 0.0};
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<amplitude>& amplitudes() const { return amps_; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    void apply_h(int qubit) {
        check_qubit(qubit);
        const double inv_sqrt2 = 0.70710678118654752440;
        for_each_pair(qubit, [&](amplitude& a0, amplitude& a1) {
            const amplitude t0 = a0;
            a0 = inv_sqrt2 * (t0 + a1);
            a1 = inv_sqrt2 * (t0 - a1);
        });
    }

    void apply_ry(int qubit, double angle) {
        check_qubit(qubit);
        const double c = std::cos(0.5 * angle);
        const double s = std::sin(0.5 * angle);
        for_each_pair(qubit, [&](amplitude& a0, amplitude& a1) {
            const amplitude t0 = a0;
            a0 = c * t0 - s * a1;
            a1 = s * t0 + c * a1;
        });
    }

    void apply_rz(int qubit, double angle) {
        check_qubit(qubit);
        const amplitude p0{std::cos(0.5 * angle), -std::sin(0.5 * angle)};
        const amplitude p1 = std::conj(p0);
        for_each_pair(qubit, [&](amplitude& a0, amplitude& a1) {
            a0 *= p0;
            a1 *= p1;
        });
    }

    void apply_cnot(int control, int target) {
        check_qubit(control);
        check_qubit(target);
        if (control == target) throw std::invalid_argument("cnot: control == target");
        const std::size_t cbit = std::size_t{1} << control;
        const std::size_t tbit = std::size_t{1} << target;
        const std::size_t n = amps_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
        }
    }

private:
    template <typename F>
    void for_each_pair(int qubit, F&& f) {
        const std::size_t bit = std::size_t{1} << qubit;
        const std::size_t n = amps_.size();
        for (std::size_t base = 0; base < n; base += 2 * bit)
            for (std::size_t low = 0; low < bit; ++low) {
                const std::size_t i0 = base + low;
                f(amps_[i0], amps_[i0 | bit]);
            }
    }

    void check_qubit(int q) const {
        if (q < 0 || q >= num_qubits_) throw std::out_of_range("qubit index out of range");
    }

    int num_qubits_;
    std::vector<amplitude> amps_;
};

// Measurement outcome distribution over the 2^N computational basis states.
struct ProbabilityDistribution {
    std::vector<double> probs;
    bool exact = true;   // false when estimated from a finite shot count
    std::int64_t shots = 0;
};

inline ProbabilityDistribution exact_probabilities(const Statevector& state) {
    ProbabilityDistribution dist;
    dist.probs.reserve(state.dim());
    for (const auto& a : state.amplitudes()) dist.probs.push_back(std::norm(a));
    dist.exact = true;
    return dist;
}

// Empirical distribution from `shots` independent samples of the exact
// distribution. Inverse-CDF sampling; ties in the cumulative sums resolve to
// the lower index. Deterministic for a fixed seed.
inline ProbabilityDistribution sample_probabilities(const Statevector& state,
                                                    std::int64_t shots,
                                                    std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    const auto exact = exact_probabilities(state);
    std::vector<double> cum(exact.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < cum.size(); ++i) {
        acc += exact.probs[i];
        cum[i] = acc;
    }
    cum.back() = 1.0;

    SplitRng rng(seed);
    std::vector<std::int64_t> counts(cum.size(), 0);
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        const std::size_t idx =
            it == cum.end() ? cum.size() - 1 : static_cast<std::size_t>(it - cum.begin());
        ++counts[idx];
    }

    ProbabilityDistribution dist;
    dist.probs.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        dist.probs[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    dist.exact = false;
    dist.shots = shots;
    return dist;
}

}  // namespace qtrain
