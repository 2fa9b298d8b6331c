// Derivative-free minimizers, written from scratch: an unconstrained
// COBYLA-style linear-approximation trust-region method for the circuit
// angles, and the classic Nelder-Mead simplex for the scalar scaling factor.
// Both are budgeted strictly by objective-evaluation count, deterministic,
// and resumable across budget installments.
#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace qtrain {

using Objective = std::function<double(const std::vector<double>&)>;

// Wraps an objective with an exact evaluation counter and best-seen tracking.
class CountedObjective {
public:
    explicit CountedObjective(Objective fn) : fn_(std::move(fn)) {}

    double operator()(const std::vector<double>& x) {
        const double f = fn_(x);
        ++count_;
        if (best_x_.empty() || f < best_f_) {
            best_f_ = f;
            best_x_ = x;
        }
        return f;
    }

    long long count() const { return count_; }
    double best_f() const { return best_f_; }
    const std::vector<double>& best_x() const { return best_x_; }

private:
    Objective fn_;
    long long count_ = 0;
    double best_f_ = 0.0;
    std::vector<double> best_x_;
};

struct OptimizerResult {
    std::vector<double> best_x;
    double best_f = 0.0;
    long long evaluations = 0;
};

// Linear-approximation trust-region minimizer over an n+1 vertex simplex
// (Powell's COBYLA scheme, unconstrained variant). The trust radius shrinks
// from rho_begin toward rho_end. The simplex is built incrementally, so
// budgets smaller than dim+2 still evaluate a prefix of the initial simplex
// and can be continued with a later run() call.
class CobylaOptimizer {
public:
    CobylaOptimizer(std::vector<double> x0, double rho_begin, double rho_end);

    // Runs at most max_evals further objective evaluations. Returns the best
    // point seen over the optimizer's whole lifetime.
    OptimizerResult run(CountedObjective& objective, long long max_evals);

    // Moves the simplex's best vertex to x (used for warm restarts where an
    // outer loop changed the objective, e.g. a new scaling factor). Vertex
    // values are re-tagged lazily by later evaluations.
    void recenter(const std::vector<double>& x, double f);

    // Resets the trust radius for a fresh optimization period.
    void reset_radius() { rho_ = rho_begin_; }

    const std::vector<double>& best_x() const;
    double best_f() const;
    bool simplex_ready() const { return built_ == dim_ + 1; }

private:
    int dim_;
    double rho_begin_;
    double rho_end_;
    double rho_;
    int built_ = 0;  // vertices evaluated so far (simplex grows incrementally)
    std::vector<std::vector<double>> vertices_;  // dim_+1 points, [0] is the pivot
    std::vector<double> values_;
    int best_ = 0;

    void promote_best();
    bool trust_region_step(CountedObjective& objective, long long& used);
};

OptimizerResult cobyla_minimize(CountedObjective& objective, const std::vector<double>& x0,
                                long long max_evals, double rho_begin, double rho_end);

struct NelderMeadParams {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double initial_step = 0.1;
};

OptimizerResult nelder_mead_minimize(CountedObjective& objective, const std::vector<double>& x0,
                                     long long max_evals, const NelderMeadParams& params = {});

}  // namespace qtrain
