#include "qtrain/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qtrain {

OptimizerResult nelder_mead_minimize(CountedObjective& objective, const std::vector<double>& x0,
                                     long long max_evals, const NelderMeadParams& params) {
    const int dim = static_cast<int>(x0.size());
    if (dim < 1) throw std::invalid_argument("nelder-mead: empty start point");
    if (max_evals < dim + 2)
        throw std::invalid_argument("nelder-mead: budget below dim+2 cannot build the simplex");

    long long used = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++used;
        return objective(x);
    };

    std::vector<std::vector<double>> simplex(dim + 1, x0);
    std::vector<double> values(dim + 1);
    values[0] = eval(simplex[0]);
    for (int i = 1; i <= dim; ++i) {
        simplex[i][i - 1] += params.initial_step;
        values[i] = eval(simplex[i]);
    }

    // Stable ordering keeps the trajectory deterministic under value ties.
    std::vector<int> order(dim + 1);
    auto sort_order = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return values[a] < values[b]; });
    };

    while (used < max_evals) {
        sort_order();
        const int best = order[0], worst = order[dim];
        const int second_worst = order[dim - 1];

        std::vector<double> centroid(dim, 0.0);
        for (int i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (int k = 0; k < dim; ++k) centroid[k] += simplex[i][k];
        }
        for (double& c : centroid) c /= dim;

        auto point_at = [&](double coeff) {
            std::vector<double> p(dim);
            for (int k = 0; k < dim; ++k)
                p[k] = centroid[k] + coeff * (centroid[k] - simplex[worst][k]);
            return p;
        };

        const auto reflected = point_at(params.reflection);
        const double f_reflected = eval(reflected);

        if (f_reflected < values[best]) {
            if (used < max_evals) {
                const auto expanded = point_at(params.reflection * params.expansion);
                const double f_expanded = eval(expanded);
                if (f_expanded < f_reflected) {
                    simplex[worst] = expanded;
                    values[worst] = f_expanded;
                    continue;
                }
            }
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }
        if (f_reflected < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }
        if (used >= max_evals) break;

        // Contraction, outside or inside of the worst vertex.
        const bool outside = f_reflected < values[worst];
        const auto contracted =
            point_at(outside ? params.reflection * params.contraction : -params.contraction);
        const double f_contracted = eval(contracted);
        if (f_contracted < std::min(f_reflected, values[worst])) {
            simplex[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }

        // Shrink toward the best vertex.
        for (int i = 0; i <= dim; ++i) {
            if (i == best) continue;
            if (used >= max_evals) break;
            for (int k = 0; k < dim; ++k)
                simplex[i][k] = simplex[best][k] + params.shrink * (simplex[i][k] - simplex[best][k]);
            values[i] = eval(simplex[i]);
        }
    }

    OptimizerResult result;
    result.best_x = objective.best_x();
    result.best_f = objective.best_f();
    result.evaluations = objective.count();
    return result;
}

}  // namespace qtrain
