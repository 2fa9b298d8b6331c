#include "qtrain/optimize.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace qtrain {
namespace {

// Gauss-Jordan inverse with partial pivoting. Returns false when the matrix
// is numerically singular.
bool invert(std::vector<std::vector<double>> a, std::vector<std::vector<double>>& inv) {
    const std::size_t n = a.size();
    inv.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const double scale = 1.0 / a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] *= scale;
            inv[col][c] *= scale;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[r][col];
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= factor * a[col][c];
                inv[r][c] -= factor * inv[col][c];
            }
        }
    }
    return true;
}

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

constexpr double kEdgeBound = 2.1;   // edges longer than kEdgeBound*rho are unacceptable
constexpr double kFaceBound = 0.25;  // face distances below kFaceBound*rho are unacceptable

}  // namespace

CobylaOptimizer::CobylaOptimizer(std::vector<double> x0, double rho_begin, double rho_end)
    : dim_(static_cast<int>(x0.size())),
      rho_begin_(rho_begin),
      rho_end_(rho_end),
      rho_(rho_begin) {
    if (dim_ < 1) throw std::invalid_argument("cobyla: empty start point");
    if (!(rho_begin > rho_end) || !(rho_end > 0.0))
        throw std::invalid_argument("cobyla: need rho_begin > rho_end > 0");
    vertices_.assign(dim_ + 1, x0);
    values_.assign(dim_ + 1, std::numeric_limits<double>::quiet_NaN());
    for (int i = 1; i <= dim_; ++i) vertices_[i][i - 1] += rho_begin_;
}

const std::vector<double>& CobylaOptimizer::best_x() const { return vertices_[best_]; }
double CobylaOptimizer::best_f() const { return values_[best_]; }

void CobylaOptimizer::promote_best() {
    if (best_ != 0) {
        std::swap(vertices_[0], vertices_[best_]);
        std::swap(values_[0], values_[best_]);
        best_ = 0;
    }
}

void CobylaOptimizer::recenter(const std::vector<double>& x, double f) {
    if (built_ == 0) {
        vertices_[0] = x;
        return;
    }
    // Exact pivot match: only refresh the stored value (the objective may
    // have changed under the optimizer's feet).
    if (x == vertices_[best_]) {
        values_[best_] = f;
        return;
    }
    int worst = 0;
    for (int i = 1; i < built_; ++i)
        if (!(values_[i] < values_[worst])) worst = i;
    vertices_[worst] = x;
    values_[worst] = f;
    best_ = worst;
    for (int i = 0; i < built_; ++i)
        if (values_[i] < values_[best_]) best_ = i;
}

OptimizerResult CobylaOptimizer::run(CountedObjective& objective, long long max_evals) {
    long long used = 0;
    while (used < max_evals) {
        if (built_ <= dim_) {
            // Grow the initial simplex one vertex at a time; small budgets
            // simply evaluate a prefix and resume later.
            const double f = objective(vertices_[built_]);
            ++used;
            values_[built_] = f;
            if (f < values_[best_] || built_ == 0) best_ = built_;
            ++built_;
            continue;
        }
        promote_best();
        if (!trust_region_step(objective, used)) break;
    }
    OptimizerResult result;
    result.best_x = objective.best_x();
    result.best_f = objective.best_f();
    result.evaluations = objective.count();
    return result;
}

// One modelling cycle: build the linear interpolation model on the current
// simplex, fix the geometry if it is unacceptable, otherwise take a trust
// region step and update rho. Returns false when converged (rho at rho_end
// with no acceptable move left).
bool CobylaOptimizer::trust_region_step(CountedObjective& objective, long long& used) {
    std::vector<std::vector<double>> edges(dim_, std::vector<double>(dim_));
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k) edges[i][k] = vertices_[i + 1][k] - vertices_[0][k];

    std::vector<std::vector<double>> dual;  // row i is the dual of edge i
    const bool invertible = invert(edges, dual);
    if (!invertible) {
        // Degenerate simplex: restart its axes around the pivot.
        for (int i = 1; i <= dim_; ++i) {
            vertices_[i] = vertices_[0];
            vertices_[i][i - 1] += rho_;
            values_[i] = std::numeric_limits<double>::quiet_NaN();
        }
        built_ = 1;
        return true;
    }
    // dual as stored is the inverse of the matrix whose ROWS are edges, so
    // column j of `dual` is the direction conjugate to edge j.
    // Rearrange to rows for convenience.
    std::vector<std::vector<double>> dual_rows(dim_, std::vector<double>(dim_));
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k) dual_rows[i][k] = dual[k][i];

    // Model gradient g: g . edge_i = f_i - f_0.
    std::vector<double> df(dim_);
    for (int i = 0; i < dim_; ++i) df[i] = values_[i + 1] - values_[0];
    std::vector<double> grad(dim_, 0.0);
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k) grad[k] += dual_rows[i][k] * df[i];

    // Geometry acceptability.
    int offender = -1;
    double worst_score = 1.0;
    for (int i = 0; i < dim_; ++i) {
        double edge_len = 0.0;
        for (int k = 0; k < dim_; ++k) {
            const double d = vertices_[i + 1][k] - vertices_[0][k];
            edge_len += d * d;
        }
        edge_len = std::sqrt(edge_len);
        const double face_dist = 1.0 / norm(dual_rows[i]);
        const double score =
            std::max(edge_len / (kEdgeBound * rho_), (kFaceBound * rho_) / face_dist);
        if (score > worst_score) {
            worst_score = score;
            offender = i;
        }
    }
    if (offender >= 0) {
        // Replace the offending vertex at distance rho/2 from the pivot along
        // its dual direction, picking the side the model predicts lower.
        std::vector<double> dir = dual_rows[offender];
        const double len = norm(dir);
        double slope = 0.0;
        for (int k = 0; k < dim_; ++k) {
            dir[k] /= len;
            slope += grad[k] * dir[k];
        }
        const double sign = slope > 0.0 ? -1.0 : 1.0;
        std::vector<double> candidate = vertices_[0];
        for (int k = 0; k < dim_; ++k) candidate[k] += sign * 0.5 * rho_ * dir[k];
        const double f = objective(candidate);
        ++used;
        vertices_[offender + 1] = candidate;
        values_[offender + 1] = f;
        if (f < values_[best_]) best_ = offender + 1;
        return true;
    }

    const double grad_norm = norm(grad);
    const bool at_final_radius = rho_ <= rho_end_ * 1.0000001;
    if (grad_norm * rho_ < 1e-15) {
        if (at_final_radius) return false;
        rho_ = std::max(rho_end_, 0.5 * rho_);
        return true;
    }

    // Trust region step: the linear model's minimizer on the rho-ball.
    std::vector<double> candidate = vertices_[0];
    for (int k = 0; k < dim_; ++k) candidate[k] -= rho_ * grad[k] / grad_norm;
    const double f = objective(candidate);
    ++used;

    const double predicted = rho_ * grad_norm;
    const double actual = values_[0] - f;

    // Replace the vertex with the largest coordinate of the step in the edge
    // basis; this keeps the simplex nonsingular.
    std::vector<double> step(dim_);
    for (int k = 0; k < dim_; ++k) step[k] = candidate[k] - vertices_[0][k];
    int replace = 0;
    double best_coord = -1.0;
    for (int i = 0; i < dim_; ++i) {
        double t = 0.0;
        for (int k = 0; k < dim_; ++k) t += dual_rows[i][k] * step[k];
        if (std::abs(t) > best_coord) {
            best_coord = std::abs(t);
            replace = i;
        }
    }
    if (f < values_[0] || f < values_[replace + 1] || std::isnan(values_[replace + 1])) {
        vertices_[replace + 1] = candidate;
        values_[replace + 1] = f;
        if (f < values_[best_]) best_ = replace + 1;
    }

    if (actual < 0.01 * predicted) {
        if (at_final_radius) return false;
        rho_ = std::max(rho_end_, 0.5 * rho_);
    }
    return true;
}

OptimizerResult cobyla_minimize(CountedObjective& objective, const std::vector<double>& x0,
                                long long max_evals, double rho_begin, double rho_end) {
    if (max_evals < static_cast<long long>(x0.size()) + 2)
        throw std::invalid_argument("cobyla: budget below dim+2 cannot complete the simplex");
    CobylaOptimizer opt(x0, rho_begin, rho_end);
    return opt.run(objective, max_evals);
}

}  // namespace qtrain
