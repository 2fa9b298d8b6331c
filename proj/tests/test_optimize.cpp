#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "qtrain/optimize.hpp"

using namespace qtrain;

namespace {

double sphere_at_2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += (v - 2.0) * (v - 2.0);
    return s;
}

double rosenbrock(const std::vector<double>& x) {
    return 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1.0 - x[0]) * (1.0 - x[0]);
}

}  // namespace

TEST_CASE("cobyla converges on the 4-d shifted sphere") {
    CountedObjective obj(sphere_at_2);
    const auto result = cobyla_minimize(obj, std::vector<double>(4, 0.0), 200, 0.5, 1e-4);
    CHECK(result.best_f < 1e-4);
    CHECK(result.evaluations <= 200);
}

TEST_CASE("cobyla on a constant objective stays put") {
    CountedObjective obj([](const std::vector<double>&) { return 3.5; });
    const std::vector<double> x0 = {1.0, -1.0};
    const auto result = cobyla_minimize(obj, x0, 100, 0.5, 1e-4);
    CHECK(result.best_f == 3.5);
    for (int k = 0; k < 2; ++k) CHECK(std::abs(result.best_x[k] - x0[k]) <= 0.5 + 1e-12);
}

TEST_CASE("cobyla budget is exact, with no hidden evaluations") {
    for (long long budget : {6, 17, 50, 113}) {
        CountedObjective obj(sphere_at_2);
        const auto result = cobyla_minimize(obj, std::vector<double>(4, 0.0), budget, 0.5, 1e-4);
        CHECK(obj.count() <= budget);
        CHECK(result.evaluations == obj.count());
    }
}

TEST_CASE("cobyla rejects a one-shot budget below dim+2") {
    CountedObjective obj(sphere_at_2);
    CHECK_THROWS(cobyla_minimize(obj, std::vector<double>(4, 0.0), 5, 0.5, 1e-4));
    CHECK_THROWS(cobyla_minimize(obj, std::vector<double>(4, 0.0), 100, 1e-4, 0.5));
}

TEST_CASE("cobyla is resumable across budget installments") {
    CountedObjective whole(sphere_at_2);
    const auto one_shot = cobyla_minimize(whole, std::vector<double>(4, 0.0), 120, 0.5, 1e-4);

    CountedObjective split(sphere_at_2);
    CobylaOptimizer opt(std::vector<double>(4, 0.0), 0.5, 1e-4);
    for (int k = 0; k < 4; ++k) opt.run(split, 30);
    CHECK(split.count() <= 120);
    // Resuming pauses the same trajectory, so the split run is at least as good.
    CHECK(split.best_f() <= one_shot.best_f);
}

TEST_CASE("cobyla handles budgets smaller than the simplex (incremental build)") {
    CountedObjective obj(sphere_at_2);
    CobylaOptimizer opt(std::vector<double>(4, 0.0), 0.5, 1e-4);
    auto result = opt.run(obj, 3);  // cannot finish the 5-vertex simplex
    CHECK(obj.count() == 3);
    result = opt.run(obj, 197);
    CHECK(result.best_f < 1e-4);
}

TEST_CASE("cobyla is deterministic") {
    CountedObjective a(sphere_at_2), b(sphere_at_2);
    const auto ra = cobyla_minimize(a, {0.3, -0.7, 1.1, 0.0}, 150, 0.5, 1e-4);
    const auto rb = cobyla_minimize(b, {0.3, -0.7, 1.1, 0.0}, 150, 0.5, 1e-4);
    CHECK(ra.best_f == rb.best_f);
    CHECK(ra.best_x == rb.best_x);
}

TEST_CASE("best-f record is non-increasing") {
    std::vector<double> record;
    CobylaOptimizer opt(std::vector<double>(4, 1.0), 0.5, 1e-4);
    double best = std::numeric_limits<double>::infinity();
    CountedObjective tracked([&](const std::vector<double>& x) {
        const double f = sphere_at_2(x);
        best = std::min(best, f);
        record.push_back(best);
        return f;
    });
    opt.run(tracked, 120);
    for (std::size_t i = 1; i < record.size(); ++i) CHECK(record[i] <= record[i - 1]);
    CHECK(tracked.best_f() == record.back());
}

TEST_CASE("nelder-mead finds a 1-d quadratic minimum") {
    CountedObjective obj([](const std::vector<double>& x) {
        return (x[0] - 0.7) * (x[0] - 0.7);
    });
    const auto result = nelder_mead_minimize(obj, {0.3}, 50);
    CHECK(std::abs(result.best_x[0] - 0.7) < 1e-6);
}

TEST_CASE("nelder-mead beats 1 on the 2-d rosenbrock within 500 evals") {
    CountedObjective obj(rosenbrock);
    NelderMeadParams params;
    params.initial_step = 0.5;
    const auto result = nelder_mead_minimize(obj, {-1.2, 1.0}, 500, params);
    CHECK(result.best_f < 1.0);
    CHECK(obj.count() <= 500);
}

TEST_CASE("nelder-mead on the nonsmooth |x|") {
    CountedObjective obj([](const std::vector<double>& x) { return std::abs(x[0]); });
    const auto result = nelder_mead_minimize(obj, {0.3}, 80);
    CHECK(result.best_f < 1e-4);
}

TEST_CASE("nelder-mead budget is exact") {
    for (long long budget : {3, 10, 37}) {
        CountedObjective obj([](const std::vector<double>& x) {
            return x[0] * x[0];
        });
        nelder_mead_minimize(obj, {2.0}, budget);
        CHECK(obj.count() <= budget);
    }
    CountedObjective obj(sphere_at_2);
    CHECK_THROWS(nelder_mead_minimize(obj, std::vector<double>(4, 0.0), 5));
}

TEST_CASE("nelder-mead translation equivariance") {
    // Shift by a power of two at exactly representable coordinates; the two
    // trajectories are then bit-identical.
    const double shift = 0.5;
    std::vector<std::vector<double>> trace_a, trace_b;
    CountedObjective fa([&](const std::vector<double>& x) {
        trace_a.push_back(x);
        return sphere_at_2(x);
    });
    CountedObjective fb([&](const std::vector<double>& x) {
        trace_b.push_back({x[0] - shift, x[1] - shift});
        return sphere_at_2({x[0] - shift, x[1] - shift});
    });
    nelder_mead_minimize(fa, {1.0, 3.0}, 60);
    nelder_mead_minimize(fb, {1.0 + shift, 3.0 + shift}, 60);
    REQUIRE(trace_a.size() == trace_b.size());
    for (std::size_t i = 0; i < trace_a.size(); ++i)
        for (int k = 0; k < 2; ++k)
            CHECK(trace_a[i][k] == doctest::Approx(trace_b[i][k]).epsilon(1e-12));
}

TEST_CASE("nelder-mead is deterministic") {
    CountedObjective a(rosenbrock), b(rosenbrock);
    const auto ra = nelder_mead_minimize(a, {-1.2, 1.0}, 200);
    const auto rb = nelder_mead_minimize(b, {-1.2, 1.0}, 200);
    CHECK(ra.best_x == rb.best_x);
    CHECK(ra.best_f == rb.best_f);
}
