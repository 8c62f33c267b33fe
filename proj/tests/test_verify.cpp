#include <doctest.h>

#include <cmath>
#include <limits>

#include "dyson_edge/suite.hpp"
#include "dyson_edge/verify.hpp"

using namespace dyson_edge;

namespace {

bool all_counted_pass(const std::vector<TestReport>& reports) {
    for (const auto& r : reports) {
        if (!r.diagnostic && !r.pass) return false;
    }
    return true;
}

// A* g by central differences straight from the generator of the R system:
// A* g = sum d_i^2 g - sum d_i d_{i+1} g - sum d_i (b_i g),
// b_i = a (1/x_i - 1/x_{i+1}) for i < k and a/x_k - c.
double adjoint_by_differences(const std::vector<double>& x, double beta, double c_system, double c_density) {
    const double a = beta / 2.0 - 1.0;
    const auto g = [&](const std::vector<double>& y) {
        double v = 1.0;
        for (double yi : y) v *= std::pow(yi, a) * std::exp(-c_density * yi);
        return v;
    };
    const auto b = [&](const std::vector<double>& y, std::size_t i) {
        return i + 1 < y.size() ? a * (1.0 / y[i] - 1.0 / y[i + 1]) : a / y[i] - c_system;
    };
    const double h = 1e-3;
    const auto shift = [&](std::size_t i, double di, std::size_t j, double dj) {
        auto y = x;
        y[i] += di;
        y[j] += dj;
        return y;
    };
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        total += (g(shift(i, h, i, 0.0)) - 2.0 * g(x) + g(shift(i, -h, i, 0.0))) / (h * h);
        const auto bp = shift(i, h, i, 0.0);
        const auto bm = shift(i, -h, i, 0.0);
        total -= (b(bp, i) * g(bp) - b(bm, i) * g(bm)) / (2.0 * h);
        if (i + 1 < x.size()) {
            total -= (g(shift(i, h, i + 1, h)) - g(shift(i, h, i + 1, -h)) - g(shift(i, -h, i + 1, h)) +
                      g(shift(i, -h, i + 1, -h))) /
                     (4.0 * h * h);
        }
    }
    return total / g(x);
}

}  // namespace

TEST_CASE("report verdict") {
    CHECK(make_report("a", 0.1, 0.2, {}, 1, "").pass);
    CHECK(make_report("a", 0.2, 0.2, {}, 1, "").pass);
    CHECK_FALSE(make_report("a", 0.3, 0.2, {}, 1, "").pass);
    CHECK_FALSE(make_report("a", std::numeric_limits<double>::quiet_NaN(), 0.2, {}, 1, "").pass);
}

TEST_CASE("deterministic quadrature checks") {
    const auto r = check_integral_2pi();
    CHECK(r.pass);
    CHECK(r.statistic < 1e-10);
    for (const auto& m : check_semicircle_moments()) CHECK(m.pass);
}

TEST_CASE("adjoint residual vanishes") {
    // the k = 1, beta = 4, x = 1 case at t0 = 2/beta
    CHECK(adjoint_residual({1.0}, 4.0, 0.5) < 1e-14);
    CHECK(adjoint_residual({0.3, 2.0, 4.5}, 5.0, 0.4) < 1e-12);
    const auto reports = check_adjoint_annihilation(3, 5.0, 0.4, 100, 0.2, 5.0, 1e-6, {});
    CHECK(all_counted_pass(reports));
}

TEST_CASE("independent finite-difference adjoint agrees and detects a wrong rate") {
    for (double beta : {4.0, 5.0}) {
        const double c = std::sqrt(beta / (2.0 * (2.0 / beta)));
        for (const std::vector<double>& x : {std::vector<double>{1.0}, std::vector<double>{0.7, 1.9},
                                              std::vector<double>{2.5, 0.6, 1.3}}) {
            CHECK(std::abs(adjoint_by_differences(x, beta, c, c)) < 1e-4);
            CHECK(std::abs(adjoint_by_differences(x, beta, c, 1.2 * c)) > 1e-2);
        }
    }
}

TEST_CASE("small inverse-gap runs") {
    const CheckContext ctx{3, 2};
    const auto identity = check_inverse_gap_identity(30, 3.0, 400, 3.0, ctx);
    REQUIRE(!identity.empty());
    CHECK_FALSE(identity[0].diagnostic);
    CHECK(identity[0].pass);
    const auto limits = check_inverse_gap_limits(60, 4.0, 200, 0.25, 0.9, 0.1, ctx);
    CHECK(limits.size() >= 3);
}

TEST_CASE("checks do not depend on parallelism") {
    FixedTimeSpacingParams p;
    p.n = 30;
    p.k = 2;
    p.beta = 2.0;
    p.n_samples = 300;
    const auto serial = check_fixed_time_spacings(p, {5, 1});
    const auto threaded = check_fixed_time_spacings(p, {5, 4});
    CHECK(reports_to_json(serial) == reports_to_json(threaded));

    LimitRunParams l;
    l.k = 2;
    l.dt = 1e-3;
    l.n_paths = 200;
    l.times = {0.5};
    CHECK(reports_to_json(check_stationarity(l, {6, 1})) == reports_to_json(check_stationarity(l, {6, 3})));
}

TEST_CASE("limit checks on small runs") {
    LimitRunParams l;
    l.k = 2;
    l.dt = 1e-3;
    l.n_paths = 300;
    l.times = {0.5};
    l.threshold = 0.12;
    const CheckContext ctx{7, 2};
    CHECK(all_counted_pass(check_stationarity(l, ctx)));
    CHECK(check_restriction_consistency(l, ctx).pass);
    const auto pos = check_positivity(l, ctx);
    CHECK(all_counted_pass(pos));
    for (const auto& r : pos) CHECK(r.statistic == 0.0);
    CHECK(check_z_r_equivalence(l, ctx).pass);
    const auto bessel = check_bessel_domination(4.0, 0.5, 2.0, 1e-3, 1.0, 20, ctx);
    CHECK(all_counted_pass(bessel));
}

TEST_CASE("sampler cross-validation on small runs") {
    const CheckContext ctx{8, 2};
    CHECK(check_tridiagonal_vs_dense(10, 2, 600, 0.1, ctx).pass);
    CHECK(check_corner_level_vs_dense(6, 1, 600, 0.1, ctx).pass);
    const auto rigidity = check_semicircle_rigidity(200, 2.0, 3, 20, 0.2, 0.4, 0.99, ctx);
    CHECK(all_counted_pass(rigidity));
}

TEST_CASE("remainder report layout") {
    const auto r = check_remainder_limits(40, 2, 4.0, 0.5, 50, 0.1, 1.0, {9, 2});
    // S_0, S_hat vs target, and the two sign diagnostics
    REQUIRE(r.size() == 4);
    CHECK_FALSE(r[0].diagnostic);
    CHECK_FALSE(r[1].diagnostic);
    CHECK(r[2].diagnostic);
    CHECK(r[3].diagnostic);
}

TEST_CASE("mdbm spacing check runs on a small system") {
    MdbmSpacingParams p;
    p.n = 8;
    p.k = 2;
    p.dt = 1e-3;
    p.n_paths = 40;
    p.times = {0.0, 0.05};
    p.threshold = 1.0;
    const auto r = check_mdbm_spacings(p, {10, 2});
    CHECK(r.size() == 4);
    CHECK(all_counted_pass(r));
}
