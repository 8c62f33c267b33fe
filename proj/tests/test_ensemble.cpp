#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "dyson_edge/core_model.hpp"
#include "dyson_edge/ensemble.hpp"
#include "dyson_edge/errors.hpp"
#include "dyson_edge/stats.hpp"

using namespace dyson_edge;

TEST_CASE("tridiagonal eigenvalues match a dense symmetric solver") {
    RngStream rng(11, 0);
    for (int n : {1, 2, 3, 7, 40}) {
        std::vector<double> diag(n), off(n > 0 ? n - 1 : 0);
        for (auto& v : diag) v = rng.normal();
        for (auto& v : off) v = rng.normal();
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = diag[i];
        for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off[i];
        const Eigen::VectorXd expected = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
        const auto got = tridiagonal_eigenvalues(diag, off);
        REQUIRE(got.size() == static_cast<std::size_t>(n));
        const double scale = std::max(1.0, expected.cwiseAbs().maxCoeff());
        for (int i = 0; i < n; ++i) CHECK(std::abs(got[i] - expected(i)) <= 1e-12 * scale);
    }
}

TEST_CASE("tridiagonal solver handles split and degenerate matrices") {
    const std::vector<double> diag{3.0, 3.0, 3.0, -1.0};
    const std::vector<double> off{0.0, 0.0, 0.0};
    CHECK(tridiagonal_eigenvalues(diag, off) == std::vector<double>{-1.0, 3.0, 3.0, 3.0});
    CHECK_THROWS(tridiagonal_eigenvalues(diag, std::vector<double>{1.0}));
}

TEST_CASE("beta-Hermite spectra") {
    RngStream rng(5, 0);
    // n = 1 is a single N(0, t) value
    std::vector<double> ones;
    for (int i = 0; i < 4000; ++i) ones.push_back(sample_beta_hermite(1, 2.0, 3.0, rng).values[0]);
    const auto m = moments(ones);
    CHECK(std::abs(m.mean) < 4.0 * std::sqrt(3.0 / 4000.0));
    CHECK(m.variance == doctest::Approx(3.0).epsilon(0.08));

    for (double beta : {1.0, 2.5, 4.0}) {
        for (int draw = 0; draw < 20; ++draw) {
            const auto s = sample_beta_hermite(30, beta, 60.0 / beta, rng).values;
            CHECK(std::is_sorted(s.begin(), s.end()));
            CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
        }
    }
    CHECK_THROWS_AS(sample_beta_hermite(0, 2.0, 1.0, rng), DomainError);
    CHECK_THROWS_AS(sample_beta_hermite(5, -1.0, 1.0, rng), DomainError);
    CHECK_THROWS_AS(sample_beta_hermite(5, 2.0, 0.0, rng), DomainError);
}

TEST_CASE("beta-Hermite trace and sum of squares match the density") {
    // Under the density the trace is N(0, n t) and E[sum x^2] = t (n + beta n (n-1) / 2).
    const int n = 6;
    const double beta = 2.5;
    const double t = 1.7;
    RngStream rng(21, 0);
    std::vector<double> trace, squares;
    for (int i = 0; i < 8000; ++i) {
        const auto s = sample_beta_hermite(n, beta, t, rng).values;
        double tr = 0.0, sq = 0.0;
        for (double v : s) {
            tr += v;
            sq += v * v;
        }
        trace.push_back(tr);
        squares.push_back(sq);
    }
    const auto mt = moments(trace);
    const auto ms = moments(squares);
    CHECK(mt.variance == doctest::Approx(n * t).epsilon(0.06));
    const double expected = t * (n + beta * n * (n - 1) / 2.0);
    CHECK(std::abs(ms.mean - expected) < 4.0 * ms.standard_error());
}

TEST_CASE("spectrum is symmetric in law") {
    RngStream rng(8, 0);
    std::vector<double> top, minus_bottom;
    for (int i = 0; i < 3000; ++i) {
        const auto s = sample_beta_hermite(10, 3.0, 1.0, rng).values;
        top.push_back(s.back());
        minus_bottom.push_back(-s.front());
    }
    const double d = ks_two_sample(EmpiricalDistribution(top), EmpiricalDistribution(minus_bottom));
    // two-sample 99.9% critical value at m = 3000 is about 0.050
    CHECK(d < 0.05);
}

TEST_CASE("spectrum stays inside (2 + 0.05) n at t = 2n/beta") {
    RngStream rng(9, 0);
    const int n = 200;
    int inside = 0;
    for (int draw = 0; draw < 100; ++draw) {
        for (double x : sample_beta_hermite(n, 2.0, n, rng).values) {
            if (std::abs(x) <= 2.05 * n) ++inside;
        }
    }
    CHECK(inside > 0.999 * 100 * n);
}

TEST_CASE("corner level interlaces strictly") {
    RngStream rng(13, 0);
    for (double beta : {1.0, 2.5, 4.0}) {
        for (int draw = 0; draw < 200; ++draw) {
            const auto g = sample_corners_process(12, beta, 24.0 / beta, rng);
            REQUIRE(validate_strict_interlacing(g));
        }
    }
    const LevelSpectrum upper{{-1.0, 0.0, 1e-9, 2.0}};
    for (int draw = 0; draw < 100; ++draw) {
        const auto lower = sample_corner_level(upper, 2.0, rng).values;
        REQUIRE(lower.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(lower[i] > upper.values[i]);
            CHECK(lower[i] < upper.values[i + 1]);
        }
    }
}

TEST_CASE("beta 2 corner step from two points is uniform") {
    // With weights Dirichlet(1, 1) the single root y = w x_1 + (1 - w) x_2 is uniform.
    RngStream rng(17, 0);
    const LevelSpectrum upper{{-1.0, 3.0}};
    std::vector<double> ys;
    for (int i = 0; i < 5000; ++i) ys.push_back(sample_corner_level(upper, 2.0, rng).values[0]);
    const double d = ks_distance(EmpiricalDistribution(ys), [](double y) { return std::clamp((y + 1.0) / 4.0, 0.0, 1.0); });
    CHECK(d < dkw_band(5000, 1e-3));
}

TEST_CASE("corner level law for beta 4 from two points") {
    // Single root with density prop. to (y - x_1)(x_2 - y): Beta(2, 2) on [x_1, x_2].
    RngStream rng(19, 0);
    const LevelSpectrum upper{{0.0, 1.0}};
    std::vector<double> ys;
    for (int i = 0; i < 5000; ++i) ys.push_back(sample_corner_level(upper, 4.0, rng).values[0]);
    const auto beta22 = [](double y) {
        y = std::clamp(y, 0.0, 1.0);
        return y * y * (3.0 - 2.0 * y);
    };
    CHECK(ks_distance(EmpiricalDistribution(ys), beta22) < dkw_band(5000, 1e-3));
}

TEST_CASE("corners process top level has the beta-Hermite law") {
    RngStream rng(23, 0);
    std::vector<double> a, b;
    for (int i = 0; i < 3000; ++i) {
        a.push_back(sample_corners_process(6, 3.0, 2.0, rng).top(6));
        b.push_back(sample_beta_hermite(6, 3.0, 2.0, rng).values.back());
    }
    CHECK(ks_two_sample(EmpiricalDistribution(a), EmpiricalDistribution(b)) < 0.05);
}

TEST_CASE("dense corners") {
    RngStream rng(29, 0);
    for (int beta : {1, 2, 4}) {
        for (int draw = 0; draw < 20; ++draw) {
            const auto g = sample_dense_corners(8, beta, rng);
            CHECK(g.n_levels() == 8);
            CHECK(validate_interlacing(g));
        }
        const auto levels = sample_dense_corner_levels(8, beta, 3, rng);
        REQUIRE(levels.size() == 3);
        CHECK(levels[0].level() == 8);
        CHECK(levels[2].level() == 6);
    }
    CHECK_THROWS_AS(sample_dense_corners(5, 3, rng), DomainError);
}

TEST_CASE("dense 1x1 corner has variance t") {
    RngStream rng(31, 0);
    for (int beta : {1, 2, 4}) {
        std::vector<double> v;
        for (int i = 0; i < 4000; ++i) v.push_back(sample_dense_corners(1, beta, rng, 2.0).top(1));
        CHECK(moments(v).variance == doctest::Approx(2.0).epsilon(0.08));
    }
}
