#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dyson_edge/errors.hpp"
#include "dyson_edge/rng.hpp"
#include "dyson_edge/stats.hpp"

using namespace dyson_edge;

namespace {

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

TEST_CASE("empirical distribution") {
    const EmpiricalDistribution e({0.3, 0.1, 0.2, 0.2});
    CHECK(e.size() == 4);
    CHECK(e.values()[0] == 0.1);
    CHECK(e.cdf(0.05) == 0.0);
    CHECK(e.cdf(0.2) == 0.75);
    CHECK(e.cdf(1.0) == 1.0);
    CHECK_THROWS_AS(EmpiricalDistribution({1.0, std::numeric_limits<double>::quiet_NaN()}), DomainError);
}

TEST_CASE("KS distance on hand examples") {
    // one point at 0.5 against U(0,1): 0.5 on both sides of the jump
    CHECK(ks_distance(EmpiricalDistribution({0.5}), uniform_cdf) == doctest::Approx(0.5));
    // points at the quartiles 0.25, 0.75: max gap 0.25
    CHECK(ks_distance(EmpiricalDistribution({0.25, 0.75}), uniform_cdf) == doctest::Approx(0.25));
    // all mass at 1 against U(0,1): left limit at 1 is 0 vs 1
    CHECK(ks_distance(EmpiricalDistribution({1.0, 1.0}), uniform_cdf) == doctest::Approx(1.0));
    CHECK(ks_two_sample(EmpiricalDistribution({1.0, 2.0}), EmpiricalDistribution({1.0, 2.0})) == 0.0);
    CHECK(ks_two_sample(EmpiricalDistribution({1.0}), EmpiricalDistribution({2.0})) == 1.0);
    CHECK(ks_two_sample(EmpiricalDistribution({1.0, 3.0}), EmpiricalDistribution({2.0, 4.0})) == 0.5);
}

TEST_CASE("KS distance accounts for jumps in the reference") {
    // sample {0, 1} vs point mass at 0: ECDF 0.5 at 0, reference 1
    const auto step = [](double x) { return x >= 0.0 ? 1.0 : 0.0; };
    CHECK(ks_distance(EmpiricalDistribution({0.0, 1.0}), step) == doctest::Approx(0.5));
}

TEST_CASE("uniform samples stay inside the 99% DKW band") {
    CHECK(dkw_band(10000, 0.01) == doctest::Approx(0.0163).epsilon(0.01));
    RngStream rng(3, 0);
    int exceed = 0;
    const int runs = 500;
    for (int t = 0; t < runs; ++t) {
        std::vector<double> u(10000);
        for (auto& v : u) v = rng.uniform();
        if (ks_distance(EmpiricalDistribution(u), uniform_cdf) > dkw_band(10000, 0.01)) ++exceed;
    }
    // at most 1% of runs, plus three binomial standard errors for the finite repeat count
    CHECK(exceed <= static_cast<int>(runs * (0.01 + 3.0 * std::sqrt(0.01 * 0.99 / runs))));
    CHECK_THROWS_AS(ks_distance(EmpiricalDistribution(), uniform_cdf), DomainError);
    CHECK_THROWS_AS(ks_two_sample(EmpiricalDistribution(), EmpiricalDistribution({1.0})), DomainError);
}

TEST_CASE("two exponential samples of 5000 are within 0.04") {
    RngStream rng(4, 0);
    int within = 0;
    const int runs = 200;
    for (int t = 0; t < runs; ++t) {
        std::vector<double> a(5000), b(5000);
        for (auto& v : a) v = -std::log1p(-rng.uniform());
        for (auto& v : b) v = -std::log1p(-rng.uniform());
        if (ks_two_sample(EmpiricalDistribution(a), EmpiricalDistribution(b)) <= 0.04) ++within;
    }
    CHECK(within >= 0.95 * runs);
}

TEST_CASE("one-sample KS agrees with two-sample KS against a huge reference sample") {
    RngStream rng(5, 0);
    std::vector<double> sample(500), reference(1'000'000);
    for (auto& v : sample) v = rng.gamma(2.0);
    for (auto& v : reference) v = rng.gamma(2.0);
    const auto cdf = [](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x) * (1.0 + x); };
    const double one = ks_distance(EmpiricalDistribution(sample), cdf);
    const double two = ks_two_sample(EmpiricalDistribution(sample), EmpiricalDistribution(reference));
    CHECK(std::abs(one - two) <= 0.01);
}

TEST_CASE("moments and correlation") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const auto m = moments(x);
    CHECK(m.mean == 2.5);
    CHECK(m.variance == doctest::Approx(5.0 / 3.0));
    CHECK(m.standard_error() == doctest::Approx(std::sqrt(5.0 / 12.0)));
    CHECK(moments(std::vector<double>{7.0}).variance == 0.0);
    CHECK_THROWS_AS(moments(std::vector<double>{}), DomainError);
    const std::vector<double> y{2.0, 4.0, 6.0, 8.0};
    const std::vector<double> z{4.0, 3.0, 2.0, 1.0};
    CHECK(pearson(x, y) == doctest::Approx(1.0));
    CHECK(pearson(x, z) == doctest::Approx(-1.0));
    CHECK(pearson(x, std::vector<double>{1.0, 1.0, 1.0, 1.0}) == 0.0);
}

TEST_CASE("planar two-sample statistic") {
    RngStream rng(6, 0);
    std::vector<std::pair<double, double>> a(400), b(400), c(400);
    for (auto& p : a) p = {rng.normal(), rng.normal()};
    for (auto& p : b) p = {rng.normal(), rng.normal()};
    for (auto& p : c) {
        const double u = rng.normal();
        p = {u, u};
    }
    const double same = ks_2d_two_sample(a, b);
    const double different = ks_2d_two_sample(a, c);
    CHECK(same < 0.15);
    CHECK(different > 0.2);
    CHECK(ks_2d_two_sample(a, a) == 0.0);
}

TEST_CASE("semicircle L1") {
    // mass outside [-2, 2] counts in full; a point at 0 misses half of each of two bins
    CHECK(semicircle_l1(std::vector<double>{5.0, 6.0}, 10) == doctest::Approx(2.0));
    CHECK(semicircle_l1(std::vector<double>{0.0}, 2) == doctest::Approx(1.0));
}

TEST_CASE("adaptive quadrature") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    const double semicircle = integrate([](double s) { return std::sqrt(4.0 - s * s) / (2.0 * std::numbers::pi); }, -2.0,
                                        2.0, 1e-12);
    CHECK(semicircle == doctest::Approx(1.0).epsilon(1e-10));
}
