#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dyson_edge {

/// Outcome of one check; pass is statistic <= threshold (NaN fails).
///
/// Bracket and count checks are phrased the same way: the statistic is the
/// distance outside the bracket, or the number of violations, against 0.
struct TestReport {
    std::string name;
    int criterion = 0;         // acceptance criterion this item belongs to
    bool diagnostic = false;   // reported, but not part of the criterion verdict
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::vector<std::int64_t> sample_sizes;
    std::uint64_t seed = 0;
    std::string reference;
    std::string details;
};

TestReport make_report(std::string name, double statistic, double threshold, std::vector<std::int64_t> sample_sizes,
                       std::uint64_t seed, std::string reference, std::string details = {});

/// Seed and thread budget for one check. Draw i of a check always uses
/// RngStream(seed, i) (or a split of it), so results do not depend on
/// parallelism.
struct CheckContext {
    std::uint64_t seed = 42;
    int parallelism = 1;
};

/// Integral of sqrt(4 - s^2) / (2 - s) over [-2, 2] against 2 pi, via s = 2 cos u.
TestReport check_integral_2pi(double tolerance = 1e-8);

/// Semicircle normalization and first moment by quadrature.
std::vector<TestReport> check_semicircle_moments(double tolerance = 1e-10);

/// E[sum_{i<n} 1/(x_n - x_i)] against E[x_n] / (2n) at t = 2n/beta, with the
/// standard error of the per-draw differences. Distances of both sides from
/// their limit 1 are reported as diagnostics.
std::vector<TestReport> check_inverse_gap_identity(int n, double beta, int n_samples, double max_se,
                                                   const CheckContext& ctx);

/// Large-n behaviour of the inverse-gap sums at t = 2n/beta: the same-level
/// sum and the sum from x^n_n to level n-1 both have mean near 1, and the
/// second moment of the same-level sum lies in [lower, beta/(beta-1) + slack].
std::vector<TestReport> check_inverse_gap_limits(int n, double beta, int n_samples, double tolerance, double lower,
                                                 double slack, const CheckContext& ctx);

enum class SpacingSampler { corners, dense };

struct FixedTimeSpacingParams {
    int n = 150;
    double beta = 2.0;
    int k = 1;
    int n_samples = 4000;
    SpacingSampler sampler = SpacingSampler::corners;
    double ks_threshold = 0.05;
    double correlation_threshold = 0.05;
    /// Spacings whose KS counts towards the verdict; later ones are diagnostics.
    int counted_spacings = 1;
    bool correlations_counted = true;
};

/// KS of each of the k top edge spacings against GammaLaw(beta/2, beta/2)
/// (t = 2n/beta), pairwise correlations, and a planar two-sample statistic of
/// (r_1, r_2) against independent Gamma pairs.
std::vector<TestReport> check_fixed_time_spacings(const FixedTimeSpacingParams& params, const CheckContext& ctx);

/// Largest eigenvalue: tridiagonal model against dense matrices.
TestReport check_tridiagonal_vs_dense(int n, int beta, int n_samples, double threshold, const CheckContext& ctx);

/// Top point of level n-1: sample_beta_hermite + sample_corner_level against
/// the dense corner oracle.
TestReport check_corner_level_vs_dense(int n, int beta, int n_samples, double threshold, const CheckContext& ctx);

/// Semicircle L1 distance of one draw (and, as a diagnostic, of all draws
/// pooled) and the bulk rigidity fraction |x_i - gamma_i| <= n^exponent over
/// indices [0.2 n, 0.8 n].
std::vector<TestReport> check_semicircle_rigidity(int n, double beta, int draws, int bins, double l1_threshold,
                                                  double rigidity_exponent, double min_fraction,
                                                  const CheckContext& ctx);

struct LimitRunParams {
    int k = 3;
    double beta = 4.0;
    double t0 = 0.5;
    double dt = 1e-4;
    int n_paths = 4000;
    std::vector<double> times{1.0, 5.0};
    double threshold = 0.05;
};

/// Marginals of the R system started from its product Gamma law, at each time.
std::vector<TestReport> check_stationarity(const LimitRunParams& params, const CheckContext& ctx);

/// First spacing of a k-spacing run against a direct one-spacing run.
TestReport check_restriction_consistency(const LimitRunParams& params, const CheckContext& ctx);

/// Nonpositive spacings on every step over all paths, and ordering violations
/// of the Z system.
std::vector<TestReport> check_positivity(const LimitRunParams& params, const CheckContext& ctx);

/// First gap of the Z system against the first R spacing at params.times[0].
TestReport check_z_r_equivalence(const LimitRunParams& params, const CheckContext& ctx);

/// One-spacing R run and the Bessel-type comparison process of dimension D
/// driven by the same increments: number of grid times with Bessel < R.
std::vector<TestReport> check_bessel_domination(double beta, double t0, double dimension, double dt, double horizon,
                                                int n_paths, const CheckContext& ctx);

/// Residual of the adjoint generator of the R system applied to the product
/// Gamma density prod x^(beta/2 - 1) e^(-c x), c = sqrt(beta / (2 t0)),
/// relative to the density, at random points of [lo, hi]^k. A finite
/// difference check of the closed-form partial derivatives is a diagnostic.
std::vector<TestReport> check_adjoint_annihilation(int k, double beta, double t0, int n_points, double lo, double hi,
                                                   double threshold, const CheckContext& ctx);

/// Relative residual |A* g| / g at one point.
double adjoint_residual(const std::vector<double>& x, double beta, double t0);

struct MdbmSpacingParams {
    int n = 60;
    int k = 2;
    double beta = 4.0;
    double t0 = 0.5;
    double dt = 1e-4;
    int n_paths = 1000;
    std::vector<double> times{0.0, 0.5};
    double threshold = 0.08;
};

/// Edge spacings of warm-started multilevel runs against GammaLaw::edge_spacing.
std::vector<TestReport> check_mdbm_spacings(const MdbmSpacingParams& params, const CheckContext& ctx);

/// Means of the remainder drifts on corners-process states of variance n t0.
/// Every S_a is compared with 0. The bottom remainder is compared with
/// `s_hat_target` (counted), and with +c and -c (diagnostics),
/// c = sqrt(beta / (2 t0)).
std::vector<TestReport> check_remainder_limits(int n, int k, double beta, double t0, int n_samples, double tolerance,
                                               double s_hat_target, const CheckContext& ctx);

}  // namespace dyson_edge
