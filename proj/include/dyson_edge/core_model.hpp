#pragma once

#include <optional>
#include <vector>

#include "dyson_edge/types.hpp"

namespace dyson_edge {

struct InterlacingViolation {
    int level = 0;  // level k of the offending particle x^k_i
    int index = 0;  // 1-based i
    double value = 0.0;
    double bound = 0.0;
};

/// First violated inequality of the closed (strict = false) or open cone,
/// scanning levels bottom-up. Nondecreasing rows are part of the check.
std::optional<InterlacingViolation> find_interlacing_violation(const GtArray& a, bool strict = false);

/// x^{k+1}_i <= x^k_i <= x^{k+1}_{i+1} for all 1 <= i <= k <= N-1.
bool validate_interlacing(const GtArray& a);
bool validate_strict_interlacing(const GtArray& a);

/// r_i = x^{N+1-i}_{N+1-i} - x^{N-i}_{N-i}, i = 1..k. Requires 1 <= k <= N-1.
SpacingVector edge_spacings(const GtArray& a, int k);

/// Same spacings from the top levels only: levels[0] is level N, levels[1] is
/// level N-1, and so on; needs at least k+1 entries.
SpacingVector edge_spacings(const std::vector<LevelSpectrum>& top_levels, int k);

/// Brownian scaling factor sqrt(to_time / from_time); both times must be > 0.
double diffusive_scale(double from_time, double to_time);

GtArray rescale_time(const GtArray& a, double from_time, double to_time);
LevelSpectrum rescale_time(const LevelSpectrum& s, double from_time, double to_time);

/// Semicircle law on [-2, 2] with density sqrt(4 - s^2) / (2 pi).
double semicircle_density(double s);
double semicircle_cdf(double s);

/// gamma_i with semicircle_cdf(gamma_i / n) = i / n, i = 1..n.
std::vector<double> semicircle_quantiles(int n);

/// Regularized lower incomplete gamma P(a, x).
double regularized_lower_gamma(double a, double x);

double gamma_cdf(const GammaLaw& law, double x);

}  // namespace dyson_edge
