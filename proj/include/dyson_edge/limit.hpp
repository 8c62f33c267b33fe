#pragma once

#include <span>
#include <vector>

#include "dyson_edge/rng.hpp"
#include "dyson_edge/types.hpp"

namespace dyson_edge {

/// Spacings of the edge limit: for a = beta/2 - 1 and c = sqrt(beta / (2 t0)),
///   dR_i = a (1/R_i - 1/R_{i+1}) dt + dB_i - dB_{i+1},  i < k,
///   dR_k = (a/R_k - c) dt + dB_k - dB_{k+1}.
struct LimitStateR {
    SpacingVector r;
    double time = 0.0;
    double beta = 4.0;
    double t0 = 0.5;
};

/// Ordered coordinates z_1 > ... > z_{k+1} whose consecutive differences
/// follow LimitStateR; the lowest one moves with drift c.
struct LimitStateZ {
    std::vector<double> z;
    double time = 0.0;
    double beta = 4.0;
    double t0 = 0.5;
};

/// Positive root of r = s + a_dt / r; equals max(s, 0) when a_dt = 0.
///
/// Increasing in s and in a_dt, which is what makes the coupled comparison
/// with a Bessel process order preserving.
double implicit_root(double s, double a_dt);

/// k i.i.d. GammaLaw::edge_spacing(beta, t0) spacings at time 0.
LimitStateR gamma_product_init(int k, double beta, double t0, RngStream& rng);

/// k + 1 independent N(0, dt) increments, one per Brownian motion B_1..B_{k+1}.
std::vector<double> limit_noise(int k, double dt, RngStream& rng);

/// One step of the split scheme: explicit bounded drift and noise give S_i,
/// then R_i' = implicit_root(S_i, a dt). `brownian` holds the k + 1 increments.
void step_limit_r(LimitStateR& state, double dt, std::span<const double> brownian);
void step_limit_r(LimitStateR& state, double dt, RngStream& rng);

/// Same step with the k noise terms dB_i - dB_{i+1} supplied directly.
void step_limit_r_differenced(LimitStateR& state, double dt, std::span<const double> noise);

/// Gaps of z move by the R scheme with the same increments; the lowest
/// coordinate moves explicitly by c dt + dB_{k+1}.
void step_limit_z(LimitStateZ& state, double dt, std::span<const double> brownian);
void step_limit_z(LimitStateZ& state, double dt, RngStream& rng);

/// z with z_{k+1} = 0 and gaps r.
LimitStateZ z_from_spacings(const LimitStateR& r);
SpacingVector z_gaps(const LimitStateZ& z);

/// Path of dR = (D - 1) dt / R + sqrt(2) dB started at r0, on the grid
/// 0, dt, ..., horizon, with the increments sqrt(2) dB of every step.
struct BesselPath {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> noise;  // noise[s] drives the step from times[s] to times[s+1]
};

BesselPath bessel_coupled_pair(double r0, double dimension, double dt, double horizon, RngStream& rng);

/// Number of grid steps covering [0, horizon] at step dt (last step may be short).
long long step_count(double dt, double horizon);

/// Stationary-start run of the R system; entry j is the state at
/// observation_times[j].
std::vector<SpacingVector> run_limit_r(int k, double beta, double t0, double dt, std::span<const double> observation_times,
                                       RngStream& rng);

}  // namespace dyson_edge
