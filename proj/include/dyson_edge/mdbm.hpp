#pragma once

#include <span>
#include <vector>

#include "dyson_edge/rng.hpp"
#include "dyson_edge/types.hpp"

namespace dyson_edge {

/// State of the multilevel dynamics at absolute time `time`.
struct MdbmState {
    GtArray array;
    double time = 0.0;
    double beta = 4.0;
};

/// Exact state at absolute time n * t0: the corners process of variance n * t0.
MdbmState warm_start(const SimConfig& config, RngStream& rng);

/// Drift of every particle, flat in GtArray order:
/// (beta/2 - 1) [sum_j 1/(x^k_i - x^{k-1}_j) - sum_{j != i} 1/(x^k_i - x^k_j)].
void mdbm_drift(const GtArray& a, double beta, std::span<double> out);

/// Drift-implicit Euler scheme that stays inside the open interlacing cone.
///
/// Levels are updated bottom-up. For x^k_i everything except the repulsion
/// from its two adjacent particles on level k-1 is explicit; that repulsion is
/// taken at the new position, with the lower level already moved:
///   x' = x + dt * b(x) + dW + dt (beta/2 - 1) (1/(x' - l') + 1/(x' - u'))
/// where l' < x' < u' are the updated neighbours below. The equation has one
/// root in (l', u') and the new level interlaces the new lower level.
class MdbmStepper {
public:
    explicit MdbmStepper(int n_levels);

    /// Advances `state` by dt.
    void step(MdbmState& state, double dt, RngStream& rng);

    long long steps() const { return steps_; }

    /// Re-check strict interlacing after every step.
    bool check_every_step = false;

private:
    void explicit_drift(const double* x, double c);

    int n_;
    std::vector<double> drift_;
    std::vector<double> next_;
    std::vector<float> acc_;
    std::vector<double> row_pad_;
    std::vector<double> target_;
    std::vector<double> dist_;
    std::vector<double> last_;
    long long steps_ = 0;
};

void step_mdbm(MdbmState& state, double dt, RngStream& rng);

/// Edge spacings (config.k of them) of one path started from warm_start, at
/// times relative to the warm start. Times must be nondecreasing and >= 0.
std::vector<SpacingVector> run_spacing_trajectory(const SimConfig& config, std::span<const double> observation_times,
                                                  RngStream& rng);

struct RemainderDrifts {
    std::vector<double> s;  // S_0 .. S_{k-2}
    double s_hat = 0.0;     // remainder of the bottom tracked spacing
};

/// Nonlocal parts of the drifts of the top k edge spacings: the drift of
/// spacing a+1 minus its local part (beta/2-1)(1/r_{a+1} - 1/r_{a+2}), and for
/// the last spacing the drift minus (beta/2-1)/r_k with the lower particle
/// written in its own single-level filtration.
///
/// `top_levels[0]` is level N; levels N .. N-k are read.
RemainderDrifts remainder_drifts(const std::vector<LevelSpectrum>& top_levels, double beta, int k);
RemainderDrifts remainder_drifts(const MdbmState& state, int k);

}  // namespace dyson_edge
