#include "dyson_edge/mdbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dyson_edge/core_model.hpp"
#include "dyson_edge/ensemble.hpp"
#include "dyson_edge/errors.hpp"

namespace dyson_edge {

MdbmState warm_start(const SimConfig& config, RngStream& rng) {
    if (!(config.beta >= 4.0)) {
        throw DomainError("warm_start: dynamics need beta >= 4, got " + std::to_string(config.beta));
    }
    if (config.n < 1) throw DomainError("warm_start: n must be >= 1");
    if (!(config.t0 > 0.0)) throw DomainError("warm_start: t0 must be positive");
    const double variance = config.n * config.t0;
    return MdbmState{sample_corners_process(config.n, config.beta, variance, rng), variance, config.beta};
}

namespace {

// sum_j 1/(x - y_j) over a contiguous run
inline double inverse_sum(double x, const double* y, int count) {
    double s = 0.0;
#pragma omp simd reduction(+ : s)
    for (int j = 0; j < count; ++j) s += 1.0 / (x - y[j]);
    return s;
}

}  // namespace

void mdbm_drift(const GtArray& a, double beta, std::span<double> out) {
    if (out.size() != a.size()) throw StructuralError("mdbm_drift: output size mismatch");
    const double c = beta / 2.0 - 1.0;
    const double* base = a.flat().data();
    const int n = a.n_levels();
    for (int k = 1; k <= n; ++k) {
        const double* row = base + GtArray::offset(k);
        const double* below = k > 1 ? base + GtArray::offset(k - 1) : nullptr;
        double* d = out.data() + GtArray::offset(k);
        for (int i = 0; i < k; ++i) {
            const double x = row[i];
            double s = below ? inverse_sum(x, below, k - 1) : 0.0;
            s -= inverse_sum(x, row, i);
            s -= inverse_sum(x, row + i + 1, k - i - 1);
            d[i] = c * s;
        }
    }
}

namespace {

// Positive root u of u = s + hc / u.
double one_sided_root(double s, double hc) {
    const double disc = std::sqrt(s * s + 4.0 * hc);
    return s >= 0.0 ? 0.5 * (s + disc) : 2.0 * hc / (disc - s);
}

// Root of x = a + hc / (x - lo) + hc / (x - hi) inside (lo, hi); either bound
// may be infinite.
double resolve_between(double a, double lo, double hi, double hc) {
    const bool has_lo = std::isfinite(lo);
    const bool has_hi = std::isfinite(hi);
    if (!has_lo && !has_hi) return a;
    if (!has_hi) return lo + one_sided_root(a - lo, hc);
    if (!has_lo) return hi - one_sided_root(hi - a, hc);

    // u = x - lo in (0, w): g(u) = u - s - hc/u + hc/(w - u) is increasing
    const double w = hi - lo;
    const double s = a - lo;
    double u = s <= 0.5 * w ? one_sided_root(s, hc) : w - one_sided_root(w - s, hc);
    double left = 0.0, right = w;
    if (!(u > left && u < right)) u = 0.5 * w;
    for (int iter = 0; iter < 100; ++iter) {
        const double v = w - u;
        const double g = u - s - hc / u + hc / v;
        if (g > 0.0) {
            right = u;
        } else if (g < 0.0) {
            left = u;
        } else {
            break;
        }
        const double dg = 1.0 + hc / (u * u) + hc / (v * v);
        const double newton = g / dg;
        if (std::abs(newton) <= 1e-13 * std::min(u, v)) {
            if (u - newton > 0.0 && u - newton < w) u -= newton;
            break;
        }
        double next = u - newton;
        if (!(next > left && next < right)) next = 0.5 * (left + right);
        u = next;
        if (right - left <= 1e-14 * w) break;
    }
    return u <= 0.5 * w ? lo + u : hi - (w - u);
}

}  // namespace

MdbmStepper::MdbmStepper(int n_levels) : n_(n_levels) {
    if (n_levels < 1) throw StructuralError("MdbmStepper: n_levels must be >= 1");
    const std::size_t size = GtArray::offset(n_levels + 1);
    drift_.resize(size);
    next_.resize(size);
    const std::size_t padded = (static_cast<std::size_t>(n_levels) + 15) / 16 * 16;
    acc_.resize(padded);
    row_pad_.resize(padded);
    target_.resize(padded);
    dist_.resize(padded);
    last_.resize(padded);
}

// Reciprocals and sums in single precision: the differences are formed in
// double first, so each term keeps its relative accuracy however small the gap.
void MdbmStepper::explicit_drift(const double* x, double c) {
    constexpr int kLanes = 16;
    float* acc = acc_.data();
    double* row_pad = row_pad_.data();
    for (int k = 1; k <= n_; ++k) {
        const double* row = x + GtArray::offset(k);
        const double* below = x + GtArray::offset(k - 1);
        const int width = (k + kLanes - 1) / kLanes * kLanes;
        for (int i = 0; i < width; ++i) {
            row_pad[i] = i < k ? row[i] : row[k - 1] + 1.0 + i;
            acc[i] = 0.0f;
        }
        // repulsion from level k-1 except its neighbours j = i-1 and j = i
        for (int j = 0; j + 1 < k; ++j) {
            const double y = below[j];
#pragma omp simd
            for (int i = 0; i < width; ++i) {
                const bool skip = static_cast<unsigned>(i - j) <= 1u;
                const float t = 1.0f / (skip ? 1.0f : static_cast<float>(row_pad[i] - y));
                acc[i] += skip ? 0.0f : t;
            }
        }
        for (int j = 0; j < k; ++j) {
            const double y = row[j];
#pragma omp simd
            for (int i = 0; i < width; ++i) {
                const bool skip = i == j;
                const float t = 1.0f / (skip ? 1.0f : static_cast<float>(row_pad[i] - y));
                acc[i] -= skip ? 0.0f : t;
            }
        }
        double* d = drift_.data() + GtArray::offset(k);
        for (int i = 0; i < k; ++i) d[i] = c * static_cast<double>(acc[i]);
    }
}

void MdbmStepper::step(MdbmState& state, double dt, RngStream& rng) {
    if (state.array.n_levels() != n_) throw StructuralError("MdbmStepper: state has the wrong number of levels");
    if (!(dt > 0.0)) throw DomainError("step_mdbm: dt must be positive");
    const double c = state.beta / 2.0 - 1.0;
    const double hc = dt * c;
    const double sd = std::sqrt(dt);
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double* x = state.array.flat().data();

    explicit_drift(x, c);
    double* target = target_.data();
    double* dist = dist_.data();
    double* last = last_.data();
    for (int k = 1; k <= n_; ++k) {
        const std::size_t o = GtArray::offset(k);
        const double* lower = next_.data() + GtArray::offset(k - 1);
        double* out = next_.data() + o;
        for (int i = 0; i < k; ++i) target[i] = x[o + i] + dt * drift_[o + i] + sd * rng.normal();
        if (k == 1) {
            out[0] = target[0];
            continue;
        }
        out[0] = lower[0] - one_sided_root(lower[0] - target[0], hc);
        out[k - 1] = lower[k - 2] + one_sided_root(target[k - 1] - lower[k - 2], hc);

        // interior particles: distance d to the nearer wall of (lo, hi) solves
        // d = s + hc/d - hc/(w - d); a few Newton steps from the root of the
        // near-wall equation with the far wall frozen
#pragma omp simd
        for (int i = 1; i < k - 1; ++i) {
            const double lo = lower[i - 1];
            const double w = lower[i] - lo;
            const double from_lo = target[i] - lo;
            const double s = from_lo <= 0.5 * w ? from_lo : w - from_lo;
            const double sf = s - hc / (w - std::clamp(s, 0.0, 0.5 * w));
            const double disc = std::sqrt(sf * sf + 4.0 * hc);
            double d = sf >= 0.0 ? 0.5 * (sf + disc) : 2.0 * hc / (disc - sf);
            double step = 0.0;
            for (int it = 0; it < 3; ++it) {
                const double inv_d = 1.0 / d;
                const double inv_v = 1.0 / (w - d);
                const double g = d - s - hc * inv_d + hc * inv_v;
                step = g / (1.0 + hc * (inv_d * inv_d + inv_v * inv_v));
                d -= step;
            }
            dist[i] = d;
            last[i] = step;
        }
        for (int i = 1; i < k - 1; ++i) {
            const double lo = lower[i - 1];
            const double hi = lower[i];
            const double w = hi - lo;
            const double d = dist[i];
            const bool from_lo = target[i] - lo <= 0.5 * w;
            if (d > 0.0 && d < w && std::abs(last[i]) <= 1e-12 * std::min(d, w - d)) {
                out[i] = from_lo ? lo + d : hi - d;
            } else {
                out[i] = resolve_between(target[i], lo, hi, hc);
            }
        }
        for (int i = 0; i < k; ++i) {
            const double lo = i > 0 ? lower[i - 1] : -inf;
            const double hi = i < k - 1 ? lower[i] : inf;
            if (!(out[i] > lo && out[i] < hi) || !std::isfinite(out[i])) {
                throw StepSizeError("step_mdbm: level " + std::to_string(k) + ", index " + std::to_string(i + 1) +
                                    " left its gap (" + std::to_string(lo) + ", " + std::to_string(hi) +
                                    ") at step " + std::to_string(dt));
            }
        }
    }
    auto flat = state.array.flat();
    std::copy(next_.begin(), next_.begin() + static_cast<std::ptrdiff_t>(flat.size()), flat.begin());
    state.time += dt;
    ++steps_;
    if (check_every_step) {
        if (auto v = find_interlacing_violation(state.array, true)) {
            throw InternalError("step_mdbm: strict interlacing lost at level " + std::to_string(v->level) +
                                ", index " + std::to_string(v->index));
        }
    }
}

void step_mdbm(MdbmState& state, double dt, RngStream& rng) {
    MdbmStepper stepper(state.array.n_levels());
    stepper.step(state, dt, rng);
}

std::vector<SpacingVector> run_spacing_trajectory(const SimConfig& config, std::span<const double> observation_times,
                                                  RngStream& rng) {
    double previous = 0.0;
    for (double t : observation_times) {
        if (!(t >= previous)) {
            throw DomainError("run_spacing_trajectory: observation times must be nondecreasing and >= 0");
        }
        previous = t;
    }
    if (config.k < 1 || config.k >= config.n) throw RangeError("run_spacing_trajectory: k must lie in 1..n-1");
    if (!(config.dt > 0.0)) throw DomainError("run_spacing_trajectory: dt must be positive");

    MdbmState state = warm_start(config, rng);
    MdbmStepper stepper(config.n);
    std::vector<SpacingVector> out;
    out.reserve(observation_times.size());
    double elapsed = 0.0;
    for (double target : observation_times) {
        const auto full_steps = static_cast<long long>(std::floor((target - elapsed) / config.dt + 1e-9));
        for (long long s = 0; s < full_steps; ++s) stepper.step(state, config.dt, rng);
        elapsed += static_cast<double>(full_steps) * config.dt;
        const double rest = target - elapsed;
        if (rest > 1e-12 * std::max(1.0, target)) stepper.step(state, rest, rng);
        elapsed = std::max(elapsed, target);
        out.push_back(edge_spacings(state.array, config.k));
    }
    return out;
}

RemainderDrifts remainder_drifts(const std::vector<LevelSpectrum>& top_levels, double beta, int k) {
    if (k < 1 || static_cast<std::size_t>(k) + 1 > top_levels.size()) {
        throw RangeError("remainder_drifts: need levels N..N-k for k=" + std::to_string(k));
    }
    for (int l = 0; l < k; ++l) {
        if (top_levels[l].values.size() != top_levels[l + 1].values.size() + 1) {
            throw StructuralError("remainder_drifts: top levels must shrink by one particle per level");
        }
    }
    if (top_levels[k].values.empty()) throw RangeError("remainder_drifts: k must be <= N-1");
    const double c = beta / 2.0 - 1.0;

    // sum_{i < count} 1/(x - level_i)
    auto sum_to = [](double x, const std::vector<double>& level, std::size_t count) {
        return inverse_sum(x, level.data(), static_cast<int>(count));
    };

    RemainderDrifts out;
    for (int a = 0; a + 2 <= k; ++a) {
        const auto& upper = top_levels[a].values;      // level L = N - a
        const auto& middle = top_levels[a + 1].values;  // L - 1
        const auto& lower = top_levels[a + 2].values;   // L - 2
        const double xu = upper.back();
        const double xm = middle.back();
        // Nonlocal drift of x_u minus that of x_m.
        double s = -c * sum_to(xu, upper, upper.size() - 1);
        s += c * (sum_to(xu, middle, middle.size() - 1) + sum_to(xm, middle, middle.size() - 1));
        if (!lower.empty()) s -= c * sum_to(xm, lower, lower.size() - 1);
        out.s.push_back(s);
    }
    const auto& upper = top_levels[k - 1].values;  // L = N - k + 1
    const auto& lower = top_levels[k].values;      // L - 1
    const double xu = upper.back();
    const double xl = lower.back();
    out.s_hat = -c * sum_to(xu, upper, upper.size() - 1) + c * sum_to(xu, lower, lower.size() - 1) -
                (beta / 2.0) * sum_to(xl, lower, lower.size() - 1);
    return out;
}

RemainderDrifts remainder_drifts(const MdbmState& state, int k) {
    const int n = state.array.n_levels();
    if (k < 1 || k >= n) throw RangeError("remainder_drifts: k must lie in 1..N-1");
    std::vector<LevelSpectrum> top;
    for (int l = n; l >= n - k; --l) {
        auto row = state.array.level(l);
        top.push_back(LevelSpectrum{std::vector<double>(row.begin(), row.end())});
    }
    return remainder_drifts(top, state.beta, k);
}

}  // namespace dyson_edge
