#include "dyson_edge/limit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyson_edge/errors.hpp"

namespace dyson_edge {

namespace {

void require_positive_spacings(const LimitStateR& state, const char* where) {
    for (std::size_t i = 0; i < state.r.r.size(); ++i) {
        if (!(state.r.r[i] > 0.0)) {
            throw DomainError(std::string(where) + ": spacing " + std::to_string(i + 1) + " is not positive");
        }
    }
}

double bottom_drift(double beta, double t0) { return std::sqrt(beta / (2.0 * t0)); }

}  // namespace

double implicit_root(double s, double a_dt) {
    const double disc = std::sqrt(s * s + 4.0 * a_dt);
    if (s >= 0.0) return 0.5 * (s + disc);
    // r = 2 a_dt / (disc - s) avoids cancellation for negative s
    return 2.0 * a_dt / (disc - s);
}

LimitStateR gamma_product_init(int k, double beta, double t0, RngStream& rng) {
    if (k < 0) throw DomainError("gamma_product_init: k must be >= 0");
    const GammaLaw law = GammaLaw::edge_spacing(beta, t0);
    LimitStateR state;
    state.beta = beta;
    state.t0 = t0;
    state.r.r.resize(static_cast<std::size_t>(k));
    for (auto& r : state.r.r) r = rng.gamma(law.shape, 1.0 / law.rate);
    return state;
}

std::vector<double> limit_noise(int k, double dt, RngStream& rng) {
    std::vector<double> db(static_cast<std::size_t>(k) + 1);
    const double sd = std::sqrt(dt);
    for (auto& x : db) x = sd * rng.normal();
    return db;
}

namespace {

// noise(i) is the increment driving spacing i
template <class Noise>
void split_step(LimitStateR& state, double dt, Noise&& noise) {
    if (!(dt > 0.0)) throw DomainError("step_limit_r: dt must be positive");
    auto& r = state.r.r;
    const std::size_t k = r.size();
    const double a = state.beta / 2.0 - 1.0;
    const double c = bottom_drift(state.beta, state.t0);
    // explicit parts read the old state, so fill from the top
    for (std::size_t i = 0; i < k; ++i) {
        const double bounded = i + 1 < k ? -a * dt / r[i + 1] : -c * dt;
        r[i] = implicit_root(r[i] + bounded + noise(i), a * dt);
    }
    state.time += dt;
}

}  // namespace

void step_limit_r_differenced(LimitStateR& state, double dt, std::span<const double> noise) {
    if (noise.size() != state.r.r.size()) throw StructuralError("step_limit_r: expected one noise term per spacing");
    split_step(state, dt, [&](std::size_t i) { return noise[i]; });
}

void step_limit_r(LimitStateR& state, double dt, std::span<const double> brownian) {
    if (brownian.size() != state.r.r.size() + 1) {
        throw StructuralError("step_limit_r: expected k+1 Brownian increments");
    }
    split_step(state, dt, [&](std::size_t i) { return brownian[i] - brownian[i + 1]; });
}

void step_limit_r(LimitStateR& state, double dt, RngStream& rng) {
    const auto db = limit_noise(state.r.k(), dt, rng);
    step_limit_r(state, dt, db);
}

LimitStateZ z_from_spacings(const LimitStateR& r) {
    LimitStateZ z;
    z.beta = r.beta;
    z.t0 = r.t0;
    z.time = r.time;
    const std::size_t k = r.r.r.size();
    z.z.assign(k + 1, 0.0);
    for (std::size_t i = k; i-- > 0;) z.z[i] = z.z[i + 1] + r.r.r[i];
    return z;
}

SpacingVector z_gaps(const LimitStateZ& z) {
    SpacingVector out;
    for (std::size_t i = 0; i + 1 < z.z.size(); ++i) out.r.push_back(z.z[i] - z.z[i + 1]);
    return out;
}

void step_limit_z(LimitStateZ& state, double dt, std::span<const double> brownian) {
    const std::size_t size = state.z.size();
    if (size == 0) throw StructuralError("step_limit_z: empty state");
    if (brownian.size() != size) throw StructuralError("step_limit_z: expected one increment per coordinate");
    LimitStateR gaps{z_gaps(state), state.time, state.beta, state.t0};
    require_positive_spacings(gaps, "step_limit_z");
    step_limit_r(gaps, dt, brownian);
    auto& z = state.z;
    z[size - 1] += bottom_drift(state.beta, state.t0) * dt + brownian[size - 1];
    for (std::size_t i = size - 1; i-- > 0;) z[i] = z[i + 1] + gaps.r.r[i];
    state.time += dt;
}

void step_limit_z(LimitStateZ& state, double dt, RngStream& rng) {
    const auto db = limit_noise(static_cast<int>(state.z.size()) - 1, dt, rng);
    step_limit_z(state, dt, db);
}

long long step_count(double dt, double horizon) {
    if (!(dt > 0.0)) throw DomainError("step_count: dt must be positive");
    if (!(horizon >= 0.0)) throw DomainError("step_count: horizon must be >= 0");
    return static_cast<long long>(std::ceil(horizon / dt - 1e-9));
}

BesselPath bessel_coupled_pair(double r0, double dimension, double dt, double horizon, RngStream& rng) {
    if (!(r0 > 0.0)) throw DomainError("bessel_coupled_pair: r0 must be positive");
    if (!(dimension > 1.0)) throw DomainError("bessel_coupled_pair: dimension must exceed 1");
    const long long steps = step_count(dt, horizon);
    BesselPath path;
    path.times.reserve(static_cast<std::size_t>(steps) + 1);
    path.values.reserve(static_cast<std::size_t>(steps) + 1);
    path.noise.reserve(static_cast<std::size_t>(steps));
    path.times.push_back(0.0);
    path.values.push_back(r0);
    const double sd = std::sqrt(2.0 * dt);
    double r = r0;
    for (long long s = 0; s < steps; ++s) {
        const double t = path.times.back();
        const double h = std::min(dt, horizon - t);
        const double xi = (h == dt ? sd : std::sqrt(2.0 * h)) * rng.normal();
        r = implicit_root(r + xi, (dimension - 1.0) * h);
        path.noise.push_back(xi);
        path.times.push_back(s + 1 == steps ? horizon : t + h);
        path.values.push_back(r);
    }
    return path;
}

std::vector<SpacingVector> run_limit_r(int k, double beta, double t0, double dt, std::span<const double> observation_times,
                                       RngStream& rng) {
    if (k < 1) throw DomainError("run_limit_r: k must be >= 1");
    if (!(dt > 0.0)) throw DomainError("run_limit_r: dt must be positive");
    double previous = 0.0;
    for (double t : observation_times) {
        if (!(t >= previous)) throw DomainError("run_limit_r: observation times must be nondecreasing and >= 0");
        previous = t;
    }
    LimitStateR state = gamma_product_init(k, beta, t0, rng);
    std::vector<SpacingVector> out;
    out.reserve(observation_times.size());
    std::vector<double> db(static_cast<std::size_t>(k) + 1);
    const double sd = std::sqrt(dt);
    double elapsed = 0.0;
    for (double target : observation_times) {
        const auto full_steps = static_cast<long long>(std::floor((target - elapsed) / dt + 1e-9));
        for (long long s = 0; s < full_steps; ++s) {
            for (auto& x : db) x = sd * rng.normal();
            step_limit_r(state, dt, db);
        }
        elapsed += static_cast<double>(full_steps) * dt;
        const double rest = target - elapsed;
        if (rest > 1e-12 * std::max(1.0, target)) step_limit_r(state, rest, rng);
        elapsed = std::max(elapsed, target);
        out.push_back(state.r);
    }
    return out;
}

}  // namespace dyson_edge
