#pragma once

#include <cstdint>
#include <random>

namespace dyson_edge {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of stream `index` under `master`; distinct indices give decorrelated
/// 64-bit seeds without any shared generator.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic pseudo-random stream keyed by (seed, stream index).
///
/// Variates come from the standard library distributions, so bit-exact
/// reproducibility holds per standard library implementation.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return index_; }

    /// Child stream for sub-unit `index`, e.g. one path inside a batch.
    RngStream split(std::uint64_t index) const;

    double uniform() { return uniform_(engine_); }
    double normal() { return normal_(engine_); }
    double normal(double variance);
    /// Gamma variate with the given shape and scale.
    double gamma(double shape, double scale = 1.0);

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t index_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace dyson_edge
