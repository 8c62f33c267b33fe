#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dyson_edge {

/// Interlacing triangular array with N levels; level k holds k positions.
///
/// Storage is flat and level-major: level k (1-based) occupies the index range
/// [k(k-1)/2, k(k+1)/2). Row lengths are therefore correct by construction;
/// `from_rows` is the entry point that has to check them.
class GtArray {
public:
    GtArray() = default;
    explicit GtArray(int n_levels);

    /// Throws StructuralError unless rows.size() == N and row k has k entries.
    static GtArray from_rows(const std::vector<std::vector<double>>& rows);

    int n_levels() const { return n_; }
    std::size_t size() const { return data_.size(); }

    std::span<double> level(int k);
    std::span<const double> level(int k) const;

    /// Rightmost particle of level k, x^k_k.
    double top(int k) const { return level(k).back(); }

    std::span<double> flat() { return data_; }
    std::span<const double> flat() const { return data_; }

    std::vector<std::vector<double>> rows() const;

    static std::size_t offset(int k) { return static_cast<std::size_t>(k) * (k - 1) / 2; }

    friend bool operator==(const GtArray&, const GtArray&) = default;

private:
    int n_ = 0;
    std::vector<double> data_;
};

/// Ordered coordinates of a single level.
struct LevelSpectrum {
    std::vector<double> values;

    int level() const { return static_cast<int>(values.size()); }
    friend bool operator==(const LevelSpectrum&, const LevelSpectrum&) = default;
};

/// Spacings between rightmost particles of adjacent levels, r_1 at the top.
struct SpacingVector {
    std::vector<double> r;

    int k() const { return static_cast<int>(r.size()); }
    friend bool operator==(const SpacingVector&, const SpacingVector&) = default;
};

/// Gamma law with density rate^shape / Gamma(shape) x^(shape-1) e^(-rate x).
struct GammaLaw {
    double shape = 1.0;
    double rate = 1.0;

    /// Limiting edge-spacing law: shape beta/2, rate sqrt(beta / (2 t0)).
    static GammaLaw edge_spacing(double beta, double t0);

    double mean() const { return shape / rate; }
    double variance() const { return shape / (rate * rate); }
    double pdf(double x) const;
    double cdf(double x) const;
};

struct SimConfig {
    double beta = 4.0;
    double t0 = 0.5;
    int n = 60;
    int k = 1;
    double dt = 1e-4;
    double horizon = 1.0;
    std::int64_t n_samples = 1000;
    std::uint64_t seed = 0;
    std::vector<double> observation_times;  // empty means {0, horizon}

    /// Throws ConfigError on any violated field constraint.
    void validate() const;
};

}  // namespace dyson_edge
