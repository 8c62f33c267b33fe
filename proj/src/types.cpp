#include "dyson_edge/types.hpp"

#include <cmath>
#include <string>

#include "dyson_edge/core_model.hpp"
#include "dyson_edge/errors.hpp"

namespace dyson_edge {

GtArray::GtArray(int n_levels) : n_(n_levels) {
    if (n_levels < 1) {
        throw StructuralError("GtArray needs at least one level, got " + std::to_string(n_levels));
    }
    data_.assign(offset(n_levels + 1), 0.0);
}

GtArray GtArray::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        throw StructuralError("GtArray needs at least one level");
    }
    GtArray a(static_cast<int>(rows.size()));
    for (std::size_t k = 1; k <= rows.size(); ++k) {
        const auto& row = rows[k - 1];
        if (row.size() != k) {
            throw StructuralError("row " + std::to_string(k) + " has " + std::to_string(row.size()) +
                                  " entries, expected " + std::to_string(k));
        }
        auto dst = a.level(static_cast<int>(k));
        std::copy(row.begin(), row.end(), dst.begin());
    }
    return a;
}

std::span<double> GtArray::level(int k) {
    if (k < 1 || k > n_) {
        throw RangeError("level " + std::to_string(k) + " outside 1.." + std::to_string(n_));
    }
    return std::span<double>(data_).subspan(offset(k), static_cast<std::size_t>(k));
}

std::span<const double> GtArray::level(int k) const {
    if (k < 1 || k > n_) {
        throw RangeError("level " + std::to_string(k) + " outside 1.." + std::to_string(n_));
    }
    return std::span<const double>(data_).subspan(offset(k), static_cast<std::size_t>(k));
}

std::vector<std::vector<double>> GtArray::rows() const {
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(n_));
    for (int k = 1; k <= n_; ++k) {
        auto row = level(k);
        out.emplace_back(row.begin(), row.end());
    }
    return out;
}

GammaLaw GammaLaw::edge_spacing(double beta, double t0) {
    if (!(beta > 0.0) || !(t0 > 0.0)) {
        throw DomainError("edge spacing law needs beta > 0 and t0 > 0");
    }
    return GammaLaw{beta / 2.0, std::sqrt(beta / (2.0 * t0))};
}

double GammaLaw::pdf(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) {
        if (shape < 1.0) return INFINITY;
        return shape == 1.0 ? rate : 0.0;
    }
    return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x - std::lgamma(shape));
}

double GammaLaw::cdf(double x) const { return gamma_cdf(*this, x); }

void SimConfig::validate() const {
    if (!(beta >= 1.0) || !std::isfinite(beta)) {
        throw ConfigError("beta: must be a finite real >= 1, got " + std::to_string(beta));
    }
    if (!(t0 > 0.0) || !std::isfinite(t0)) {
        throw ConfigError("t0: must be a positive real");
    }
    if (n < 1) {
        throw ConfigError("n: must be a positive integer");
    }
    if (k < 1) {
        throw ConfigError("k: must be a positive integer");
    }
    if (n >= 2 && k > n - 1) {
        throw ConfigError("k: must not exceed n-1 (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("dt: must be a positive real");
    }
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
        throw ConfigError("horizon: must be a nonnegative real");
    }
    if (horizon > 0.0 && dt > horizon) {
        throw ConfigError("dt: must not exceed horizon when horizon > 0");
    }
    if (n_samples < 0) {
        throw ConfigError("n_samples: must be nonnegative");
    }
    double prev = 0.0;
    for (double t : observation_times) {
        if (!(t >= prev) || !std::isfinite(t)) {
            throw ConfigError("observation_times: must be finite, nonnegative and nondecreasing");
        }
        prev = t;
    }
}

}  // namespace dyson_edge
