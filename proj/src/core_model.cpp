#include "dyson_edge/core_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dyson_edge/errors.hpp"

namespace dyson_edge {

namespace {

bool violates(double lo, double hi, bool strict) { return strict ? !(lo < hi) : !(lo <= hi); }

}  // namespace

std::optional<InterlacingViolation> find_interlacing_violation(const GtArray& a, bool strict) {
    const int n = a.n_levels();
    for (int k = 1; k <= n; ++k) {
        auto row = a.level(k);
        for (int i = 1; i < k; ++i) {
            if (violates(row[i - 1], row[i], strict)) {
                return InterlacingViolation{k, i + 1, row[i], row[i - 1]};
            }
        }
        if (k == n) break;
        auto up = a.level(k + 1);
        for (int i = 1; i <= k; ++i) {
            const double x = row[i - 1];
            if (violates(up[i - 1], x, strict)) return InterlacingViolation{k, i, x, up[i - 1]};
            if (violates(x, up[i], strict)) return InterlacingViolation{k, i, x, up[i]};
        }
    }
    return std::nullopt;
}

bool validate_interlacing(const GtArray& a) { return !find_interlacing_violation(a, false); }

bool validate_strict_interlacing(const GtArray& a) { return !find_interlacing_violation(a, true); }

SpacingVector edge_spacings(const GtArray& a, int k) {
    const int n = a.n_levels();
    if (k < 1 || k >= n) {
        throw RangeError("edge_spacings: k=" + std::to_string(k) + " must lie in 1..N-1 with N=" + std::to_string(n));
    }
    SpacingVector out;
    out.r.resize(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) {
        out.r[i - 1] = a.top(n + 1 - i) - a.top(n - i);
    }
    return out;
}

SpacingVector edge_spacings(const std::vector<LevelSpectrum>& top_levels, int k) {
    if (k < 1 || static_cast<std::size_t>(k) + 1 > top_levels.size()) {
        throw RangeError("edge_spacings: need k+1 top levels for k=" + std::to_string(k));
    }
    SpacingVector out;
    out.r.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const auto& upper = top_levels[i].values;
        const auto& lower = top_levels[i + 1].values;
        if (upper.empty() || lower.empty() || upper.size() != lower.size() + 1) {
            throw StructuralError("edge_spacings: top levels must shrink by one particle per level");
        }
        out.r[i] = upper.back() - lower.back();
    }
    return out;
}

double diffusive_scale(double from_time, double to_time) {
    if (!(from_time > 0.0) || !(to_time > 0.0)) {
        throw DomainError("rescale_time: times must be positive");
    }
    return std::sqrt(to_time / from_time);
}

GtArray rescale_time(const GtArray& a, double from_time, double to_time) {
    const double f = diffusive_scale(from_time, to_time);
    GtArray out = a;
    for (double& x : out.flat()) x *= f;
    return out;
}

LevelSpectrum rescale_time(const LevelSpectrum& s, double from_time, double to_time) {
    const double f = diffusive_scale(from_time, to_time);
    LevelSpectrum out = s;
    for (double& x : out.values) x *= f;
    return out;
}

double semicircle_density(double s) {
    if (s <= -2.0 || s >= 2.0) return 0.0;
    return std::sqrt(4.0 - s * s) / (2.0 * std::numbers::pi);
}

double semicircle_cdf(double s) {
    if (s <= -2.0) return 0.0;
    if (s >= 2.0) return 1.0;
    return 0.5 + (s * std::sqrt(4.0 - s * s)) / (4.0 * std::numbers::pi) + std::asin(s / 2.0) / std::numbers::pi;
}

std::vector<double> semicircle_quantiles(int n) {
    if (n < 1) throw DomainError("semicircle_quantiles: n must be >= 1");
    std::vector<double> gamma(static_cast<std::size_t>(n));
    // bisection in s = gamma / n; an s-tolerance of 1e-10 is 1e-10 n on gamma
    constexpr double kTolS = 1e-10;
    for (int i = 1; i <= n; ++i) {
        if (i == n) {
            gamma[i - 1] = 2.0 * n;
            continue;
        }
        const double target = static_cast<double>(i) / n;
        double lo = -2.0, hi = 2.0;
        while (hi - lo > kTolS) {
            const double mid = 0.5 * (lo + hi);
            (semicircle_cdf(mid) < target ? lo : hi) = mid;
        }
        gamma[i - 1] = 0.5 * (lo + hi) * n;
    }
    if (n % 2 == 0) gamma[n / 2 - 1] = 0.0;  // exact by symmetry
    return gamma;
}

namespace {

// Series for P(a, x), effective when x < a + 1.
double lower_gamma_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x), effective when x >= a + 1.
double upper_gamma_fraction(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_lower_gamma(double a, double x) {
    if (!(a > 0.0)) throw DomainError("regularized_lower_gamma: shape must be positive");
    if (std::isnan(x)) return x;
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return lower_gamma_series(a, x);
    return 1.0 - upper_gamma_fraction(a, x);
}

double gamma_cdf(const GammaLaw& law, double x) {
    if (!(law.shape > 0.0) || !(law.rate > 0.0)) {
        throw DomainError("gamma_cdf: shape and rate must be positive");
    }
    if (x <= 0.0) return 0.0;
    return regularized_lower_gamma(law.shape, law.rate * x);
}

}  // namespace dyson_edge
