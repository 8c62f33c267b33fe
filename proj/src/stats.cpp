#include "dyson_edge/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "dyson_edge/core_model.hpp"
#include "dyson_edge/errors.hpp"

namespace dyson_edge {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
        if (std::isnan(v)) throw DomainError("EmpiricalDistribution: NaN in sample");
    }
    std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::cdf(double x) const {
    if (values_.empty()) throw DomainError("EmpiricalDistribution: empty sample");
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double ks_distance(const EmpiricalDistribution& sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw DomainError("ks_distance: empty sample");
    const auto v = sample.values();
    const double m = static_cast<double>(v.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        const double below = static_cast<double>(i) / m;
        const double at = static_cast<double>(j) / m;
        const double left = cdf(std::nextafter(v[i], -std::numeric_limits<double>::infinity()));
        d = std::max({d, std::abs(left - below), std::abs(cdf(v[i]) - at)});
        i = j;
    }
    return d;
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
    const auto x = a.values();
    const auto y = b.values();
    const double na = static_cast<double>(x.size());
    const double nb = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() || j < y.size()) {
        double v;
        if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
            v = x[i];
        } else {
            v = y[j];
        }
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double dkw_band(std::size_t m, double alpha) {
    if (m == 0 || !(alpha > 0.0 && alpha < 1.0)) throw DomainError("dkw_band: need m >= 1 and alpha in (0, 1)");
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(m)));
}

double SampleMoments::standard_error() const {
    return count == 0 ? 0.0 : std::sqrt(variance / static_cast<double>(count));
}

SampleMoments moments(std::span<const double> x) {
    if (x.empty()) throw DomainError("moments: empty sample");
    SampleMoments m;
    m.count = x.size();
    double sum = 0.0;
    for (double v : x) sum += v;
    m.mean = sum / static_cast<double>(x.size());
    if (x.size() > 1) {
        double ss = 0.0;
        for (double v : x) ss += (v - m.mean) * (v - m.mean);
        m.variance = ss / static_cast<double>(x.size() - 1);
    }
    return m;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw StructuralError("pearson: samples differ in length");
    if (x.size() < 2) throw DomainError("pearson: need at least two pairs");
    const double mx = moments(x).mean;
    const double my = moments(y).mean;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

namespace {

using Point = std::pair<double, double>;

std::array<double, 4> quadrant_fractions(std::span<const Point> s, const Point& c) {
    std::array<double, 4> q{};
    for (const auto& [x, y] : s) {
        if (x > c.first && y > c.second) q[0] += 1;
        else if (x < c.first && y > c.second) q[1] += 1;
        else if (x < c.first && y < c.second) q[2] += 1;
        else if (x > c.first && y < c.second) q[3] += 1;
    }
    for (auto& v : q) v /= static_cast<double>(s.size());
    return q;
}

double max_quadrant_difference(std::span<const Point> centres, std::span<const Point> a, std::span<const Point> b) {
    double d = 0.0;
    for (const auto& c : centres) {
        const auto qa = quadrant_fractions(a, c);
        const auto qb = quadrant_fractions(b, c);
        for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(qa[i] - qb[i]));
    }
    return d;
}

}  // namespace

double ks_2d_two_sample(std::span<const Point> a, std::span<const Point> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_2d_two_sample: empty sample");
    return 0.5 * (max_quadrant_difference(a, a, b) + max_quadrant_difference(b, a, b));
}

double semicircle_l1(std::span<const double> scaled, int bins) {
    if (scaled.empty()) throw DomainError("semicircle_l1: empty sample");
    if (bins < 1) throw DomainError("semicircle_l1: bins must be >= 1");
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    double outside = 0.0;
    const double width = 4.0 / bins;
    for (double s : scaled) {
        if (!(s >= -2.0 && s <= 2.0)) {
            outside += 1.0;
            continue;
        }
        const int b = std::min(bins - 1, static_cast<int>((s + 2.0) / width));
        counts[static_cast<std::size_t>(b)] += 1.0;
    }
    const double m = static_cast<double>(scaled.size());
    double l1 = outside / m;
    for (int b = 0; b < bins; ++b) {
        const double lo = -2.0 + b * width;
        const double hi = b + 1 == bins ? 2.0 : lo + width;
        l1 += std::abs(counts[static_cast<std::size_t>(b)] / m - (semicircle_cdf(hi) - semicircle_cdf(lo)));
    }
    return l1;
}

namespace {

constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[static_cast<std::size_t>(j)];
        const double sum = f(centre - dx) + f(centre + dx);
        kronrod += kWgk[static_cast<std::size_t>(j)] * sum;
        if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * sum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(tol > 0.0)) throw DomainError("integrate: tolerance must be positive");
    if (a == b) return 0.0;
    std::vector<Panel> panels{gauss_kronrod(f, a, b)};
    const auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    for (int iter = 0; iter < 2000; ++iter) {
        double value = 0.0;
        double error = 0.0;
        for (const auto& p : panels) {
            value += p.value;
            error += p.error;
        }
        if (error <= tol) return value;
        std::pop_heap(panels.begin(), panels.end(), worse);
        const Panel p = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        panels.push_back(gauss_kronrod(f, p.a, mid));
        std::push_heap(panels.begin(), panels.end(), worse);
        panels.push_back(gauss_kronrod(f, mid, p.b));
        std::push_heap(panels.begin(), panels.end(), worse);
    }
    throw NumericalError("integrate: tolerance not reached after 2000 subdivisions");
}

}  // namespace dyson_edge
