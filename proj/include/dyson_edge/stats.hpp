#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace dyson_edge {

/// Sorted sample with its right-continuous empirical CDF.
class EmpiricalDistribution {
public:
    EmpiricalDistribution() = default;
    /// Sorts the values; NaN entries are rejected with DomainError.
    explicit EmpiricalDistribution(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    std::span<const double> values() const { return values_; }

    /// Fraction of the sample <= x.
    double cdf(double x) const;

private:
    std::vector<double> values_;
};

/// sup_x |ECDF(x) - cdf(x)|, evaluated at every jump from both sides.
/// The left value at a jump v is cdf(nextafter(v, -inf)).
double ks_distance(const EmpiricalDistribution& sample, const std::function<double(double)>& cdf);

/// sup_x |ECDF_a(x) - ECDF_b(x)|.
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Half-width of the DKW band holding with probability 1 - alpha for m draws.
double dkw_band(std::size_t m, double alpha);

struct SampleMoments {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased; 0 for a single value
    double standard_error() const;
};

/// Two-pass mean and variance. Throws DomainError on an empty sample.
SampleMoments moments(std::span<const double> x);

/// Pearson correlation; 0 when either sample has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Fasano-Franceschini two-sample statistic for planar samples: the largest
/// quadrant-probability difference, averaged over the two choices of centre set.
double ks_2d_two_sample(std::span<const std::pair<double, double>> a, std::span<const std::pair<double, double>> b);

/// Sum over `bins` equal bins of [-2, 2] of |fraction of scaled values in the
/// bin - semicircle mass of the bin|, plus the fraction of values outside [-2, 2].
double semicircle_l1(std::span<const double> scaled, int bins);

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b] to absolute tolerance tol.
/// Throws NumericalError if the subdivision budget runs out.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace dyson_edge
