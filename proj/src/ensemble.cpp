#include "dyson_edge/ensemble.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "dyson_edge/errors.hpp"

namespace dyson_edge {

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diagonal, std::span<const double> off_diagonal) {
    const std::size_t n = diagonal.size();
    if (n == 0) return {};
    if (off_diagonal.size() + 1 != n) {
        throw StructuralError("tridiagonal_eigenvalues: off-diagonal must have n-1 entries");
    }
    std::vector<double> d(diagonal.begin(), diagonal.end());
    std::vector<double> e(n, 0.0);
    std::copy(off_diagonal.begin(), off_diagonal.end(), e.begin());
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int kMaxSweeps = 60;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iter > kMaxSweeps) {
                throw NumericalError("tridiagonal_eigenvalues: no convergence for eigenvalue " + std::to_string(l) +
                                     " of " + std::to_string(n) + " after " + std::to_string(kMaxSweeps) +
                                     " sweeps (|e|=" + std::to_string(std::abs(e[l])) + ")");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t ii = m; ii-- > l;) {
                const double f = s * e[ii];
                const double b = c * e[ii];
                r = std::hypot(f, g);
                e[ii + 1] = r;
                if (r == 0.0) {
                    d[ii + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[ii + 1] - p;
                r = (d[ii] - g) * s + 2.0 * c * b;
                p = s * r;
                d[ii + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

LevelSpectrum sample_beta_hermite(int n, double beta, double variance_t, RngStream& rng) {
    if (n < 1) throw DomainError("sample_beta_hermite: n must be >= 1");
    if (!(beta > 0.0)) throw DomainError("sample_beta_hermite: beta must be positive");
    if (!(variance_t > 0.0)) throw DomainError("sample_beta_hermite: variance must be positive");
    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> off(static_cast<std::size_t>(n - 1));
    const double sd = std::sqrt(variance_t);
    const double off_scale = std::sqrt(variance_t / 2.0);
    for (int i = 0; i < n; ++i) diag[i] = sd * rng.normal();
    for (int i = 1; i < n; ++i) {
        // chi with beta (n - i) degrees of freedom as sqrt(Gamma(beta (n - i) / 2, 2))
        off[i - 1] = off_scale * std::sqrt(rng.gamma(beta * (n - i) / 2.0, 2.0));
    }
    return LevelSpectrum{tridiagonal_eigenvalues(diag, off)};
}

namespace {

// Root of sum_j w_j / (y - x_j) inside (x[gap], x[gap + 1]).
//
// The nearer pole is factored out: with y = x_o + delta the function
// F(delta) = w_o + delta * sum_{j != o} w_j / (x_o - x_j + delta) is smooth
// on the half-interval that holds the root, and Newton on F is safeguarded by
// bisection on the sign of the secular function itself.
double secular_root(std::span<const double> x, std::span<const double> w, std::size_t gap) {
    const double left = x[gap];
    const double right = x[gap + 1];
    const double width = right - left;
    const std::size_t k = x.size();

    auto secular = [&](double y) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += w[j] / (y - x[j]);
        return s;
    };

    const double mid = left + 0.5 * width;
    const bool from_left = secular(mid) < 0.0;  // root left of the midpoint
    const std::size_t o = from_left ? gap : gap + 1;
    const double origin = x[o];
    const double shrink = 1e-14 * width;
    double lo = from_left ? shrink : -0.5 * width;
    double hi = from_left ? 0.5 * width : -shrink;
    const double tol = 1e-12 * std::max({std::abs(left), std::abs(right), width});

    // offsets x_o - x_j are exact differences of the inputs
    auto eval = [&](double delta, double& f, double& df, double& g) {
        double rest = 0.0, drest = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == o) continue;
            const double inv = 1.0 / ((origin - x[j]) + delta);
            rest += w[j] * inv;
            drest -= w[j] * inv * inv;
        }
        f = w[o] + delta * rest;
        df = rest + delta * drest;
        g = w[o] / delta + rest;
    };

    double delta = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        double f, df, g;
        eval(delta, f, df, g);
        if (g > 0.0) {
            lo = delta;
        } else if (g < 0.0) {
            hi = delta;
        } else {
            return origin + delta;
        }
        double next = delta - f / df;
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        const double step = std::abs(next - delta);
        delta = next;
        if (step <= tol || hi - lo <= tol) return origin + delta;
    }
    throw InternalError("sample_corner_level: root search did not converge in gap " + std::to_string(gap));
}

}  // namespace

LevelSpectrum sample_corner_level(const LevelSpectrum& upper, double beta, RngStream& rng) {
    if (!(beta >= 1.0)) throw DomainError("sample_corner_level: beta must be >= 1");
    const auto& x = upper.values;
    const std::size_t k = x.size();
    if (k == 0) throw StructuralError("sample_corner_level: empty input level");
    for (std::size_t i = 1; i < k; ++i) {
        if (!(x[i - 1] < x[i])) {
            throw DomainError("sample_corner_level: input must be strictly increasing (index " + std::to_string(i + 1) +
                              ")");
        }
    }
    LevelSpectrum out;
    if (k == 1) return out;
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& wi : w) {
        wi = rng.gamma(beta / 2.0, 1.0);
        total += wi;
    }
    for (auto& wi : w) wi /= total;
    for (auto& wi : w) {
        // a gamma draw can underflow to zero for tiny shapes; keep the weights positive
        if (!(wi > 0.0)) wi = std::numeric_limits<double>::min();
    }
    out.values.resize(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        const double y = secular_root(x, w, i);
        if (!(x[i] < y && y < x[i + 1])) {
            throw InternalError("sample_corner_level: root escaped its gap " + std::to_string(i + 1));
        }
        out.values[i] = y;
    }
    return out;
}

std::vector<LevelSpectrum> sample_corner_levels(int n, double beta, double variance_t, int count, RngStream& rng) {
    if (count < 1 || count > n) {
        throw RangeError("sample_corner_levels: count must lie in 1..n");
    }
    if (!(beta >= 1.0)) throw DomainError("sample_corners_process: beta must be >= 1");
    std::vector<LevelSpectrum> levels;
    levels.reserve(static_cast<std::size_t>(count));
    levels.push_back(sample_beta_hermite(n, beta, variance_t, rng));
    for (int c = 1; c < count; ++c) levels.push_back(sample_corner_level(levels.back(), beta, rng));
    return levels;
}

GtArray sample_corners_process(int n, double beta, double variance_t, RngStream& rng) {
    auto levels = sample_corner_levels(n, beta, variance_t, n, rng);
    GtArray a(n);
    for (int k = 1; k <= n; ++k) {
        const auto& src = levels[static_cast<std::size_t>(n - k)].values;
        std::copy(src.begin(), src.end(), a.level(k).begin());
    }
    return a;
}

std::vector<LevelSpectrum> sample_dense_corner_levels(int n, int beta, int count, RngStream& rng, double variance_t) {
    if (beta != 1 && beta != 2 && beta != 4) {
        throw DomainError("sample_dense_corners: beta must be 1, 2 or 4, got " + std::to_string(beta));
    }
    if (n < 1) throw DomainError("sample_dense_corners: n must be >= 1");
    if (count < 1 || count > n) throw RangeError("sample_dense_corners: count must lie in 1..n");
    const double t = variance_t > 0.0 ? variance_t : 2.0 * n / beta;
    const double sd_diag = std::sqrt(t);
    const double sd_off = std::sqrt(t / 2.0);

    std::vector<LevelSpectrum> levels;
    levels.reserve(static_cast<std::size_t>(count));

    if (beta == 1) {
        Eigen::MatrixXd h(n, n);
        for (int i = 0; i < n; ++i) {
            h(i, i) = sd_diag * rng.normal();
            for (int j = i + 1; j < n; ++j) h(i, j) = h(j, i) = sd_off * rng.normal();
        }
        for (int c = 0; c < count; ++c) {
            const int m = n - c;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.topLeftCorner(m, m), Eigen::EigenvaluesOnly);
            const auto& ev = es.eigenvalues();
            levels.push_back(LevelSpectrum{std::vector<double>(ev.data(), ev.data() + m)});
        }
        return levels;
    }

    using cd = std::complex<double>;
    if (beta == 2) {
        Eigen::MatrixXcd h(n, n);
        for (int i = 0; i < n; ++i) {
            h(i, i) = cd(sd_diag * rng.normal(), 0.0);
            for (int j = i + 1; j < n; ++j) {
                const double re = sd_off * rng.normal();
                const double im = sd_off * rng.normal();
                h(i, j) = cd(re, im);
                h(j, i) = cd(re, -im);
            }
        }
        for (int c = 0; c < count; ++c) {
            const int m = n - c;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.topLeftCorner(m, m), Eigen::EigenvaluesOnly);
            const auto& ev = es.eigenvalues();
            levels.push_back(LevelSpectrum{std::vector<double>(ev.data(), ev.data() + m)});
        }
        return levels;
    }

    // quaternion a + b i + c j + d k as the 2x2 block [[a + b i, c + d i], [-c + d i, a - b i]]
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        const double a = sd_diag * rng.normal();
        h(2 * i, 2 * i) = a;
        h(2 * i + 1, 2 * i + 1) = a;
        for (int j = i + 1; j < n; ++j) {
            const double qa = sd_off * rng.normal();
            const double qb = sd_off * rng.normal();
            const double qc = sd_off * rng.normal();
            const double qd = sd_off * rng.normal();
            Eigen::Matrix2cd block;
            block << cd(qa, qb), cd(qc, qd), cd(-qc, qd), cd(qa, -qb);
            h.block<2, 2>(2 * i, 2 * j) = block;
            h.block<2, 2>(2 * j, 2 * i) = block.adjoint();
        }
    }
    for (int c = 0; c < count; ++c) {
        const int m = n - c;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.topLeftCorner(2 * m, 2 * m), Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        LevelSpectrum level;
        level.values.resize(static_cast<std::size_t>(m));
        // Kramers pairs: every eigenvalue appears twice
        for (int i = 0; i < m; ++i) level.values[i] = 0.5 * (ev[2 * i] + ev[2 * i + 1]);
        levels.push_back(std::move(level));
    }
    return levels;
}

GtArray sample_dense_corners(int n, int beta, RngStream& rng, double variance_t) {
    auto levels = sample_dense_corner_levels(n, beta, n, rng, variance_t);
    GtArray a(n);
    for (int k = 1; k <= n; ++k) {
        const auto& src = levels[static_cast<std::size_t>(n - k)].values;
        std::copy(src.begin(), src.end(), a.level(k).begin());
    }
    return a;
}

}  // namespace dyson_edge
