#pragma once

#include <span>
#include <vector>

#include "dyson_edge/rng.hpp"
#include "dyson_edge/types.hpp"

namespace dyson_edge {

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal (size n-1), by implicit-shift QL.
/// Throws NumericalError if an eigenvalue needs more than 60 sweeps.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diagonal, std::span<const double> off_diagonal);

/// Spectrum with density prop. to prod_{i<j} (x_j - x_i)^beta prod exp(-x_i^2 / (2 t)),
/// drawn from the tridiagonal model: N(0, t) diagonal and
/// sqrt(t/2) chi_{beta (n-i)} off-diagonal entries.
LevelSpectrum sample_beta_hermite(int n, double beta, double variance_t, RngStream& rng);

/// One level down in the corners process: given k strictly increasing points,
/// the k-1 interlacing points with density prop. to
/// prod_{i<j} (y_j - y_i) prod_{a,b} |y_a - x_b|^(beta/2 - 1).
///
/// Realized as the roots of sum_i w_i / (y - x_i) for Dirichlet(beta/2, ...)
/// weights w, one per gap.
LevelSpectrum sample_corner_level(const LevelSpectrum& upper, double beta, RngStream& rng);

/// Levels n, n-1, ..., n-count+1 of the corners process of variance t;
/// result[0] is the top level.
std::vector<LevelSpectrum> sample_corner_levels(int n, double beta, double variance_t, int count, RngStream& rng);

/// Full Hermite corners array of variance t.
GtArray sample_corners_process(int n, double beta, double variance_t, RngStream& rng);

/// Top `count` levels of the eigenvalues of the top-left corners of one dense
/// self-adjoint Gaussian matrix over the reals (beta 1), complex numbers
/// (beta 2) or quaternions (beta 4). Diagonal entries have variance t; every
/// real component of an off-diagonal entry has variance t/2. The default
/// t = 2n/beta gives diagonal variances 2n, n and n/2.
std::vector<LevelSpectrum> sample_dense_corner_levels(int n, int beta, int count, RngStream& rng, double variance_t = 0.0);

GtArray sample_dense_corners(int n, int beta, RngStream& rng, double variance_t = 0.0);

}  // namespace dyson_edge
