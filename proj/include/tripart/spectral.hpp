#pragma once

#include <vector>

#include "tripart/core.hpp"

namespace tripart {

inline constexpr double kDefaultRankThreshold = 1e-10;
inline constexpr double kDefaultGapTol = 1e-8;
inline constexpr double kDefaultPairTol = 1e-8;

// Nonzero part of a Hermitian eigendecomposition, eigenvalues descending.
// Eigenvector phases are whatever the eigensolver returned.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;  // one column per retained eigenvalue
  Eigen::Index original_dim = 0;
  // Frobenius norm of the discarded part, ||rho - V diag(p) V^dagger||_F.
  double truncation_error = 0.0;

  Eigen::Index rank() const { return eigenvalues.size(); }
  Matrix reconstruct() const;
};

// Diagonalizes and drops eigenvalues <= rank_threshold together with their
// eigenvectors. Throws NumericalError if the eigensolver does not converge.
SpectralDecomposition eig_hermitian(const Matrix& hermitian, double rank_threshold = kDefaultRankThreshold);
SpectralDecomposition eig_hermitian(const DensityMatrix& rho, double rank_threshold = kDefaultRankThreshold);

// Runs of retained eigenvalues whose consecutive gaps are below gap_tol.
// Each cluster lists eigen-indices in ascending order; empty result means
// the spectrum is nondegenerate.
using EigenCluster = std::vector<Eigen::Index>;
std::vector<EigenCluster> detect_degeneracy(const SpectralDecomposition& spec, double gap_tol = kDefaultGapTol);

// Smallest gap between consecutive retained eigenvalues, infinity for rank
// below two.
double min_spectral_gap(const SpectralDecomposition& spec);

struct SpectrumPairing {
  // permutation[i] is the eigen-index on the second spectrum carrying the
  // eigenvalue of eigen-index i on the first.
  std::vector<Eigen::Index> permutation;
  double max_pair_gap = 0.0;
};

// Pairs the nonzero spectra of complementary marginals of a pure state.
// Throws GenericityViolation if either spectrum is degenerate at pair_tol
// scale and SpectrumMismatch if ranks differ or a matched pair differs by
// more than pair_tol.
SpectrumPairing match_spectra(const SpectralDecomposition& first, const SpectralDecomposition& second,
                              double pair_tol = kDefaultPairTol);

}  // namespace tripart
