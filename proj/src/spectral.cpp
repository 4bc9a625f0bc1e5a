#include "tripart/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tripart {

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition eig_hermitian(const Matrix& hermitian, double rank_threshold) {
  if (!(rank_threshold > 0.0 && rank_threshold < 1.0)) {
    throw ContractError("rank_threshold must lie in (0, 1)");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");

  // Eigen returns ascending order; walk it backwards.
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();
  const Eigen::Index n = values.size();
  Eigen::Index rank = 0;
  for (Eigen::Index idx = n; idx-- > 0;) {
    if (values[idx] > rank_threshold) ++rank;
  }

  SpectralDecomposition out;
  out.original_dim = n;
  out.eigenvalues.resize(rank);
  out.eigenvectors.resize(n, rank);
  double discarded_sq = 0.0;
  Eigen::Index kept = 0;
  for (Eigen::Index idx = n; idx-- > 0;) {
    if (values[idx] > rank_threshold) {
      out.eigenvalues[kept] = values[idx];
      out.eigenvectors.col(kept) = vectors.col(idx);
      ++kept;
    } else {
      discarded_sq += values[idx] * values[idx];
    }
  }
  out.truncation_error = std::sqrt(discarded_sq);
  return out;
}

SpectralDecomposition eig_hermitian(const DensityMatrix& rho, double rank_threshold) {
  return eig_hermitian(rho.matrix(), rank_threshold);
}

std::vector<EigenCluster> detect_degeneracy(const SpectralDecomposition& spec, double gap_tol) {
  std::vector<EigenCluster> clusters;
  EigenCluster current;
  for (Eigen::Index idx = 1; idx < spec.rank(); ++idx) {
    const double gap = std::abs(spec.eigenvalues[idx - 1] - spec.eigenvalues[idx]);
    if (gap < gap_tol) {
      if (current.empty()) current.push_back(idx - 1);
      current.push_back(idx);
    } else if (!current.empty()) {
      clusters.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) clusters.push_back(std::move(current));
  return clusters;
}

double min_spectral_gap(const SpectralDecomposition& spec) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index idx = 1; idx < spec.rank(); ++idx) {
    gap = std::min(gap, std::abs(spec.eigenvalues[idx - 1] - spec.eigenvalues[idx]));
  }
  return gap;
}

SpectrumPairing match_spectra(const SpectralDecomposition& first, const SpectralDecomposition& second,
                              double pair_tol) {
  if (!detect_degeneracy(first, pair_tol).empty() || !detect_degeneracy(second, pair_tol).empty()) {
    throw GenericityViolation("degenerate spectrum: eigenvector pairing is not unique");
  }
  if (first.rank() != second.rank()) {
    std::ostringstream os;
    os << "rank mismatch between complementary marginals: " << first.rank() << " vs " << second.rank();
    throw SpectrumMismatch(os.str());
  }
  SpectrumPairing pairing;
  pairing.permutation.resize(static_cast<std::size_t>(first.rank()));
  for (Eigen::Index idx = 0; idx < first.rank(); ++idx) {
    pairing.permutation[static_cast<std::size_t>(idx)] = idx;
    pairing.max_pair_gap =
        std::max(pairing.max_pair_gap, std::abs(first.eigenvalues[idx] - second.eigenvalues[idx]));
  }
  if (pairing.max_pair_gap > pair_tol) {
    std::ostringstream os;
    os << "complementary spectra differ by " << pairing.max_pair_gap << " (> " << pair_tol << ")";
    throw SpectrumMismatch(os.str());
  }
  return pairing;
}

}  // namespace tripart
