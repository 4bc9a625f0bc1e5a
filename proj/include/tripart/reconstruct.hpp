#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tripart/core.hpp"
#include "tripart/spectral.hpp"

namespace tripart {

// Overlaps of the bipartite eigenvectors with products of single-party
// eigenvectors:
//   A(i, j, k) = <j|<k| i;BC>,   C(k, i, j) = <i|<j| k;AB>
// with i, j, k running over the retained eigenvectors of rho_A, rho_B, rho_C.
class CoefficientTensors {
 public:
  CoefficientTensors(Eigen::Index rank_a, Eigen::Index rank_b, Eigen::Index rank_c);

  Eigen::Index rank_a() const { return rank_a_; }
  Eigen::Index rank_b() const { return rank_b_; }
  Eigen::Index rank_c() const { return rank_c_; }

  Complex& a(Eigen::Index i, Eigen::Index j, Eigen::Index k) { return a_[a_offset(i, j, k)]; }
  Complex a(Eigen::Index i, Eigen::Index j, Eigen::Index k) const { return a_[a_offset(i, j, k)]; }
  Complex& c(Eigen::Index k, Eigen::Index i, Eigen::Index j) { return c_[c_offset(k, i, j)]; }
  Complex c(Eigen::Index k, Eigen::Index i, Eigen::Index j) const { return c_[c_offset(k, i, j)]; }

  // 1 - sum_jk |A(i,j,k)|^2, maximized over i; likewise for C over k.
  double max_normalization_deficit() const;

 private:
  std::size_t a_offset(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    return static_cast<std::size_t>((i * rank_b_ + j) * rank_c_ + k);
  }
  std::size_t c_offset(Eigen::Index k, Eigen::Index i, Eigen::Index j) const {
    return static_cast<std::size_t>((k * rank_a_ + i) * rank_b_ + j);
  }

  Eigen::Index rank_a_;
  Eigen::Index rank_b_;
  Eigen::Index rank_c_;
  std::vector<Complex> a_;
  std::vector<Complex> c_;
};

inline constexpr double kExpansionLeakageTol = 1e-6;

// Eigen-index i of spec_bc must be paired with eigen-index i of spec_a, and
// eigen-index k of spec_ab with k of spec_c (see match_spectra). The same
// rho_B basis is used for both tensors. Throws ExpansionLeakage when a
// bipartite eigenvector is not spanned by the retained product basis.
CoefficientTensors coefficient_tensors(const SpectralDecomposition& spec_a, const SpectralDecomposition& spec_b,
                                       const SpectralDecomposition& spec_c, const SpectralDecomposition& spec_ab,
                                       const SpectralDecomposition& spec_bc, const Dims& dims);

// S(i, k) = sum_j conj(A(i,j,k)) C(k,i,j). For a compatible pair of phase
// families arg S(i, k) = alpha_i - gamma_k.
Matrix phase_edges(const CoefficientTensors& coeffs);

enum class TreeStrategy {
  kMaxWeight,     // Prim's algorithm on |S|, heaviest edges first
  kBreadthFirst,  // plain BFS in index order
  kDepthFirst,    // plain DFS in index order
};

struct PhaseSolution {
  Eigen::VectorXd alpha;            // one per retained eigenvalue of rho_A, radians
  Eigen::VectorXd gamma;            // one per retained eigenvalue of rho_C, radians
  Eigen::MatrixXd edge_magnitudes;  // |S(i, k)|
  double cycle_residual = 0.0;      // max wrapped violation over all edges
  Eigen::Index root = 0;            // gamma_root is pinned to zero
  std::vector<std::pair<Eigen::Index, Eigen::Index>> tree_edges;  // (i, k)
};

// Solves alpha_i - gamma_k = arg S(i, k) over the bipartite graph whose
// edges are the entries with |S(i, k)| > edge_tol * max|S|. Phases are
// assigned along a spanning tree rooted at gamma_root = 0; every other edge
// is then checked.
//
// Throws PhaseGraphDisconnected if some phase is unreachable and
// PhaseInconsistency if a non-tree edge is violated by more than phase_tol.
PhaseSolution solve_phases(const Matrix& edges, double edge_tol, double phase_tol,
                           TreeStrategy strategy = TreeStrategy::kMaxWeight,
                           std::optional<Eigen::Index> root = std::nullopt);

// Wraps an angle into (-pi, pi].
double wrap_phase(double angle);

// Rotates the largest-modulus amplitude (lowest flat index among ties) onto
// the positive real axis.
Vector canonicalize_global_phase(Vector amplitudes);

// sum_i exp(i alpha_i) sqrt(p_i) |i> (x) |i;BC>, renormalized and
// canonicalized.
PureState assemble_state(const SpectrumPairing& pairing, const SpectralDecomposition& spec_a,
                         const SpectralDecomposition& spec_bc, const Eigen::VectorXd& alpha, const Dims& dims);

// max over (i,j,k) of
//   |exp(i alpha_i) sqrt(p_A^i) A(i,j,k) - exp(i gamma_k) sqrt(p_C^k) C(k,i,j)|
double eq8_residual(const CoefficientTensors& coeffs, const PhaseSolution& phases,
                    const SpectralDecomposition& spec_a, const SpectralDecomposition& spec_c);

struct ReconstructionConfig {
  double rank_threshold = kDefaultRankThreshold;
  double gap_tol = kDefaultGapTol;
  double pair_tol = kDefaultPairTol;
  double edge_tol = 1e-7;  // relative to max|S|
  double phase_tol = 1e-6;
  double marginal_tol = 1e-8;

  // Throws ContractError unless every field is strictly positive and
  // rank_threshold < 1.
  void validate() const;
};

// Everything the pipeline derives from the two inputs before the phase
// solve.
struct MarginalAnalysis {
  Dims dims;
  DensityMatrix rho_ab;
  DensityMatrix rho_bc;
  SpectralDecomposition spec_a;
  SpectralDecomposition spec_b;
  SpectralDecomposition spec_c;
  SpectralDecomposition spec_ab;
  SpectralDecomposition spec_bc;
  SpectrumPairing pairing_a;  // rho_A <-> rho_BC
  SpectrumPairing pairing_c;  // rho_C <-> rho_AB
  CoefficientTensors coeffs;
  Matrix edges;
  double b_marginal_gap = 0.0;  // ||rho_B from AB - rho_B from BC||_F
  std::vector<std::string> genericity_flags;
};

MarginalAnalysis analyze_marginals(const DensityMatrix& rho_ab, const DensityMatrix& rho_bc, const Dims& dims,
                                   const ReconstructionConfig& config);

struct ReconstructionReport {
  PureState state;
  double marginal_residual_ab = 0.0;
  double marginal_residual_bc = 0.0;
  double eq8_residual = 0.0;
  double cycle_residual = 0.0;
  double max_pair_gap = 0.0;
  double b_marginal_gap = 0.0;
  double min_spectral_gap = 0.0;  // over rho_A and rho_C
  Eigen::Index rank_a = 0;
  Eigen::Index rank_b = 0;
  Eigen::Index rank_c = 0;
  std::vector<std::string> genericity_flags;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
};

// Full pipeline: single-party marginals, five diagonalizations, spectrum
// pairing, coefficient tensors, phase solve, assembly, residual checks.
//
// Throws MarginalInconsistency (rho_B disagreement, or the result does not
// reproduce the inputs), GenericityViolation, SpectrumMismatch,
// ExpansionLeakage, PhaseGraphDisconnected or PhaseInconsistency.
ReconstructionReport reconstruct_tripartite(const DensityMatrix& rho_ab, const DensityMatrix& rho_bc,
                                            const Dims& dims, const ReconstructionConfig& config = {});

}  // namespace tripart
