#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tripart/harness.hpp"
#include "tripart/spectral.hpp"

using namespace tripart;

namespace {

SpectralDecomposition diag_spectrum(std::vector<double> values) {
  SpectralDecomposition spec;
  spec.eigenvalues = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  spec.eigenvectors = Matrix::Identity(spec.eigenvalues.size(), spec.eigenvalues.size());
  spec.original_dim = spec.eigenvalues.size();
  return spec;
}

double orthonormality_defect(const Matrix& v) {
  return max_abs_entry(v.adjoint() * v - Matrix::Identity(v.cols(), v.cols()));
}

}  // namespace

TEST(spectral, isotropic) {
  const auto spec = eig_hermitian(Matrix::Identity(2, 2) * 0.5);
  ASSERT_EQ(spec.rank(), 2);
  EXPECT_NEAR(spec.eigenvalues[0], 0.5, 1e-15);
  EXPECT_NEAR(spec.eigenvalues[1], 0.5, 1e-15);
}

TEST(spectral, w_state_marginal) {
  const DensityMatrix rho_a = partial_trace(oracle::w_state(), PartySet::parse("A"));
  const auto spec = eig_hermitian(rho_a);
  ASSERT_EQ(spec.rank(), 2);
  EXPECT_NEAR(spec.eigenvalues[0], 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(spec.eigenvalues[1], 1.0 / 3.0, 1e-14);
}

TEST(spectral, truncates_null_space) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 0.7;
  m(1, 1) = 0.3;
  const auto spec = eig_hermitian(m, 1e-12);
  ASSERT_EQ(spec.rank(), 2);
  EXPECT_EQ(spec.original_dim, 3);
  EXPECT_NEAR(spec.eigenvalues[0], 0.7, 1e-15);
  EXPECT_NEAR(spec.eigenvalues[1], 0.3, 1e-15);
  EXPECT_EQ(spec.eigenvectors.rows(), 3);
  EXPECT_EQ(spec.eigenvectors.cols(), 2);
}

TEST(spectral, rank_threshold_contract) {
  EXPECT_THROW(eig_hermitian(Matrix::Identity(2, 2) * 0.5, 0.0), ContractError);
  EXPECT_THROW(eig_hermitian(Matrix::Identity(2, 2) * 0.5, 1.0), ContractError);
}

TEST(spectral, detect_degeneracy_examples) {
  const auto ghz = detect_degeneracy(diag_spectrum({0.5, 0.5}), 1e-8);
  ASSERT_EQ(ghz.size(), 1u);
  EXPECT_EQ(ghz[0], (EigenCluster{0, 1}));

  EXPECT_TRUE(detect_degeneracy(diag_spectrum({2.0 / 3.0, 1.0 / 3.0}), 1e-8).empty());

  const auto near = detect_degeneracy(diag_spectrum({0.4, 0.4 - 5e-9, 0.2}), 1e-8);
  ASSERT_EQ(near.size(), 1u);
  EXPECT_EQ(near[0], (EigenCluster{0, 1}));
}

TEST(spectral, detect_degeneracy_separate_clusters) {
  const auto clusters = detect_degeneracy(diag_spectrum({0.3, 0.3, 0.2, 0.1, 0.1}), 1e-8);
  ASSERT_EQ(clusters.size(), 2u);
  EXPECT_EQ(clusters[0], (EigenCluster{0, 1}));
  EXPECT_EQ(clusters[1], (EigenCluster{3, 4}));
}

TEST(spectral, match_spectra_w_state) {
  const PureState w = oracle::w_state();
  const auto spec_a = eig_hermitian(partial_trace(w, PartySet::parse("A")));
  const auto spec_bc = eig_hermitian(partial_trace(w, PartySet::parse("BC")));
  const SpectrumPairing pairing = match_spectra(spec_a, spec_bc, 1e-8);
  EXPECT_EQ(pairing.permutation, (std::vector<Eigen::Index>{0, 1}));
  EXPECT_LE(pairing.max_pair_gap, 1e-10);
}

TEST(spectral, match_spectra_independent_states_mismatch) {
  int mismatches = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto spec_a = eig_hermitian(partial_trace(sample_haar_state(Dims{2, 2, 2}, seed), PartySet::parse("A")));
    const auto spec_bc =
        eig_hermitian(partial_trace(sample_haar_state(Dims{2, 2, 2}, seed + 500), PartySet::parse("BC")));
    try {
      match_spectra(spec_a, spec_bc, 1e-8);
    } catch (const SpectrumMismatch&) {
      ++mismatches;
    }
  }
  EXPECT_EQ(mismatches, 20);
}

TEST(spectral, match_spectra_rank_mismatch) {
  EXPECT_THROW(match_spectra(diag_spectrum({0.6, 0.4}), diag_spectrum({1.0}), 1e-8), SpectrumMismatch);
}

TEST(spectral, match_spectra_ghz_is_degenerate) {
  const PureState g = oracle::ghz();
  const auto spec_a = eig_hermitian(partial_trace(g, PartySet::parse("A")));
  const auto spec_bc = eig_hermitian(partial_trace(g, PartySet::parse("BC")));
  EXPECT_THROW(match_spectra(spec_a, spec_bc, 1e-8), GenericityViolation);
}

TEST(spectral, properties_over_random_states) {
  const Dims shapes[] = {{2, 2, 2}, {2, 3, 4}, {3, 3, 3}, {4, 4, 4}};
  std::uint64_t seed = 7000;
  for (const Dims& dims : shapes) {
    for (int rep = 0; rep < 10; ++rep) {
      const PureState psi = sample_haar_state(dims, seed++);
      const DensityMatrix rho_a = partial_trace(psi, PartySet::parse("A"));
      const auto spec_a = eig_hermitian(rho_a);
      const auto spec_bc = eig_hermitian(partial_trace(psi, PartySet::parse("BC")));

      // Complementary spectra agree.
      ASSERT_EQ(spec_a.rank(), spec_bc.rank());
      EXPECT_LE((spec_a.eigenvalues - spec_bc.eigenvalues).cwiseAbs().maxCoeff(), 1e-10);

      EXPECT_LE(orthonormality_defect(spec_bc.eigenvectors), 1e-10);
      EXPECT_LE((rho_a.matrix() - spec_a.reconstruct()).norm(), 1e-10);
      EXPECT_LE(spec_bc.truncation_error, 1e-8);
      EXPECT_NEAR(spec_bc.eigenvalues.sum(), 1.0, 1e-8);
      for (Eigen::Index n = 1; n < spec_a.rank(); ++n) EXPECT_GT(spec_a.eigenvalues[n - 1], spec_a.eigenvalues[n]);

      // Re-decomposing V diag(p) V^dagger returns the same spectrum and,
      // up to phase, the same eigenvectors.
      const auto again = eig_hermitian(spec_a.reconstruct());
      ASSERT_EQ(again.rank(), spec_a.rank());
      EXPECT_LE((again.eigenvalues - spec_a.eigenvalues).cwiseAbs().maxCoeff(), 1e-10);
      for (Eigen::Index n = 0; n < spec_a.rank(); ++n) {
        EXPECT_GE(std::abs(again.eigenvectors.col(n).dot(spec_a.eigenvectors.col(n))), 1.0 - 1e-9);
      }
    }
  }
}
