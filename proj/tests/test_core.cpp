#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tripart/core.hpp"
#include "tripart/harness.hpp"

using namespace tripart;

namespace {

const PartySet kA = PartySet::parse("A");
const PartySet kB = PartySet::parse("B");
const PartySet kAB = PartySet::parse("AB");
const PartySet kBC = PartySet::parse("BC");

}  // namespace

TEST(core, flat_index) {
  EXPECT_EQ(flat_index(0, 0, 0, Dims{2, 2, 2}), 0u);
  EXPECT_EQ(flat_index(1, 1, 1, Dims{2, 2, 2}), 7u);
  EXPECT_EQ(flat_index(1, 0, 2, Dims{2, 3, 4}), 14u);
}

TEST(core, flat_index_is_bijective) {
  const Dims dims{3, 2, 5};
  std::vector<int> hits(dims.total(), 0);
  for (int i = 0; i < dims.a; ++i)
    for (int j = 0; j < dims.b; ++j)
      for (int k = 0; k < dims.c; ++k) ++hits[flat_index(i, j, k, dims)];
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(core, flat_index_out_of_range) {
  EXPECT_THROW(flat_index(2, 0, 0, Dims{2, 2, 2}), IndexError);
  EXPECT_THROW(flat_index(0, -1, 0, Dims{2, 2, 2}), IndexError);
  EXPECT_THROW(flat_index(0, 0, 4, Dims{2, 3, 4}), IndexError);
}

TEST(core, dims_checked) {
  EXPECT_THROW(Dims::checked(0, 2, 2), ContractError);
  EXPECT_THROW(Dims::checked(2, -1, 2), ContractError);
  EXPECT_THROW(Dims::checked(64, 64, 2), ContractError);
  EXPECT_EQ(Dims::checked(16, 16, 16).total(), 4096u);
}

TEST(core, party_set_parse) {
  EXPECT_EQ(PartySet::parse("CA").to_string(), "AC");
  EXPECT_EQ(PartySet::parse("ABC"), PartySet::all());
  EXPECT_THROW(PartySet::parse("AD"), ContractError);
  EXPECT_THROW(PartySet::parse("AA"), ContractError);
}

TEST(core, pure_state_rejects_unnormalized) {
  Vector v = Vector::Ones(8);
  EXPECT_THROW(PureState(Dims{2, 2, 2}, v), ContractError);
  EXPECT_THROW(PureState(Dims{2, 2, 2}, Vector::Ones(7)), ContractError);
  EXPECT_NO_THROW(PureState::normalized(Dims{2, 2, 2}, v));
  EXPECT_THROW(PureState::normalized(Dims{2, 2, 2}, Vector::Zero(8)), ContractError);
}

TEST(core, density_matrix_validation) {
  Matrix m = Matrix::Identity(2, 2) * 0.5;
  EXPECT_NO_THROW(DensityMatrix(kA, {2}, m));

  Matrix non_herm = m;
  non_herm(0, 1) = Complex(0.0, 1e-6);
  EXPECT_THROW(DensityMatrix(kA, {2}, non_herm), ContractError);

  EXPECT_THROW(DensityMatrix(kA, {2}, Matrix::Identity(2, 2)), ContractError);  // trace 2

  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix(kA, {2}, negative), ContractError);

  EXPECT_THROW(DensityMatrix(kAB, {2}, m), ContractError);  // dims count
  EXPECT_THROW(DensityMatrix(kAB, {2, 2}, m), ContractError);  // shape
}

TEST(core, density_matrix_symmetrizes_small_asymmetry) {
  Matrix m = Matrix::Identity(2, 2) * 0.5;
  m(0, 1) = Complex(1e-12, 0.0);
  const DensityMatrix rho(kA, {2}, m);
  EXPECT_EQ(rho.matrix()(0, 1), rho.matrix()(1, 0));
  EXPECT_DOUBLE_EQ(rho.matrix()(0, 1).real(), 5e-13);
}

TEST(core, partial_trace_product_state) {
  const PureState psi = oracle::basis_state(Dims{2, 2, 2}, 0, 0, 0);
  const DensityMatrix rho = partial_trace(psi, kAB);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  EXPECT_EQ(rho.subsystems(), kAB);
  EXPECT_EQ(rho.dims(), (std::vector<int>{2, 2}));
  EXPECT_LT(oracle::max_abs_diff(rho.matrix(), expected), 1e-15);
}

TEST(core, partial_trace_two_branch) {
  Vector v = Vector::Zero(8);
  v[flat_index(0, 0, 0, Dims{2, 2, 2})] = 1.0 / std::sqrt(2.0);
  v[flat_index(1, 1, 0, Dims{2, 2, 2})] = 1.0 / std::sqrt(2.0);
  const PureState psi(Dims{2, 2, 2}, v);
  const DensityMatrix rho = partial_trace(psi, kBC);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 0.5;  // |00>
  expected(2, 2) = 0.5;  // |10>
  EXPECT_LT(oracle::max_abs_diff(rho.matrix(), expected), 1e-15);
}

TEST(core, partial_trace_matches_brute_force) {
  const PureState psi = sample_haar_state(Dims{3, 3, 3}, 11);
  const struct {
    const char* keep;
    bool a, b, c;
  } cases[] = {{"AB", true, true, false}, {"BC", false, true, true}, {"AC", true, false, true},
               {"A", true, false, false}, {"B", false, true, false}, {"C", false, false, true}};
  for (const auto& tc : cases) {
    const Matrix fast = partial_trace(psi, PartySet::parse(tc.keep)).matrix();
    const Matrix slow = oracle::partial_trace(psi, tc.a, tc.b, tc.c);
    EXPECT_LT(oracle::max_abs_diff(fast, slow), 1e-14) << tc.keep;
  }
}

TEST(core, partial_trace_contract) {
  const PureState psi = oracle::ghz();
  EXPECT_THROW(partial_trace(psi, PartySet{}), ContractError);
  EXPECT_THROW(partial_trace(psi, PartySet::all()), ContractError);
  const DensityMatrix rho = partial_trace(psi, kAB);
  EXPECT_THROW(partial_trace(rho, kAB), ContractError);
  EXPECT_THROW(partial_trace(rho, PartySet::parse("C")), ContractError);
}

TEST(core, fidelity_examples) {
  const PureState psi = sample_haar_state(Dims{2, 3, 2}, 5);
  EXPECT_NEAR(fidelity(psi, psi), 1.0, 1e-14);
  EXPECT_NEAR(fidelity(oracle::basis_state(Dims{2, 2, 2}, 0, 0, 0), oracle::basis_state(Dims{2, 2, 2}, 1, 0, 0)),
              0.0, 1e-15);
  const PureState rotated(psi.dims(), psi.amplitudes() * std::polar(1.0, 0.37));
  EXPECT_NEAR(fidelity(psi, rotated), 1.0, 1e-14);
  EXPECT_THROW(fidelity(psi, oracle::ghz()), ContractError);
}

TEST(core, purity_examples) {
  EXPECT_NEAR(purity(partial_trace(oracle::basis_state(Dims{2, 2, 2}, 0, 0, 0), kAB)), 1.0, 1e-15);
  EXPECT_NEAR(purity(DensityMatrix(kAB, {2, 2}, Matrix::Identity(4, 4) * 0.25)), 0.25, 1e-15);
  EXPECT_NEAR(purity(partial_trace(oracle::ghz(), kBC)), 0.5, 1e-15);
}

// Property checks over a spread of Haar samples and shapes.
TEST(core, properties_over_random_states) {
  const Dims shapes[] = {{2, 2, 2}, {2, 3, 4}, {3, 3, 3}, {4, 2, 3}, {1, 3, 2}};
  std::uint64_t seed = 100;
  for (const Dims& dims : shapes) {
    for (int rep = 0; rep < 8; ++rep) {
      const PureState psi = sample_haar_state(dims, seed++);
      for (const char* keep : {"A", "B", "C", "AB", "BC", "AC"}) {
        EXPECT_NEAR(partial_trace(psi, PartySet::parse(keep)).matrix().trace().real(), 1.0, kTraceTol);
      }
      // Nested traces agree with direct ones.
      const DensityMatrix rho_ab = partial_trace(psi, kAB);
      EXPECT_LT(oracle::max_abs_diff(partial_trace(rho_ab, kA).matrix(), partial_trace(psi, kA).matrix()), 1e-12);
      EXPECT_LT(oracle::max_abs_diff(partial_trace(rho_ab, kB).matrix(), partial_trace(psi, kB).matrix()), 1e-12);
      // Complementary marginals of a pure state share purity.
      EXPECT_NEAR(purity(partial_trace(psi, kA)), purity(partial_trace(psi, kBC)), 1e-10);
      // Fidelity is symmetric.
      const PureState other = sample_haar_state(dims, seed + 1000);
      EXPECT_DOUBLE_EQ(fidelity(psi, other), fidelity(other, psi));
    }
  }
}
