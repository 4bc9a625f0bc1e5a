#include <gtest/gtest.h>

#include "tripart/tomography.hpp"

using namespace tripart;

namespace {

const GridSpec kGrid8 = GridSpec::checked(8, 8, 8, 0.8, 0.8, 0.8);

// rho_XY by a direct four-fold loop over (x, y, x', y') and z.
Matrix brute_planar_xy(const GridWavefunction& psi) {
  const GridSpec& g = psi.grid();
  Matrix rho = Matrix::Zero(g.nx * g.ny, g.nx * g.ny);
  for (int x = 0; x < g.nx; ++x)
    for (int y = 0; y < g.ny; ++y)
      for (int xp = 0; xp < g.nx; ++xp)
        for (int yp = 0; yp < g.ny; ++yp)
          for (int z = 0; z < g.nz; ++z) rho(x * g.ny + y, xp * g.ny + yp) += psi(x, y, z) * std::conj(psi(xp, yp, z)) * g.hz;
  return rho / rho.trace().real();
}

Matrix brute_planar_yz(const GridWavefunction& psi) {
  const GridSpec& g = psi.grid();
  Matrix rho = Matrix::Zero(g.ny * g.nz, g.ny * g.nz);
  for (int y = 0; y < g.ny; ++y)
    for (int z = 0; z < g.nz; ++z)
      for (int yp = 0; yp < g.ny; ++yp)
        for (int zp = 0; zp < g.nz; ++zp)
          for (int x = 0; x < g.nx; ++x) rho(y * g.nz + z, yp * g.nz + zp) += psi(x, y, z) * std::conj(psi(x, yp, zp)) * g.hx;
  return rho / rho.trace().real();
}

}  // namespace

TEST(tomography, grid_limits) {
  EXPECT_THROW(GridSpec::checked(16, 16, 17, 1, 1, 1), ContractError);
  EXPECT_THROW(GridSpec::checked(0, 4, 4, 1, 1, 1), ContractError);
  EXPECT_THROW(GridSpec::checked(4, 4, 4, 0.0, 1, 1), ContractError);
  EXPECT_NO_THROW(GridSpec::checked(16, 16, 16, 1, 1, 1));
}

TEST(tomography, wavefunction_normalization) {
  const GridSpec g = GridSpec::checked(2, 2, 2, 0.5, 0.5, 0.5);
  // sum |psi|^2 h^3 = 8 * 0.125 = 1
  EXPECT_NO_THROW(GridWavefunction(g, Vector::Ones(8)));
  EXPECT_THROW(GridWavefunction(GridSpec::checked(2, 2, 2, 1, 1, 1), Vector::Ones(8)), ContractError);
  EXPECT_THROW(GridWavefunction(g, Vector::Ones(7)), ContractError);
}

TEST(tomography, separable_planar_density_is_rank_one) {
  const GridWavefunction psi = make_profile(TomoProfile::kSeparable, kGrid8);
  const DensityMatrix rho = planar_density(psi, Plane::kXY);
  EXPECT_NEAR(purity(rho), 1.0, 1e-12);
  EXPECT_EQ(eig_hermitian(rho).rank(), 1);
}

TEST(tomography, planar_density_trace_and_validity) {
  for (TomoProfile p : {TomoProfile::kSeparable, TomoProfile::kCorrelated, TomoProfile::kSymmetric}) {
    const GridWavefunction psi = make_profile(p, kGrid8);
    for (Plane plane : {Plane::kXY, Plane::kYZ}) {
      const DensityMatrix rho = planar_density(psi, plane);
      EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-10);
      // Passing through the validating constructor checks every invariant.
      EXPECT_NO_THROW(DensityMatrix(rho.subsystems(), rho.dims(), rho.matrix()));
    }
  }
}

TEST(tomography, planar_density_matches_brute_force) {
  const GridWavefunction psi = make_profile(TomoProfile::kCorrelated, kGrid8);
  EXPECT_LE((planar_density(psi, Plane::kXY).matrix() - brute_planar_xy(psi)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((planar_density(psi, Plane::kYZ).matrix() - brute_planar_yz(psi)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(tomography, planar_density_is_a_partial_trace) {
  const GridSpec g = GridSpec::checked(3, 4, 5, 0.3, 0.4, 0.5);
  const GridWavefunction psi = make_profile(TomoProfile::kCorrelated, g);
  const PureState as_state(g.as_dims(), psi.values() * std::sqrt(g.cell_volume()));
  EXPECT_LE((planar_density(psi, Plane::kXY).matrix() - partial_trace(as_state, PartySet::parse("AB")).matrix())
                .cwiseAbs()
                .maxCoeff(),
            1e-13);
}

namespace {

GridReconstruction round_trip(const GridWavefunction& psi) {
  return reconstruct_grid(planar_density(psi, Plane::kXY), planar_density(psi, Plane::kYZ), psi.grid());
}

}  // namespace

TEST(tomography, separable_round_trip) {
  const GridWavefunction psi = make_profile(TomoProfile::kSeparable, kGrid8);
  EXPECT_GE(grid_fidelity(round_trip(psi).wavefunction, psi), 1.0 - 1e-10);
}

TEST(tomography, correlated_round_trip) {
  const GridWavefunction psi = make_profile(TomoProfile::kCorrelated, kGrid8);
  const GridReconstruction out = round_trip(psi);
  EXPECT_GE(grid_fidelity(out.wavefunction, psi), 1.0 - 1e-6);
  EXPECT_GT(out.report.rank_a, 1);  // actually entangled
}

TEST(tomography, correlated_round_trip_smaller_grids) {
  for (const GridSpec& g : {GridSpec::checked(4, 5, 6, 0.8, 0.8, 0.8), GridSpec::checked(6, 6, 6, 1.0, 1.0, 1.0)}) {
    const GridWavefunction psi = make_profile(TomoProfile::kCorrelated, g);
    EXPECT_GE(grid_fidelity(round_trip(psi).wavefunction, psi), 1.0 - 1e-6);
  }
}

TEST(tomography, symmetric_profile_is_degenerate) {
  const GridWavefunction psi = make_profile(TomoProfile::kSymmetric, kGrid8);
  EXPECT_THROW(round_trip(psi), GenericityViolation);
  EXPECT_THROW(make_profile(TomoProfile::kSymmetric, GridSpec::checked(1, 4, 4, 1, 1, 1)), ContractError);
}

TEST(tomography, profile_names) {
  for (TomoProfile p : {TomoProfile::kSeparable, TomoProfile::kCorrelated, TomoProfile::kSymmetric}) {
    EXPECT_EQ(parse_profile(profile_name(p)), p);
  }
  EXPECT_THROW(parse_profile("gaussian"), ContractError);
}
