#pragma once

#include <string_view>

#include "tripart/core.hpp"
#include "tripart/reconstruct.hpp"

namespace tripart {

struct GridSpec {
  int nx = 1;
  int ny = 1;
  int nz = 1;
  double hx = 1.0;
  double hy = 1.0;
  double hz = 1.0;

  // Throws ContractError for non-positive sizes or spacings, or more than
  // kMaxTotalDim points.
  static GridSpec checked(int nx, int ny, int nz, double hx, double hy, double hz);

  std::size_t points() const { return static_cast<std::size_t>(nx) * ny * nz; }
  double cell_volume() const { return hx * hy * hz; }
  Dims as_dims() const { return Dims{nx, ny, nz}; }

  // Coordinate of sample n on an axis of `count` points centred on zero.
  static double coordinate(int n, int count, double spacing) { return (n - 0.5 * (count - 1)) * spacing; }
};

// psi(x, y, z) sampled on a grid, x slowest and z fastest, with
// sum |psi|^2 hx hy hz = 1.
class GridWavefunction {
 public:
  // Throws ContractError on a length mismatch or a discrete norm off by more
  // than 1e-9.
  GridWavefunction(GridSpec grid, Vector values);
  static GridWavefunction normalized(GridSpec grid, Vector values);

  const GridSpec& grid() const { return grid_; }
  const Vector& values() const { return values_; }
  Complex operator()(int x, int y, int z) const {
    return values_[(static_cast<Eigen::Index>(x) * grid_.ny + y) * grid_.nz + z];
  }

 private:
  GridSpec grid_;
  Vector values_;
};

enum class Plane { kXY, kYZ };

// rho(xy; x'y') = sum_z psi(x,y,z) conj(psi(x',y',z)) hz, rescaled to unit
// trace. XY maps onto subsystems AB, YZ onto BC.
DensityMatrix planar_density(const GridWavefunction& psi, Plane plane);

struct GridReconstruction {
  GridWavefunction wavefunction;
  ReconstructionReport report;
};

// Treats the axes as parties (X -> A, Y -> B, Z -> C) and runs the
// tripartite pipeline.
GridReconstruction reconstruct_grid(const DensityMatrix& rho_xy, const DensityMatrix& rho_yz, const GridSpec& grid,
                                    const ReconstructionConfig& config = {});

// |sum conj(a) b hx hy hz|^2
double grid_fidelity(const GridWavefunction& a, const GridWavefunction& b);

enum class TomoProfile {
  kSeparable,   // product of three displaced Gaussians
  kCorrelated,  // Gaussian with xy-z correlations and a chirp phase
  kSymmetric,   // two branches of opposite z parity with equal weight
};

TomoProfile parse_profile(std::string_view name);
std::string_view profile_name(TomoProfile profile);

// Builds the named test wavefunction on a centred grid.
GridWavefunction make_profile(TomoProfile profile, const GridSpec& grid);

}  // namespace tripart
