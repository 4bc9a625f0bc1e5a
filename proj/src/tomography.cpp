#include "tripart/tomography.hpp"

#include <cmath>
#include <string>

namespace tripart {

GridSpec GridSpec::checked(int nx, int ny, int nz, double hx, double hy, double hz) {
  if (nx <= 0 || ny <= 0 || nz <= 0) throw ContractError("grid sizes must be positive");
  if (!(hx > 0.0 && hy > 0.0 && hz > 0.0)) throw ContractError("grid spacings must be positive");
  GridSpec grid{nx, ny, nz, hx, hy, hz};
  if (grid.points() > kMaxTotalDim) {
    throw ContractError("grid has " + std::to_string(grid.points()) + " points, limit is " +
                        std::to_string(kMaxTotalDim));
  }
  return grid;
}

GridWavefunction::GridWavefunction(GridSpec grid, Vector values) : grid_(grid), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != grid_.points()) {
    throw ContractError("grid wavefunction has " + std::to_string(values_.size()) + " values for " +
                        std::to_string(grid_.points()) + " points");
  }
  const double norm_sq = values_.squaredNorm() * grid_.cell_volume();
  if (std::abs(norm_sq - 1.0) > 1e-9) {
    throw ContractError("grid wavefunction is not normalized (L2 norm^2 " + std::to_string(norm_sq) + ")");
  }
}

GridWavefunction GridWavefunction::normalized(GridSpec grid, Vector values) {
  const double norm_sq = values.squaredNorm() * grid.cell_volume();
  if (!(norm_sq > 0.0)) throw ContractError("cannot normalize a zero grid wavefunction");
  values /= std::sqrt(norm_sq);
  return GridWavefunction(grid, std::move(values));
}

DensityMatrix planar_density(const GridWavefunction& psi, Plane plane) {
  const GridSpec& g = psi.grid();
  // Reshape to (kept plane) x (integrated axis) and contract the integrated
  // axis with weight h.
  Matrix m;
  double weight = 0.0;
  std::vector<int> dims;
  PartySet parties;
  if (plane == Plane::kXY) {
    m.resize(static_cast<Eigen::Index>(g.nx) * g.ny, g.nz);
    for (int x = 0; x < g.nx; ++x) {
      for (int y = 0; y < g.ny; ++y) {
        for (int z = 0; z < g.nz; ++z) m(static_cast<Eigen::Index>(x) * g.ny + y, z) = psi(x, y, z);
      }
    }
    weight = g.hz;
    dims = {g.nx, g.ny};
    parties = PartySet::parse("AB");
  } else {
    m.resize(static_cast<Eigen::Index>(g.ny) * g.nz, g.nx);
    for (int x = 0; x < g.nx; ++x) {
      for (int y = 0; y < g.ny; ++y) {
        for (int z = 0; z < g.nz; ++z) m(static_cast<Eigen::Index>(y) * g.nz + z, x) = psi(x, y, z);
      }
    }
    weight = g.hx;
    dims = {g.ny, g.nz};
    parties = PartySet::parse("BC");
  }
  Matrix rho = weight * (m * m.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix::trusted(parties, std::move(dims), std::move(rho));
}

GridReconstruction reconstruct_grid(const DensityMatrix& rho_xy, const DensityMatrix& rho_yz, const GridSpec& grid,
                                    const ReconstructionConfig& config) {
  ReconstructionReport report = reconstruct_tripartite(rho_xy, rho_yz, grid.as_dims(), config);
  Vector values = report.state.amplitudes() / std::sqrt(grid.cell_volume());
  return GridReconstruction{GridWavefunction(grid, std::move(values)), std::move(report)};
}

double grid_fidelity(const GridWavefunction& a, const GridWavefunction& b) {
  const GridSpec& ga = a.grid();
  const GridSpec& gb = b.grid();
  if (ga.nx != gb.nx || ga.ny != gb.ny || ga.nz != gb.nz) throw ContractError("grid_fidelity: grid mismatch");
  return std::norm(a.values().dot(b.values()) * ga.cell_volume());
}

TomoProfile parse_profile(std::string_view name) {
  if (name == "separable") return TomoProfile::kSeparable;
  if (name == "correlated") return TomoProfile::kCorrelated;
  if (name == "symmetric") return TomoProfile::kSymmetric;
  throw ContractError("unknown tomography profile '" + std::string(name) + "'");
}

std::string_view profile_name(TomoProfile profile) {
  switch (profile) {
    case TomoProfile::kSeparable: return "separable";
    case TomoProfile::kCorrelated: return "correlated";
    case TomoProfile::kSymmetric: return "symmetric";
  }
  return "unknown";
}

namespace {

// Samples f on one axis and normalizes it to sum |f|^2 h = 1.
template <typename F>
Vector axis_function(int count, double spacing, F f) {
  Vector v(count);
  for (int n = 0; n < count; ++n) v[n] = f(GridSpec::coordinate(n, count, spacing));
  const double norm_sq = v.squaredNorm() * spacing;
  if (!(norm_sq > 0.0)) throw ContractError("axis function vanishes on the grid");
  return v / std::sqrt(norm_sq);
}

Vector outer3(const Vector& fx, const Vector& fy, const Vector& fz) {
  Vector out(fx.size() * fy.size() * fz.size());
  Eigen::Index n = 0;
  for (Eigen::Index x = 0; x < fx.size(); ++x) {
    for (Eigen::Index y = 0; y < fy.size(); ++y) {
      for (Eigen::Index z = 0; z < fz.size(); ++z) out[n++] = fx[x] * fy[y] * fz[z];
    }
  }
  return out;
}

}  // namespace

GridWavefunction make_profile(TomoProfile profile, const GridSpec& grid) {
  switch (profile) {
    case TomoProfile::kSeparable: {
      auto gauss = [](double centre, double width, double momentum) {
        return [=](double r) {
          const double u = (r - centre) / width;
          return std::polar(std::exp(-0.5 * u * u), momentum * r);
        };
      };
      return GridWavefunction::normalized(
          grid, outer3(axis_function(grid.nx, grid.hx, gauss(0.3, 1.0, 0.4)),
                       axis_function(grid.ny, grid.hy, gauss(-0.2, 0.8, 0.0)),
                       axis_function(grid.nz, grid.hz, gauss(0.1, 1.2, -0.7))));
    }
    case TomoProfile::kCorrelated: {
      // exp(-r^T Q r / 2 + i kappa x z) with Q coupling (x, y) to z.
      constexpr double q[3][3] = {{1.0, 0.25, 0.55}, {0.25, 1.3, -0.45}, {0.55, -0.45, 0.9}};
      constexpr double kappa = 0.6;
      Vector values(static_cast<Eigen::Index>(grid.points()));
      Eigen::Index n = 0;
      for (int ix = 0; ix < grid.nx; ++ix) {
        for (int iy = 0; iy < grid.ny; ++iy) {
          for (int iz = 0; iz < grid.nz; ++iz) {
            const double r[3] = {GridSpec::coordinate(ix, grid.nx, grid.hx),
                                 GridSpec::coordinate(iy, grid.ny, grid.hy),
                                 GridSpec::coordinate(iz, grid.nz, grid.hz)};
            double quad = 0.0;
            for (int a = 0; a < 3; ++a) {
              for (int b = 0; b < 3; ++b) quad += r[a] * q[a][b] * r[b];
            }
            values[n++] = std::polar(std::exp(-0.5 * quad), kappa * r[0] * r[2]);
          }
        }
      }
      return GridWavefunction::normalized(grid, std::move(values));
    }
    case TomoProfile::kSymmetric: {
      if (grid.nx < 2 || grid.ny < 2 || grid.nz < 2) {
        throw ContractError("symmetric profile needs at least two points per axis");
      }
      // Even and odd Gaussian modes, normalized per axis, so the two branches
      // are exactly orthogonal and carry identical weight.
      auto even = [](double r) { return Complex(std::exp(-0.5 * r * r)); };
      auto odd = [](double r) { return Complex(r * std::exp(-0.5 * r * r)); };
      const Vector ex = axis_function(grid.nx, grid.hx, even);
      const Vector ox = axis_function(grid.nx, grid.hx, odd);
      const Vector ey = axis_function(grid.ny, grid.hy, even);
      const Vector oy = axis_function(grid.ny, grid.hy, odd);
      const Vector ez = axis_function(grid.nz, grid.hz, even);
      const Vector oz = axis_function(grid.nz, grid.hz, odd);
      return GridWavefunction::normalized(grid, outer3(ex, ey, oz) + outer3(ox, oy, ez));
    }
  }
  throw ContractError("unknown tomography profile");
}

}  // namespace tripart
