#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tripart/errors.hpp"

namespace tripart {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-10;
inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

// Largest total dimension d_A*d_B*d_C the dense pipeline accepts.
inline constexpr std::size_t kMaxTotalDim = 4096;

enum class Party : std::uint8_t { A = 0, B = 1, C = 2 };

char party_label(Party p);

// Subset of {A, B, C}. Iteration order is always A, B, C.
class PartySet {
 public:
  constexpr PartySet() = default;
  static PartySet parse(std::string_view labels);
  static constexpr PartySet all() { return PartySet(0b111); }
  static PartySet of(std::initializer_list<Party> parties);

  bool contains(Party p) const { return (bits_ >> static_cast<int>(p)) & 1U; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  bool is_subset_of(PartySet other) const { return (bits_ & ~other.bits_) == 0; }
  std::vector<Party> parties() const;
  std::string to_string() const;

  friend bool operator==(PartySet, PartySet) = default;

 private:
  constexpr explicit PartySet(std::uint8_t bits) : bits_(bits) {}
  std::uint8_t bits_ = 0;
};

struct Dims {
  int a = 1;
  int b = 1;
  int c = 1;

  // Throws ContractError unless all three are positive and the product
  // fits kMaxTotalDim.
  static Dims checked(int a, int b, int c);

  int of(Party p) const;
  std::size_t total() const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(b) * static_cast<std::size_t>(c);
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

// Row-major flattening over the index box: i slowest, k fastest.
std::size_t flat_index(int i, int j, int k, const Dims& dims);

class PureState {
 public:
  // Throws ContractError on a length mismatch or a norm off by more than
  // kNormTol.
  PureState(Dims dims, Vector amplitudes);

  // Normalizes first. Throws ContractError on a zero vector.
  static PureState normalized(Dims dims, Vector amplitudes);

  const Dims& dims() const { return dims_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator()(int i, int j, int k) const { return amplitudes_[flat_index(i, j, k, dims_)]; }

 private:
  Dims dims_;
  Vector amplitudes_;
};

class DensityMatrix {
 public:
  // Validates and symmetrizes: Hermitian within kHermTol (then replaced by
  // (M + M^dagger)/2), trace one within kTraceTol, smallest eigenvalue at
  // least -kPsdTol. `dims` lists one dimension per member of `subsystems`.
  DensityMatrix(PartySet subsystems, std::vector<int> dims, Matrix matrix);

  // For matrices that are valid by construction (partial traces of valid
  // states). Only symmetrizes.
  static DensityMatrix trusted(PartySet subsystems, std::vector<int> dims, Matrix matrix);

  PartySet subsystems() const { return subsystems_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim_of(Party p) const;
  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

 private:
  struct TrustedTag {};
  DensityMatrix(TrustedTag, PartySet subsystems, std::vector<int> dims, Matrix matrix);

  PartySet subsystems_;
  std::vector<int> dims_;
  Matrix matrix_;
};

// Reduced state over `keep`, which must be a nonempty proper subset of the
// input's subsystems.
DensityMatrix partial_trace(const PureState& state, PartySet keep);
DensityMatrix partial_trace(const DensityMatrix& rho, PartySet keep);

// |<psi1|psi2>|^2
double fidelity(const PureState& psi1, const PureState& psi2);

// Tr(rho^2)
double purity(const DensityMatrix& rho);

double max_abs_entry(const Matrix& m);
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace tripart
