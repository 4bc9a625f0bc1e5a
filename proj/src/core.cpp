#include "tripart/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <utility>

namespace tripart {

char party_label(Party p) { return static_cast<char>('A' + static_cast<int>(p)); }

PartySet PartySet::parse(std::string_view labels) {
  std::uint8_t bits = 0;
  for (char ch : labels) {
    if (ch < 'A' || ch > 'C') {
      throw ContractError("unknown subsystem label '" + std::string(1, ch) + "'");
    }
    const auto bit = static_cast<std::uint8_t>(1U << (ch - 'A'));
    if (bits & bit) throw ContractError("duplicate subsystem label '" + std::string(1, ch) + "'");
    bits |= bit;
  }
  return PartySet(bits);
}

PartySet PartySet::of(std::initializer_list<Party> parties) {
  std::uint8_t bits = 0;
  for (Party p : parties) bits |= static_cast<std::uint8_t>(1U << static_cast<int>(p));
  return PartySet(bits);
}

std::size_t PartySet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<Party> PartySet::parties() const {
  std::vector<Party> out;
  for (Party p : {Party::A, Party::B, Party::C}) {
    if (contains(p)) out.push_back(p);
  }
  return out;
}

std::string PartySet::to_string() const {
  std::string s;
  for (Party p : parties()) s.push_back(party_label(p));
  return s;
}

Dims Dims::checked(int a, int b, int c) {
  if (a <= 0 || b <= 0 || c <= 0) {
    std::ostringstream os;
    os << "dimensions must be positive, got (" << a << "," << b << "," << c << ")";
    throw ContractError(os.str());
  }
  Dims d{a, b, c};
  if (d.total() > kMaxTotalDim) {
    throw ContractError("total dimension " + std::to_string(d.total()) + " exceeds " +
                        std::to_string(kMaxTotalDim));
  }
  return d;
}

int Dims::of(Party p) const {
  switch (p) {
    case Party::A: return a;
    case Party::B: return b;
    case Party::C: return c;
  }
  return 0;
}

std::size_t flat_index(int i, int j, int k, const Dims& dims) {
  if (i < 0 || i >= dims.a || j < 0 || j >= dims.b || k < 0 || k >= dims.c) {
    std::ostringstream os;
    os << "index (" << i << "," << j << "," << k << ") outside (" << dims.a << "," << dims.b << ","
       << dims.c << ")";
    throw IndexError(os.str());
  }
  return (static_cast<std::size_t>(i) * static_cast<std::size_t>(dims.b) + static_cast<std::size_t>(j)) *
             static_cast<std::size_t>(dims.c) +
         static_cast<std::size_t>(k);
}

PureState::PureState(Dims dims, Vector amplitudes) : dims_(dims), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != dims_.total()) {
    throw ContractError("amplitude vector length " + std::to_string(amplitudes_.size()) +
                        " does not match total dimension " + std::to_string(dims_.total()));
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw ContractError("state is not normalized (norm " + std::to_string(norm) + ")");
  }
}

PureState PureState::normalized(Dims dims, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw ContractError("cannot normalize a zero vector");
  amplitudes /= norm;
  return PureState(dims, std::move(amplitudes));
}

namespace {

void check_dims_shape(PartySet subsystems, const std::vector<int>& dims, const Matrix& m) {
  if (subsystems.empty()) throw ContractError("density matrix needs at least one subsystem");
  if (dims.size() != subsystems.size()) {
    throw ContractError("expected " + std::to_string(subsystems.size()) + " dimensions for subsystems " +
                        subsystems.to_string());
  }
  Eigen::Index total = 1;
  for (int d : dims) {
    if (d <= 0) throw ContractError("subsystem dimensions must be positive");
    total *= d;
  }
  if (m.rows() != total || m.cols() != total) {
    throw ContractError("matrix shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                        " does not match product dimension " + std::to_string(total));
  }
}

}  // namespace

DensityMatrix::DensityMatrix(TrustedTag, PartySet subsystems, std::vector<int> dims, Matrix matrix)
    : subsystems_(subsystems), dims_(std::move(dims)), matrix_(std::move(matrix)) {
  check_dims_shape(subsystems_, dims_, matrix_);
  Matrix sym = (matrix_ + matrix_.adjoint()) * 0.5;
  matrix_ = std::move(sym);
}

DensityMatrix DensityMatrix::trusted(PartySet subsystems, std::vector<int> dims, Matrix matrix) {
  return DensityMatrix(TrustedTag{}, subsystems, std::move(dims), std::move(matrix));
}

DensityMatrix::DensityMatrix(PartySet subsystems, std::vector<int> dims, Matrix matrix)
    : subsystems_(subsystems), dims_(std::move(dims)), matrix_(std::move(matrix)) {
  check_dims_shape(subsystems_, dims_, matrix_);
  const double herm = max_abs_entry(matrix_ - matrix_.adjoint());
  if (herm > kHermTol) {
    throw ContractError("density matrix is not Hermitian (max |M - M^dagger| = " + std::to_string(herm) + ")");
  }
  Matrix sym = (matrix_ + matrix_.adjoint()) * 0.5;
  matrix_ = std::move(sym);
  const double trace = matrix_.trace().real();
  if (std::abs(trace - 1.0) > kTraceTol) {
    throw ContractError("density matrix trace is " + std::to_string(trace) + ", expected 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed during PSD check");
  const double smallest = solver.eigenvalues().minCoeff();
  if (smallest < -kPsdTol) {
    throw ContractError("density matrix is not positive semidefinite (smallest eigenvalue " +
                        std::to_string(smallest) + ")");
  }
}

int DensityMatrix::dim_of(Party p) const {
  std::size_t pos = 0;
  for (Party q : subsystems_.parties()) {
    if (q == p) return dims_[pos];
    ++pos;
  }
  throw ContractError(std::string("subsystem ") + party_label(p) + " not present in " + subsystems_.to_string());
}

namespace {

// Splits a composite index over `parties` into (kept, discarded) indices,
// both row-major in A, B, C order.
struct IndexSplit {
  std::vector<Eigen::Index> kept;
  std::vector<Eigen::Index> discarded;
  Eigen::Index kept_dim = 1;
  Eigen::Index discarded_dim = 1;
};

IndexSplit split_indices(const std::vector<Party>& parties, const std::vector<int>& dims, PartySet keep) {
  IndexSplit split;
  Eigen::Index total = 1;
  for (std::size_t n = 0; n < parties.size(); ++n) {
    total *= dims[n];
    if (keep.contains(parties[n])) {
      split.kept_dim *= dims[n];
    } else {
      split.discarded_dim *= dims[n];
    }
  }
  split.kept.resize(static_cast<std::size_t>(total));
  split.discarded.resize(static_cast<std::size_t>(total));
  std::vector<int> digits(parties.size(), 0);
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    Eigen::Index kept = 0;
    Eigen::Index discarded = 0;
    for (std::size_t n = 0; n < parties.size(); ++n) {
      if (keep.contains(parties[n])) {
        kept = kept * dims[n] + digits[n];
      } else {
        discarded = discarded * dims[n] + digits[n];
      }
    }
    split.kept[static_cast<std::size_t>(flat)] = kept;
    split.discarded[static_cast<std::size_t>(flat)] = discarded;
    for (std::size_t n = parties.size(); n-- > 0;) {
      if (++digits[n] < dims[n]) break;
      digits[n] = 0;
    }
  }
  return split;
}

std::vector<int> kept_dims(const std::vector<Party>& parties, const std::vector<int>& dims, PartySet keep) {
  std::vector<int> out;
  for (std::size_t n = 0; n < parties.size(); ++n) {
    if (keep.contains(parties[n])) out.push_back(dims[n]);
  }
  return out;
}

void check_keep(PartySet have, PartySet keep) {
  if (keep.empty()) throw ContractError("keep set is empty");
  if (!keep.is_subset_of(have)) {
    throw ContractError("keep set " + keep.to_string() + " is not a subset of " + have.to_string());
  }
  if (keep == have) throw ContractError("keep set " + keep.to_string() + " discards nothing");
}

}  // namespace

DensityMatrix partial_trace(const PureState& state, PartySet keep) {
  check_keep(PartySet::all(), keep);
  const std::vector<Party> parties{Party::A, Party::B, Party::C};
  const std::vector<int> dims{state.dims().a, state.dims().b, state.dims().c};
  const IndexSplit split = split_indices(parties, dims, keep);

  // psi reshaped as (kept x discarded); rho = M M^dagger.
  Matrix m = Matrix::Zero(split.kept_dim, split.discarded_dim);
  const Vector& amps = state.amplitudes();
  for (Eigen::Index flat = 0; flat < amps.size(); ++flat) {
    const auto f = static_cast<std::size_t>(flat);
    m(split.kept[f], split.discarded[f]) = amps[flat];
  }
  Matrix rho = m * m.adjoint();
  return DensityMatrix::trusted(keep, kept_dims(parties, dims, keep), std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix& rho, PartySet keep) {
  check_keep(rho.subsystems(), keep);
  const std::vector<Party> parties = rho.subsystems().parties();
  const IndexSplit split = split_indices(parties, rho.dims(), keep);

  std::vector<std::vector<Eigen::Index>> by_discarded(static_cast<std::size_t>(split.discarded_dim));
  for (Eigen::Index flat = 0; flat < rho.dim(); ++flat) {
    by_discarded[static_cast<std::size_t>(split.discarded[static_cast<std::size_t>(flat)])].push_back(flat);
  }
  Matrix out = Matrix::Zero(split.kept_dim, split.kept_dim);
  const Matrix& m = rho.matrix();
  for (const auto& group : by_discarded) {
    for (Eigen::Index r : group) {
      for (Eigen::Index c : group) {
        out(split.kept[static_cast<std::size_t>(r)], split.kept[static_cast<std::size_t>(c)]) += m(r, c);
      }
    }
  }
  return DensityMatrix::trusted(keep, kept_dims(parties, rho.dims(), keep), std::move(out));
}

double fidelity(const PureState& psi1, const PureState& psi2) {
  if (!(psi1.dims() == psi2.dims())) throw ContractError("fidelity: dimension mismatch");
  return std::norm(psi1.amplitudes().dot(psi2.amplitudes()));
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_rc|^2 for Hermitian rho.
  return rho.matrix().squaredNorm();
}

double max_abs_entry(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

}  // namespace tripart
