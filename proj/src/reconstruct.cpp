#include "tripart/reconstruct.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

namespace tripart {

CoefficientTensors::CoefficientTensors(Eigen::Index rank_a, Eigen::Index rank_b, Eigen::Index rank_c)
    : rank_a_(rank_a),
      rank_b_(rank_b),
      rank_c_(rank_c),
      a_(static_cast<std::size_t>(rank_a * rank_b * rank_c)),
      c_(static_cast<std::size_t>(rank_a * rank_b * rank_c)) {}

double CoefficientTensors::max_normalization_deficit() const {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < rank_a_; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < rank_b_; ++j) {
      for (Eigen::Index k = 0; k < rank_c_; ++k) sum += std::norm(a(i, j, k));
    }
    worst = std::max(worst, std::abs(1.0 - sum));
  }
  for (Eigen::Index k = 0; k < rank_c_; ++k) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < rank_a_; ++i) {
      for (Eigen::Index j = 0; j < rank_b_; ++j) sum += std::norm(c(k, i, j));
    }
    worst = std::max(worst, std::abs(1.0 - sum));
  }
  return worst;
}

namespace {

// Column `col` of `vectors` viewed as a rows x cols matrix in row-major
// order (first factor slow).
Matrix unflatten_column(const Matrix& vectors, Eigen::Index col, Eigen::Index rows, Eigen::Index cols) {
  Matrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = vectors(r * cols + c, col);
  }
  return out;
}

}  // namespace

CoefficientTensors coefficient_tensors(const SpectralDecomposition& spec_a, const SpectralDecomposition& spec_b,
                                       const SpectralDecomposition& spec_c, const SpectralDecomposition& spec_ab,
                                       const SpectralDecomposition& spec_bc, const Dims& dims) {
  if (spec_a.original_dim != dims.a || spec_b.original_dim != dims.b || spec_c.original_dim != dims.c ||
      spec_ab.original_dim != static_cast<Eigen::Index>(dims.a) * dims.b ||
      spec_bc.original_dim != static_cast<Eigen::Index>(dims.b) * dims.c) {
    throw ContractError("coefficient_tensors: decompositions do not match dims");
  }
  if (spec_bc.rank() != spec_a.rank() || spec_ab.rank() != spec_c.rank()) {
    throw ContractError("coefficient_tensors: bipartite and single-party ranks are not paired");
  }
  const Matrix& basis_a = spec_a.eigenvectors;
  const Matrix& basis_b = spec_b.eigenvectors;
  const Matrix& basis_c = spec_c.eigenvectors;
  CoefficientTensors coeffs(spec_a.rank(), spec_b.rank(), spec_c.rank());

  // A^i = J^dagger W_i conj(K), W_i = |i;BC> reshaped to d_B x d_C.
  for (Eigen::Index i = 0; i < spec_a.rank(); ++i) {
    const Matrix block = basis_b.adjoint() * unflatten_column(spec_bc.eigenvectors, i, dims.b, dims.c) *
                         basis_c.conjugate();
    for (Eigen::Index j = 0; j < block.rows(); ++j) {
      for (Eigen::Index k = 0; k < block.cols(); ++k) coeffs.a(i, j, k) = block(j, k);
    }
  }
  // C^k = I^dagger X_k conj(J), X_k = |k;AB> reshaped to d_A x d_B.
  for (Eigen::Index k = 0; k < spec_c.rank(); ++k) {
    const Matrix block = basis_a.adjoint() * unflatten_column(spec_ab.eigenvectors, k, dims.a, dims.b) *
                         basis_b.conjugate();
    for (Eigen::Index i = 0; i < block.rows(); ++i) {
      for (Eigen::Index j = 0; j < block.cols(); ++j) coeffs.c(k, i, j) = block(i, j);
    }
  }

  const double deficit = coeffs.max_normalization_deficit();
  if (deficit > kExpansionLeakageTol) {
    std::ostringstream os;
    os << "bipartite eigenvectors leak out of the retained product basis (deficit " << deficit << ")";
    throw ExpansionLeakage(os.str());
  }
  return coeffs;
}

Matrix phase_edges(const CoefficientTensors& coeffs) {
  Matrix edges = Matrix::Zero(coeffs.rank_a(), coeffs.rank_c());
  for (Eigen::Index i = 0; i < coeffs.rank_a(); ++i) {
    for (Eigen::Index k = 0; k < coeffs.rank_c(); ++k) {
      Complex sum = 0.0;
      for (Eigen::Index j = 0; j < coeffs.rank_b(); ++j) sum += std::conj(coeffs.a(i, j, k)) * coeffs.c(k, i, j);
      edges(i, k) = sum;
    }
  }
  return edges;
}

double wrap_phase(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, two_pi);
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

namespace {

// Node numbering for the bipartite phase graph: alphas first, then gammas.
struct PhaseGraph {
  Eigen::Index rank_a;
  Eigen::Index rank_c;
  Eigen::MatrixXd weights;  // |S|
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> present;

  Eigen::Index size() const { return rank_a + rank_c; }
  bool is_alpha(Eigen::Index node) const { return node < rank_a; }
  Eigen::Index gamma_node(Eigen::Index k) const { return rank_a + k; }

  bool has_edge(Eigen::Index u, Eigen::Index v) const {
    if (is_alpha(u) == is_alpha(v)) return false;
    const auto [i, k] = endpoints(u, v);
    return present(i, k);
  }
  double weight(Eigen::Index u, Eigen::Index v) const {
    const auto [i, k] = endpoints(u, v);
    return weights(i, k);
  }
  std::pair<Eigen::Index, Eigen::Index> endpoints(Eigen::Index u, Eigen::Index v) const {
    return is_alpha(u) ? std::pair{u, v - rank_a} : std::pair{v, u - rank_a};
  }
};

// Returns parent links; parent[root] = root, unreachable nodes stay -1.
std::vector<Eigen::Index> spanning_tree(const PhaseGraph& graph, Eigen::Index root, TreeStrategy strategy) {
  const Eigen::Index n = graph.size();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n), -1);
  parent[static_cast<std::size_t>(root)] = root;
  auto visited = [&](Eigen::Index v) { return parent[static_cast<std::size_t>(v)] >= 0; };

  if (strategy == TreeStrategy::kBreadthFirst) {
    std::deque<Eigen::Index> queue{root};
    while (!queue.empty()) {
      const Eigen::Index u = queue.front();
      queue.pop_front();
      for (Eigen::Index v = 0; v < n; ++v) {
        if (!visited(v) && graph.has_edge(u, v)) {
          parent[static_cast<std::size_t>(v)] = u;
          queue.push_back(v);
        }
      }
    }
    return parent;
  }

  if (strategy == TreeStrategy::kDepthFirst) {
    auto visit = [&](auto&& self, Eigen::Index u) -> void {
      for (Eigen::Index v = 0; v < n; ++v) {
        if (!visited(v) && graph.has_edge(u, v)) {
          parent[static_cast<std::size_t>(v)] = u;
          self(self, v);
        }
      }
    };
    visit(visit, root);
    return parent;
  }

  // Prim on maximum weight.
  for (;;) {
    Eigen::Index best_u = -1;
    Eigen::Index best_v = -1;
    double best = -1.0;
    for (Eigen::Index u = 0; u < n; ++u) {
      if (!visited(u)) continue;
      for (Eigen::Index v = 0; v < n; ++v) {
        if (visited(v) || !graph.has_edge(u, v)) continue;
        const double w = graph.weight(u, v);
        if (w > best) {
          best = w;
          best_u = u;
          best_v = v;
        }
      }
    }
    if (best_v < 0) break;
    parent[static_cast<std::size_t>(best_v)] = best_u;
  }
  return parent;
}

}  // namespace

PhaseSolution solve_phases(const Matrix& edges, double edge_tol, double phase_tol, TreeStrategy strategy,
                           std::optional<Eigen::Index> root) {
  const Eigen::Index rank_a = edges.rows();
  const Eigen::Index rank_c = edges.cols();
  if (rank_a == 0 || rank_c == 0) throw ContractError("solve_phases: empty edge array");

  PhaseGraph graph{rank_a, rank_c, edges.cwiseAbs(), {}};
  const double threshold = edge_tol * graph.weights.maxCoeff();
  graph.present = (graph.weights.array() > threshold).matrix();

  PhaseSolution sol;
  sol.edge_magnitudes = graph.weights;
  if (root) {
    if (*root < 0 || *root >= rank_c) throw IndexError("solve_phases: root index out of range");
    sol.root = *root;
  } else {
    double best = -1.0;
    for (Eigen::Index k = 0; k < rank_c; ++k) {
      double incident = 0.0;
      for (Eigen::Index i = 0; i < rank_a; ++i) {
        if (graph.present(i, k)) incident += graph.weights(i, k);
      }
      if (incident > best) {
        best = incident;
        sol.root = k;
      }
    }
  }

  const Eigen::Index root_node = graph.gamma_node(sol.root);
  const std::vector<Eigen::Index> parent = spanning_tree(graph, root_node, strategy);
  std::vector<Eigen::Index> unreachable;
  for (Eigen::Index v = 0; v < graph.size(); ++v) {
    if (parent[static_cast<std::size_t>(v)] < 0) unreachable.push_back(v);
  }
  if (!unreachable.empty()) {
    std::ostringstream os;
    os << "phase graph is disconnected; unreachable:";
    for (Eigen::Index v : unreachable) {
      if (graph.is_alpha(v)) {
        os << " alpha_" << v;
      } else {
        os << " gamma_" << v - rank_a;
      }
    }
    throw PhaseGraphDisconnected(os.str());
  }

  // Assign phases root-outwards. Parents always precede children in
  // discovery order, so resolve lazily with memoization.
  std::vector<double> phase(static_cast<std::size_t>(graph.size()), 0.0);
  std::vector<bool> done(static_cast<std::size_t>(graph.size()), false);
  done[static_cast<std::size_t>(root_node)] = true;
  auto resolve = [&](auto&& self, Eigen::Index v) -> double {
    const auto vs = static_cast<std::size_t>(v);
    if (done[vs]) return phase[vs];
    const Eigen::Index p = parent[vs];
    const double parent_phase = self(self, p);
    const auto [i, k] = graph.endpoints(v, p);
    const double arg = std::arg(edges(i, k));
    // alpha_i - gamma_k = arg S(i, k)
    phase[vs] = graph.is_alpha(v) ? wrap_phase(parent_phase + arg) : wrap_phase(parent_phase - arg);
    done[vs] = true;
    return phase[vs];
  };
  for (Eigen::Index v = 0; v < graph.size(); ++v) resolve(resolve, v);

  sol.alpha.resize(rank_a);
  sol.gamma.resize(rank_c);
  for (Eigen::Index i = 0; i < rank_a; ++i) sol.alpha[i] = phase[static_cast<std::size_t>(i)];
  for (Eigen::Index k = 0; k < rank_c; ++k) sol.gamma[k] = phase[static_cast<std::size_t>(graph.gamma_node(k))];
  for (Eigen::Index v = 0; v < graph.size(); ++v) {
    if (v == root_node) continue;
    sol.tree_edges.push_back(graph.endpoints(v, parent[static_cast<std::size_t>(v)]));
  }
  std::sort(sol.tree_edges.begin(), sol.tree_edges.end());

  for (Eigen::Index i = 0; i < rank_a; ++i) {
    for (Eigen::Index k = 0; k < rank_c; ++k) {
      if (!graph.present(i, k)) continue;
      const double violation = std::abs(wrap_phase(sol.alpha[i] - sol.gamma[k] - std::arg(edges(i, k))));
      sol.cycle_residual = std::max(sol.cycle_residual, violation);
    }
  }
  if (sol.cycle_residual > phase_tol) {
    std::ostringstream os;
    os << "phase constraints are inconsistent around a cycle (max violation " << sol.cycle_residual
       << " rad > " << phase_tol << ")";
    throw PhaseInconsistency(os.str());
  }
  return sol;
}

Vector canonicalize_global_phase(Vector amplitudes) {
  if (amplitudes.size() == 0) return amplitudes;
  constexpr double tie_tol = 1e-12;
  const double largest = amplitudes.cwiseAbs().maxCoeff();
  Eigen::Index pick = 0;
  for (Eigen::Index idx = 0; idx < amplitudes.size(); ++idx) {
    if (std::abs(amplitudes[idx]) >= largest - tie_tol) {
      pick = idx;
      break;
    }
  }
  const Complex anchor = amplitudes[pick];
  if (std::abs(anchor) > 0.0) amplitudes *= std::conj(anchor) / std::abs(anchor);
  amplitudes[pick] = std::abs(anchor);
  return amplitudes;
}

PureState assemble_state(const SpectrumPairing& pairing, const SpectralDecomposition& spec_a,
                         const SpectralDecomposition& spec_bc, const Eigen::VectorXd& alpha, const Dims& dims) {
  const Eigen::Index rank = spec_a.rank();
  if (alpha.size() != rank || static_cast<Eigen::Index>(pairing.permutation.size()) != rank) {
    throw ContractError("assemble_state: phase vector and pairing must match the rank of rho_A");
  }
  if (spec_a.original_dim != dims.a || spec_bc.original_dim != static_cast<Eigen::Index>(dims.b) * dims.c) {
    throw ContractError("assemble_state: decompositions do not match dims");
  }
  const Eigen::Index dim_bc = spec_bc.original_dim;
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(dims.total()));
  for (Eigen::Index i = 0; i < rank; ++i) {
    const Complex weight = std::polar(std::sqrt(spec_a.eigenvalues[i]), alpha[i]);
    const auto partner = pairing.permutation[static_cast<std::size_t>(i)];
    for (Eigen::Index a = 0; a < dims.a; ++a) {
      amps.segment(a * dim_bc, dim_bc) += weight * spec_a.eigenvectors(a, i) * spec_bc.eigenvectors.col(partner);
    }
  }
  amps /= amps.norm();
  return PureState(dims, canonicalize_global_phase(std::move(amps)));
}

double eq8_residual(const CoefficientTensors& coeffs, const PhaseSolution& phases,
                    const SpectralDecomposition& spec_a, const SpectralDecomposition& spec_c) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < coeffs.rank_a(); ++i) {
    const Complex left = std::polar(std::sqrt(spec_a.eigenvalues[i]), phases.alpha[i]);
    for (Eigen::Index k = 0; k < coeffs.rank_c(); ++k) {
      const Complex right = std::polar(std::sqrt(spec_c.eigenvalues[k]), phases.gamma[k]);
      for (Eigen::Index j = 0; j < coeffs.rank_b(); ++j) {
        worst = std::max(worst, std::abs(left * coeffs.a(i, j, k) - right * coeffs.c(k, i, j)));
      }
    }
  }
  return worst;
}

void ReconstructionConfig::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"rank_threshold", rank_threshold}, {"gap_tol", gap_tol},     {"pair_tol", pair_tol},
      {"edge_tol", edge_tol},             {"phase_tol", phase_tol}, {"marginal_tol", marginal_tol},
  };
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0)) throw ContractError(std::string(name) + " must be strictly positive");
  }
  if (!(rank_threshold < 1.0)) throw ContractError("rank_threshold must be below 1");
}

namespace {

std::string describe_clusters(const char* label, const std::vector<EigenCluster>& clusters,
                              const SpectralDecomposition& spec) {
  std::ostringstream os;
  os << label << " degenerate:";
  for (const auto& cluster : clusters) {
    os << " {";
    for (std::size_t n = 0; n < cluster.size(); ++n) os << (n ? "," : "") << cluster[n];
    os << "}@" << spec.eigenvalues[cluster.front()];
  }
  return os.str();
}

void require_generic(const char* label, const SpectralDecomposition& spec, double gap_tol) {
  const auto clusters = detect_degeneracy(spec, gap_tol);
  if (!clusters.empty()) throw GenericityViolation(describe_clusters(label, clusters, spec));
}

void check_input(const DensityMatrix& rho, PartySet expected, std::vector<int> dims) {
  if (rho.subsystems() != expected) {
    throw ContractError("expected a density matrix over " + expected.to_string() + ", got " +
                        rho.subsystems().to_string());
  }
  if (rho.dims() != dims) throw ContractError("density matrix over " + expected.to_string() + " has wrong dims");
}

}  // namespace

MarginalAnalysis analyze_marginals(const DensityMatrix& rho_ab, const DensityMatrix& rho_bc, const Dims& dims,
                                   const ReconstructionConfig& config) {
  config.validate();
  check_input(rho_ab, PartySet::parse("AB"), {dims.a, dims.b});
  check_input(rho_bc, PartySet::parse("BC"), {dims.b, dims.c});

  const PartySet only_a = PartySet::of({Party::A});
  const PartySet only_b = PartySet::of({Party::B});
  const PartySet only_c = PartySet::of({Party::C});
  const DensityMatrix rho_a = partial_trace(rho_ab, only_a);
  const DensityMatrix rho_c = partial_trace(rho_bc, only_c);
  const DensityMatrix rho_b_from_ab = partial_trace(rho_ab, only_b);
  const DensityMatrix rho_b_from_bc = partial_trace(rho_bc, only_b);

  const double b_gap = (rho_b_from_ab.matrix() - rho_b_from_bc.matrix()).norm();
  if (b_gap > config.marginal_tol) {
    std::ostringstream os;
    os << "rho_B derived from rho_AB and rho_BC differ by " << b_gap << " (Frobenius)";
    throw MarginalInconsistency(os.str());
  }
  const DensityMatrix rho_b = DensityMatrix::trusted(
      only_b, {dims.b}, (rho_b_from_ab.matrix() + rho_b_from_bc.matrix()) * 0.5);

  SpectralDecomposition spec_a = eig_hermitian(rho_a, config.rank_threshold);
  SpectralDecomposition spec_b = eig_hermitian(rho_b, config.rank_threshold);
  SpectralDecomposition spec_c = eig_hermitian(rho_c, config.rank_threshold);
  SpectralDecomposition spec_ab = eig_hermitian(rho_ab, config.rank_threshold);
  SpectralDecomposition spec_bc = eig_hermitian(rho_bc, config.rank_threshold);

  require_generic("rho_A", spec_a, config.gap_tol);
  require_generic("rho_BC", spec_bc, config.gap_tol);
  require_generic("rho_C", spec_c, config.gap_tol);
  require_generic("rho_AB", spec_ab, config.gap_tol);

  std::vector<std::string> flags;
  if (const auto clusters = detect_degeneracy(spec_b, config.gap_tol); !clusters.empty()) {
    flags.push_back(describe_clusters("rho_B", clusters, spec_b));
  }
  if (spec_a.rank() < dims.a) flags.push_back("rho_A rank-deficient: " + std::to_string(spec_a.rank()));
  if (spec_b.rank() < dims.b) flags.push_back("rho_B rank-deficient: " + std::to_string(spec_b.rank()));
  if (spec_c.rank() < dims.c) flags.push_back("rho_C rank-deficient: " + std::to_string(spec_c.rank()));

  SpectrumPairing pairing_a = match_spectra(spec_a, spec_bc, config.pair_tol);
  SpectrumPairing pairing_c = match_spectra(spec_c, spec_ab, config.pair_tol);

  CoefficientTensors coeffs = coefficient_tensors(spec_a, spec_b, spec_c, spec_ab, spec_bc, dims);
  Matrix edges = phase_edges(coeffs);

  return MarginalAnalysis{dims,
                          rho_ab,
                          rho_bc,
                          std::move(spec_a),
                          std::move(spec_b),
                          std::move(spec_c),
                          std::move(spec_ab),
                          std::move(spec_bc),
                          std::move(pairing_a),
                          std::move(pairing_c),
                          std::move(coeffs),
                          std::move(edges),
                          b_gap,
                          std::move(flags)};
}

ReconstructionReport reconstruct_tripartite(const DensityMatrix& rho_ab, const DensityMatrix& rho_bc,
                                            const Dims& dims, const ReconstructionConfig& config) {
  using Clock = std::chrono::steady_clock;
  std::vector<std::pair<std::string, double>> timings;
  auto lap = [&timings, start = Clock::now()](const char* stage) mutable {
    const auto now = Clock::now();
    timings.emplace_back(stage, std::chrono::duration<double>(now - start).count());
    start = now;
  };

  const MarginalAnalysis analysis = analyze_marginals(rho_ab, rho_bc, dims, config);
  lap("spectral");
  const PhaseSolution phases = solve_phases(analysis.edges, config.edge_tol, config.phase_tol);
  lap("phases");
  PureState state = assemble_state(analysis.pairing_a, analysis.spec_a, analysis.spec_bc, phases.alpha, dims);
  lap("assemble");

  const double residual_ab = (partial_trace(state, PartySet::parse("AB")).matrix() - rho_ab.matrix()).norm();
  const double residual_bc = (partial_trace(state, PartySet::parse("BC")).matrix() - rho_bc.matrix()).norm();
  const double eq8 = eq8_residual(analysis.coeffs, phases, analysis.spec_a, analysis.spec_c);
  lap("verify");

  if (eq8 > config.phase_tol) {
    std::ostringstream os;
    os << "solved phases violate the amplitude compatibility equations by " << eq8;
    throw PhaseInconsistency(os.str());
  }
  if (residual_ab > config.marginal_tol || residual_bc > config.marginal_tol) {
    std::ostringstream os;
    os << "reconstructed state does not reproduce the inputs (AB " << residual_ab << ", BC " << residual_bc
       << ")";
    throw MarginalInconsistency(os.str());
  }

  return ReconstructionReport{
      std::move(state),
      residual_ab,
      residual_bc,
      eq8,
      phases.cycle_residual,
      std::max(analysis.pairing_a.max_pair_gap, analysis.pairing_c.max_pair_gap),
      analysis.b_marginal_gap,
      std::min(min_spectral_gap(analysis.spec_a), min_spectral_gap(analysis.spec_c)),
      analysis.spec_a.rank(),
      analysis.spec_b.rank(),
      analysis.spec_c.rank(),
      analysis.genericity_flags,
      std::move(timings),
  };
}

}  // namespace tripart
