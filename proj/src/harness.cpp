#include "tripart/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace tripart {

namespace {

Complex complex_gaussian(std::mt19937_64& rng, std::normal_distribution<double>& normal) {
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

}  // namespace

PureState sample_haar_state(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector amps(static_cast<Eigen::Index>(dims.total()));
  for (Eigen::Index n = 0; n < amps.size(); ++n) amps[n] = complex_gaussian(rng, normal);
  return PureState::normalized(dims, std::move(amps));
}

Matrix sample_haar_unitary(int dim, std::uint64_t seed) {
  if (dim <= 0) throw ContractError("unitary dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix ginibre(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) ginibre(r, c) = complex_gaussian(rng, normal);
  }
  Eigen::HouseholderQR<Matrix> qr(ginibre);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Complex d = r(c, c);
    if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
  }
  return q;
}

TrialRecord roundtrip(const PureState& psi, const ReconstructionConfig& config, std::uint64_t seed) {
  TrialRecord rec;
  rec.seed = seed;
  rec.dims = psi.dims();
  const DensityMatrix rho_ab = partial_trace(psi, PartySet::parse("AB"));
  const DensityMatrix rho_bc = partial_trace(psi, PartySet::parse("BC"));
  {
    const auto spec_a = eig_hermitian(partial_trace(psi, PartySet::of({Party::A})), config.rank_threshold);
    const auto spec_c = eig_hermitian(partial_trace(psi, PartySet::of({Party::C})), config.rank_threshold);
    rec.min_spectral_gap = std::min(min_spectral_gap(spec_a), min_spectral_gap(spec_c));
  }
  try {
    const ReconstructionReport report = reconstruct_tripartite(rho_ab, rho_bc, psi.dims(), config);
    rec.outcome = "success";
    rec.fidelity = fidelity(report.state, psi);
    rec.marginal_residual_ab = report.marginal_residual_ab;
    rec.marginal_residual_bc = report.marginal_residual_bc;
    rec.eq8_residual = report.eq8_residual;
    rec.cycle_residual = report.cycle_residual;
  } catch (const AlgorithmError& err) {
    rec.outcome = err.name();
    rec.message = err.what();
  }
  return rec;
}

std::vector<TrialRecord> run_haar_batch(const Dims& dims, std::size_t trials, std::uint64_t seed_base,
                                        const ReconstructionConfig& config) {
  std::vector<TrialRecord> records;
  records.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t seed = seed_base + t;
    records.push_back(roundtrip(sample_haar_state(dims, seed), config, seed));
  }
  return records;
}

Quantiles quantiles(std::vector<double> values) {
  if (values.empty()) throw ContractError("quantiles of an empty sample");
  std::sort(values.begin(), values.end());
  // Nearest-rank on the sorted sample.
  auto at = [&values](double q) {
    const auto last = static_cast<double>(values.size() - 1);
    return values[static_cast<std::size_t>(std::lround(q * last))];
  };
  return {values.front(), at(0.05), at(0.5), at(0.95), values.back()};
}

BatchSummary batch_stats(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw ContractError("batch_stats needs at least one record");
  BatchSummary summary;
  summary.trials = records.size();
  std::map<std::string, std::size_t> counts;
  std::vector<double> fid;
  std::vector<double> eq8;
  std::vector<double> cycle;
  std::vector<double> marginal;
  for (const TrialRecord& rec : records) {
    ++counts[rec.outcome];
    if (!rec.success()) continue;
    ++summary.successes;
    fid.push_back(*rec.fidelity);
    eq8.push_back(rec.eq8_residual);
    cycle.push_back(rec.cycle_residual);
    marginal.push_back(std::max(rec.marginal_residual_ab, rec.marginal_residual_bc));
    summary.gap_vs_error.push_back({rec.min_spectral_gap, 1.0 - *rec.fidelity});
  }
  summary.success_rate = static_cast<double>(summary.successes) / static_cast<double>(summary.trials);
  summary.outcome_counts.assign(counts.begin(), counts.end());
  if (!fid.empty()) {
    summary.fidelity = quantiles(std::move(fid));
    summary.eq8_residual = quantiles(std::move(eq8));
    summary.cycle_residual = quantiles(std::move(cycle));
    summary.marginal_residual = quantiles(std::move(marginal));
  }
  return summary;
}

}  // namespace tripart
