#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tripart/core.hpp"
#include "tripart/reconstruct.hpp"

namespace tripart {

// Standard complex Gaussian amplitudes, normalized. Deterministic per seed.
PureState sample_haar_state(const Dims& dims, std::uint64_t seed);

// Haar-random d x d unitary (QR of a complex Ginibre matrix with the phases
// of R's diagonal divided out).
Matrix sample_haar_unitary(int dim, std::uint64_t seed);

struct TrialRecord {
  std::uint64_t seed = 0;
  Dims dims;
  std::string outcome;              // "success" or the error name
  std::string message;              // error text, empty on success
  std::optional<double> fidelity;   // present iff outcome == "success"
  double marginal_residual_ab = 0.0;
  double marginal_residual_bc = 0.0;
  double eq8_residual = 0.0;
  double cycle_residual = 0.0;
  double min_spectral_gap = 0.0;    // of rho_A and rho_C of the input state

  bool success() const { return fidelity.has_value(); }
};

// Marginalizes psi, reconstructs, and compares. Algorithm errors are
// recorded, not thrown.
TrialRecord roundtrip(const PureState& psi, const ReconstructionConfig& config = {}, std::uint64_t seed = 0);

// Trial t samples with seed seed_base + t.
std::vector<TrialRecord> run_haar_batch(const Dims& dims, std::size_t trials, std::uint64_t seed_base,
                                        const ReconstructionConfig& config = {});

struct Quantiles {
  double min = 0.0;
  double p05 = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  double max = 0.0;
};

struct GapErrorPoint {
  double min_spectral_gap;
  double infidelity;
};

struct BatchSummary {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  std::vector<std::pair<std::string, std::size_t>> outcome_counts;  // sorted by name
  std::optional<Quantiles> fidelity;                                // over successes
  std::optional<Quantiles> eq8_residual;
  std::optional<Quantiles> cycle_residual;
  std::optional<Quantiles> marginal_residual;  // max of AB and BC per trial
  std::vector<GapErrorPoint> gap_vs_error;     // successes only, trial order
};

// Throws ContractError on an empty list.
BatchSummary batch_stats(const std::vector<TrialRecord>& records);

Quantiles quantiles(std::vector<double> values);

}  // namespace tripart
