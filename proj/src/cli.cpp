#include "tripart/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include "tripart/harness.hpp"
#include "tripart/io.hpp"
#include "tripart/reconstruct.hpp"
#include "tripart/tomography.hpp"

namespace tripart::cli {

namespace {

using io::Json;

constexpr double kRoundtripFidelityFloor = 1.0 - 1e-8;

std::vector<int> parse_int_triple(const std::string& text, const char* what) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      values.push_back(v);
    } catch (const std::exception&) {
      throw ContractError(std::string("cannot parse ") + what + " '" + text + "'");
    }
  }
  if (values.size() != 3) throw ContractError(std::string(what) + " needs three comma-separated integers");
  return values;
}

Dims parse_dims(const std::string& text) {
  const auto v = parse_int_triple(text, "dims");
  return Dims::checked(v[0], v[1], v[2]);
}

struct ToleranceFlags {
  ReconstructionConfig config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rank-threshold", config.rank_threshold, "Eigenvalues at or below this are dropped");
    cmd->add_option("--gap-tol", config.gap_tol, "Eigenvalue gap below which spectra count as degenerate");
    cmd->add_option("--pair-tol", config.pair_tol, "Allowed gap between complementary spectra");
    cmd->add_option("--edge-tol", config.edge_tol, "Phase-graph edge cutoff, relative to max |S|");
    cmd->add_option("--phase-tol", config.phase_tol, "Allowed phase-constraint violation (radians)");
    cmd->add_option("--marginal-tol", config.marginal_tol, "Allowed Frobenius mismatch of marginals");
  }
};

Json timings_json(const std::vector<std::pair<std::string, double>>& timings) {
  Json j = Json::object();
  for (const auto& [stage, seconds] : timings) j[stage] = seconds;
  return j;
}

Json report_json(const ReconstructionReport& report) {
  return Json{{"marginal_residual_ab", report.marginal_residual_ab},
              {"marginal_residual_bc", report.marginal_residual_bc},
              {"eq8_residual", report.eq8_residual},
              {"cycle_residual", report.cycle_residual},
              {"max_pair_gap", report.max_pair_gap},
              {"b_marginal_gap", report.b_marginal_gap},
              {"min_spectral_gap", io::finite_or_null(report.min_spectral_gap)},
              {"ranks", {{"A", report.rank_a}, {"B", report.rank_b}, {"C", report.rank_c}}},
              {"genericity_flags", report.genericity_flags}};
}

Json failure_json(const AlgorithmError& err) {
  return Json{{"outcome", err.name()},
              {"error", err.what()},
              {"marginal_residual_ab", nullptr},
              {"marginal_residual_bc", nullptr},
              {"eq8_residual", nullptr},
              {"cycle_residual", nullptr}};
}

int cmd_gen(const std::string& dims_text, std::uint64_t seed, const std::string& out_path) {
  const Dims dims = parse_dims(dims_text);
  io::write_json_file(out_path, io::to_json(sample_haar_state(dims, seed)));
  return kSuccess;
}

int cmd_marginals(const std::string& in_path, const std::string& keep_text, const std::string& out_path) {
  const io::MatrixObject input = io::read_matrix_file(in_path);
  const PartySet keep = PartySet::parse(keep_text);
  const DensityMatrix reduced = std::visit(
      [&](const auto& obj) -> DensityMatrix {
        using T = std::decay_t<decltype(obj)>;
        if constexpr (std::is_same_v<T, GridWavefunction>) {
          throw ContractError("marginals expects a pure_state or density_matrix file");
        } else {
          return partial_trace(obj, keep);
        }
      },
      input);
  io::write_json_file(out_path, io::to_json(reduced));
  return kSuccess;
}

template <typename T>
T expect_kind(io::MatrixObject obj, const std::string& path, const char* kind) {
  if (auto* value = std::get_if<T>(&obj)) return std::move(*value);
  throw ContractError(path + " is not a " + kind + " file");
}

struct ReconstructArgs {
  std::string ab_path;
  std::string bc_path;
  std::string dims_text;
  std::string out_path;
  std::string report_path;
  std::string truth_path;
  bool timings = false;
};

int cmd_reconstruct(const ReconstructArgs& args, const ReconstructionConfig& config, std::ostream& err) {
  config.validate();
  const Dims dims = parse_dims(args.dims_text);
  const auto rho_ab = expect_kind<DensityMatrix>(io::read_matrix_file(args.ab_path), args.ab_path, "density_matrix");
  const auto rho_bc = expect_kind<DensityMatrix>(io::read_matrix_file(args.bc_path), args.bc_path, "density_matrix");
  std::optional<PureState> truth;
  if (!args.truth_path.empty()) {
    truth = expect_kind<PureState>(io::read_matrix_file(args.truth_path), args.truth_path, "pure_state");
    if (!(truth->dims() == dims)) throw ContractError("--truth state has different dims");
  }

  Json report;
  int code = kSuccess;
  try {
    const ReconstructionReport result = reconstruct_tripartite(rho_ab, rho_bc, dims, config);
    report = report_json(result);
    report["outcome"] = "success";
    if (truth) report["fidelity"] = fidelity(result.state, *truth);
    if (args.timings) report["timings"] = timings_json(result.timings);
    io::write_json_file(args.out_path, io::to_json(result.state));
  } catch (const AlgorithmError& e) {
    report = failure_json(e);
    err << e.name() << ": " << e.what() << '\n';
    code = kAlgorithm;
  }
  report["dims"] = {dims.a, dims.b, dims.c};
  report["config"] = io::to_json(config);
  io::write_json_file(args.report_path, report);
  return code;
}

int cmd_roundtrip(const std::string& dims_text, int trials, std::uint64_t seed_base, const std::string& report_path,
                  const ReconstructionConfig& config, bool timings, std::ostream& out) {
  config.validate();
  const Dims dims = parse_dims(dims_text);
  if (trials < 1) throw ContractError("--trials must be at least 1");

  const auto start = std::chrono::steady_clock::now();
  const std::vector<TrialRecord> records =
      run_haar_batch(dims, static_cast<std::size_t>(trials), seed_base, config);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const BatchSummary summary = batch_stats(records);

  const bool passed = summary.successes == summary.trials && summary.fidelity &&
                      summary.fidelity->min >= kRoundtripFidelityFloor;
  Json report = io::to_json(summary);
  report["dims"] = {dims.a, dims.b, dims.c};
  report["seed_base"] = seed_base;
  report["fidelity_floor"] = kRoundtripFidelityFloor;
  report["passed"] = passed;
  report["config"] = io::to_json(config);
  Json recs = Json::array();
  for (const TrialRecord& rec : records) recs.push_back(io::to_json(rec));
  report["records"] = std::move(recs);
  if (timings) report["timings"] = {{"total", elapsed}};
  io::write_json_file(report_path, report);

  out << summary.successes << "/" << summary.trials << " succeeded";
  if (summary.fidelity) out << ", min fidelity " << summary.fidelity->min;
  out << '\n';
  return passed ? kSuccess : kAlgorithm;
}

int cmd_tomo_demo(const std::string& grid_text, double spacing, const std::string& profile_text,
                  const std::string& report_path, const std::string& out_path, const ReconstructionConfig& config,
                  bool timings, std::ostream& out, std::ostream& err) {
  config.validate();
  const auto n = parse_int_triple(grid_text, "grid");
  const GridSpec grid = GridSpec::checked(n[0], n[1], n[2], spacing, spacing, spacing);
  const TomoProfile profile = parse_profile(profile_text);
  const GridWavefunction psi = make_profile(profile, grid);

  Json report{{"profile", profile_name(profile)},
              {"grid", {grid.nx, grid.ny, grid.nz}},
              {"spacings", {grid.hx, grid.hy, grid.hz}},
              {"config", io::to_json(config)}};
  int code = kSuccess;
  try {
    const GridReconstruction result =
        reconstruct_grid(planar_density(psi, Plane::kXY), planar_density(psi, Plane::kYZ), grid, config);
    report.update(report_json(result.report));
    report["outcome"] = "success";
    report["fidelity"] = grid_fidelity(result.wavefunction, psi);
    if (timings) report["timings"] = timings_json(result.report.timings);
    if (!out_path.empty()) io::write_json_file(out_path, io::to_json(result.wavefunction));
    out << profile_name(profile) << ": fidelity " << report["fidelity"].get<double>() << '\n';
  } catch (const AlgorithmError& e) {
    report.update(failure_json(e));
    err << e.name() << ": " << e.what() << '\n';
    code = kAlgorithm;
  }
  io::write_json_file(report_path, report);
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reconstruct tripartite pure states from two bipartite marginals"};
  app.require_subcommand(1);

  std::string dims_text;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string in_path;
  std::string keep_text;
  std::string report_path;
  int trials = 0;
  std::uint64_t seed_base = 0;
  std::string grid_text;
  double spacing = 0.8;
  std::string profile_text;
  bool timings = false;
  ToleranceFlags tolerances;
  ReconstructArgs rec_args;

  auto* gen = app.add_subcommand("gen", "Sample a Haar-random tripartite pure state");
  gen->add_option("--dims", dims_text, "dA,dB,dC")->required();
  gen->add_option("--seed", seed, "Random seed")->required();
  gen->add_option("--out", out_path, "Output state file")->required();

  auto* marg = app.add_subcommand("marginals", "Reduced density matrix of a state file");
  marg->add_option("--in", in_path, "pure_state or density_matrix file")->required();
  marg->add_option("--keep", keep_text, "Subsystems to keep, e.g. AB")->required();
  marg->add_option("--out", out_path, "Output density matrix file")->required();

  auto* rec = app.add_subcommand("reconstruct", "Reconstruct |psi_ABC> from rho_AB and rho_BC");
  rec->add_option("--ab", rec_args.ab_path, "rho_AB file")->required();
  rec->add_option("--bc", rec_args.bc_path, "rho_BC file")->required();
  rec->add_option("--dims", rec_args.dims_text, "dA,dB,dC")->required();
  rec->add_option("--out", rec_args.out_path, "Output state file")->required();
  rec->add_option("--report", rec_args.report_path, "Output report file")->required();
  rec->add_option("--truth", rec_args.truth_path, "Reference state for a fidelity figure");
  rec->add_flag("--timings", rec_args.timings, "Include stage timings in the report");
  tolerances.attach(rec);

  auto* rt = app.add_subcommand("roundtrip", "Haar round-trip batch");
  rt->add_option("--dims", dims_text, "dA,dB,dC")->required();
  rt->add_option("--trials", trials, "Number of trials")->required();
  rt->add_option("--seed-base", seed_base, "Trial t uses seed seed-base + t");
  rt->add_option("--report", report_path, "Summary JSON")->required();
  rt->add_flag("--timings", timings, "Include wall time in the report");
  tolerances.attach(rt);

  auto* tomo = app.add_subcommand("tomo-demo", "Planar-projection tomography on a grid");
  tomo->add_option("--grid", grid_text, "nx,ny,nz")->required();
  tomo->add_option("--spacing", spacing, "Grid spacing on every axis");
  tomo->add_option("--profile", profile_text, "separable | correlated | symmetric")->required();
  tomo->add_option("--report", report_path, "Report JSON")->required();
  tomo->add_option("--out", out_path, "Reconstructed grid wavefunction");
  tomo->add_flag("--timings", timings, "Include stage timings in the report");
  tolerances.attach(tomo);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(dims_text, seed, out_path);
    if (marg->parsed()) return cmd_marginals(in_path, keep_text, out_path);
    if (rec->parsed()) return cmd_reconstruct(rec_args, tolerances.config, err);
    if (rt->parsed()) {
      return cmd_roundtrip(dims_text, trials, seed_base, report_path, tolerances.config, timings, out);
    }
    if (tomo->parsed()) {
      return cmd_tomo_demo(grid_text, spacing, profile_text, report_path, out_path, tolerances.config, timings,
                           out, err);
    }
  } catch (const UsageError& e) {
    err << e.name() << ": " << e.what() << '\n';
    return kUsage;
  } catch (const AlgorithmError& e) {
    err << e.name() << ": " << e.what() << '\n';
    return kAlgorithm;
  }
  return kUsage;
}

}  // namespace tripart::cli
