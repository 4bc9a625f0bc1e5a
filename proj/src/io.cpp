#include "tripart/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace tripart::io {

namespace {

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex parse_pair(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ContractError("expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json vector_data(const Vector& v) {
  Json data = Json::array();
  for (Eigen::Index n = 0; n < v.size(); ++n) data.push_back(complex_pair(v[n]));
  return data;
}

Vector parse_vector(const Json& data, std::size_t expected) {
  if (!data.is_array() || data.size() != expected) {
    throw ContractError("expected " + std::to_string(expected) + " amplitudes");
  }
  Vector v(static_cast<Eigen::Index>(expected));
  for (std::size_t n = 0; n < expected; ++n) v[static_cast<Eigen::Index>(n)] = parse_pair(data[n]);
  return v;
}

std::vector<int> parse_dims(const Json& doc) {
  if (!doc.contains("dims") || !doc["dims"].is_array()) throw ContractError("missing \"dims\" array");
  std::vector<int> dims;
  for (const Json& d : doc["dims"]) {
    if (!d.is_number_integer()) throw ContractError("dims must be integers");
    dims.push_back(d.get<int>());
  }
  return dims;
}

}  // namespace

Json to_json(const PureState& psi) {
  const Dims& d = psi.dims();
  return Json{{"kind", "pure_state"}, {"dims", {d.a, d.b, d.c}}, {"data", vector_data(psi.amplitudes())}};
}

Json to_json(const DensityMatrix& rho) {
  Json subsystems = Json::array();
  for (Party p : rho.subsystems().parties()) subsystems.push_back(std::string(1, party_label(p)));
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < rho.dim(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < rho.dim(); ++c) row.push_back(complex_pair(rho.matrix()(r, c)));
    rows.push_back(std::move(row));
  }
  return Json{{"kind", "density_matrix"}, {"dims", rho.dims()}, {"subsystems", subsystems}, {"data", rows}};
}

Json to_json(const GridWavefunction& psi) {
  const GridSpec& g = psi.grid();
  return Json{{"kind", "grid_wavefunction"},
              {"dims", {g.nx, g.ny, g.nz}},
              {"spacings", {g.hx, g.hy, g.hz}},
              {"axes", {"x", "y", "z"}},
              {"data", vector_data(psi.values())}};
}

MatrixObject from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw ContractError("matrix file needs a string \"kind\"");
  }
  if (!doc.contains("data")) throw ContractError("matrix file needs \"data\"");
  const std::string kind = doc["kind"].get<std::string>();
  const std::vector<int> dims = parse_dims(doc);

  if (kind == "pure_state") {
    if (dims.size() != 3) throw ContractError("pure_state needs three dims");
    const Dims d = Dims::checked(dims[0], dims[1], dims[2]);
    return PureState(d, parse_vector(doc["data"], d.total()));
  }
  if (kind == "grid_wavefunction") {
    if (dims.size() != 3) throw ContractError("grid_wavefunction needs three dims");
    if (!doc.contains("spacings") || !doc["spacings"].is_array() || doc["spacings"].size() != 3) {
      throw ContractError("grid_wavefunction needs three spacings");
    }
    const Json& h = doc["spacings"];
    const GridSpec grid = GridSpec::checked(dims[0], dims[1], dims[2], h[0].get<double>(), h[1].get<double>(),
                                            h[2].get<double>());
    return GridWavefunction(grid, parse_vector(doc["data"], grid.points()));
  }
  if (kind == "density_matrix") {
    if (!doc.contains("subsystems") || !doc["subsystems"].is_array()) {
      throw ContractError("density_matrix needs a \"subsystems\" array");
    }
    std::string labels;
    for (const Json& s : doc["subsystems"]) {
      if (!s.is_string()) throw ContractError("subsystem labels must be strings");
      labels += s.get<std::string>();
    }
    const PartySet parties = PartySet::parse(labels);
    if (parties.to_string() != labels) throw ContractError("subsystem labels must be listed in A, B, C order");
    Eigen::Index total = 1;
    for (int d : dims) {
      if (d <= 0) throw ContractError("dims must be positive");
      total *= d;
      if (static_cast<std::size_t>(total) > kMaxTotalDim) throw ContractError("density matrix too large");
    }
    const Json& rows = doc["data"];
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != total) {
      throw ContractError("density_matrix needs " + std::to_string(total) + " rows");
    }
    Matrix m(total, total);
    for (Eigen::Index r = 0; r < total; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != total) {
        throw ContractError("density_matrix row " + std::to_string(r) + " has the wrong length");
      }
      for (Eigen::Index c = 0; c < total; ++c) m(r, c) = parse_pair(row[static_cast<std::size_t>(c)]);
    }
    return DensityMatrix(parties, dims, std::move(m));
  }
  throw ContractError("unknown matrix kind \"" + kind + "\"");
}

Json to_json(const ReconstructionConfig& config) {
  return Json{{"rank_threshold", config.rank_threshold}, {"gap_tol", config.gap_tol},
              {"pair_tol", config.pair_tol},             {"edge_tol", config.edge_tol},
              {"phase_tol", config.phase_tol},           {"marginal_tol", config.marginal_tol}};
}

Json finite_or_null(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

Json to_json(const TrialRecord& rec) {
  Json j{{"seed", rec.seed},
         {"dims", {rec.dims.a, rec.dims.b, rec.dims.c}},
         {"outcome", rec.outcome},
         {"min_spectral_gap", finite_or_null(rec.min_spectral_gap)}};
  if (rec.success()) {
    j["fidelity"] = *rec.fidelity;
    j["marginal_residual_ab"] = rec.marginal_residual_ab;
    j["marginal_residual_bc"] = rec.marginal_residual_bc;
    j["eq8_residual"] = rec.eq8_residual;
    j["cycle_residual"] = rec.cycle_residual;
  } else {
    j["error"] = rec.message;
  }
  return j;
}

Json to_json(const Quantiles& q) {
  return Json{{"min", q.min}, {"p05", q.p05}, {"median", q.median}, {"p95", q.p95}, {"max", q.max}};
}

Json to_json(const BatchSummary& summary) {
  Json outcomes = Json::object();
  for (const auto& [name, count] : summary.outcome_counts) outcomes[name] = count;
  Json scatter = Json::array();
  for (const GapErrorPoint& p : summary.gap_vs_error) {
    scatter.push_back({finite_or_null(p.min_spectral_gap), p.infidelity});
  }
  auto opt = [](const std::optional<Quantiles>& q) { return q ? to_json(*q) : Json(nullptr); };
  return Json{{"trials", summary.trials},
              {"successes", summary.successes},
              {"success_rate", summary.success_rate},
              {"outcomes", outcomes},
              {"fidelity", opt(summary.fidelity)},
              {"eq8_residual", opt(summary.eq8_residual)},
              {"cycle_residual", opt(summary.cycle_residual)},
              {"marginal_residual", opt(summary.marginal_residual)},
              {"gap_vs_error", scatter}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& err) {
    throw ContractError("cannot parse " + path.string() + ": " + err.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("cannot write " + path.string());
  out << doc.dump(1) << '\n';
  if (!out) throw ContractError("write failed for " + path.string());
}

MatrixObject read_matrix_file(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  try {
    return from_json(doc);
  } catch (const Json::exception& err) {
    throw ContractError(path.string() + ": " + err.what());
  }
}

}  // namespace tripart::io
