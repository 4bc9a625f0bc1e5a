#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "tripart/core.hpp"
#include "tripart/harness.hpp"
#include "tripart/reconstruct.hpp"
#include "tripart/tomography.hpp"

namespace tripart::io {

using Json = nlohmann::json;

// MatrixFile documents. Complex numbers are [re, im] pairs; vectors are
// flat arrays in row-major index order, matrices arrays of rows.
Json to_json(const PureState& psi);
Json to_json(const DensityMatrix& rho);
Json to_json(const GridWavefunction& psi);

using MatrixObject = std::variant<PureState, DensityMatrix, GridWavefunction>;

// Throws ContractError on schema violations or invalid contents.
MatrixObject from_json(const Json& doc);

Json to_json(const ReconstructionConfig& config);
Json to_json(const TrialRecord& rec);
Json to_json(const BatchSummary& summary);
Json to_json(const Quantiles& q);

// Throws ContractError if the file cannot be opened or parsed.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& doc);

MatrixObject read_matrix_file(const std::filesystem::path& path);

// Finite doubles pass through, non-finite values become null.
Json finite_or_null(double value);

}  // namespace tripart::io
