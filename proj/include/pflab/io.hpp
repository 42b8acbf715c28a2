#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pflab/experiments.hpp"

namespace pflab {

inline constexpr const char* kVersion = "0.1.0";

// Exact column order of the sweep CSV.
inline constexpr const char* kCsvHeader =
    "n,seed,t,r,dt,order,empirical,bound_pf1,bound_main,term_boundary,term_bulk,"
    "bound_pf2,unitarity_drift";

/// Rows serialized with shortest round-trip float formatting.
std::string records_to_csv(std::span<const ErrorRecord> records);

/// Parses a CSV produced by records_to_csv; throws ParseError on a bad header
/// or malformed row, and on a file with no data rows.
std::vector<ErrorRecord> records_from_csv(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Sidecar describing a sweep: effective config, model, disorder values, RNG
/// id, norm kind, coefficients, failures, library version.
nlohmann::json sweep_metadata(const TwoPartHamiltonian& model,
                              const nlohmann::json& effective_config,
                              const SweepSpec& spec, const SweepResult& result);

nlohmann::json fit_result_to_json(const FitResult& fit);
FitResult fit_result_from_json(const nlohmann::json& j);

nlohmann::json coefficients_to_json(const BoundCoefficients& coeffs);
BoundCoefficients coefficients_from_json(const nlohmann::json& j);

}  // namespace pflab
