#pragma once

// File formats: scenario configuration (JSON), fidelity samples (CSV with a
// `pi,fidelity` header), fitted-curve documents (JSON) and result tables
// (CSV or JSON).

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fast/fidelity.hpp"
#include "fast/harness.hpp"

namespace fast {

/// Builds a scenario from a parsed configuration document. Missing fields
/// keep their defaults; unknown keys are rejected. A `fidelity.samples` path
/// is resolved against `base_dir` and fitted on load.
Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Configuration document equivalent to `s` (noise density in dBm/MHz).
nlohmann::json scenario_to_json(const Scenario& s);

std::vector<FidelitySample> parse_samples(const std::string& text);
std::vector<FidelitySample> read_samples(const std::filesystem::path& path);

nlohmann::ordered_json curve_to_json(const CurveFit& fit);
CurveFit curve_from_json(const nlohmann::json& doc);
void write_curve(const CurveFit& fit, const std::filesystem::path& path);
CurveFit read_curve(const std::filesystem::path& path);

enum class ExportFormat { csv, json };

ExportFormat parse_export_format(const std::string& name);

/// Column order of the CSV export.
const std::vector<std::string>& result_columns();

/// Deterministic rendering: fixed column order, numbers at 6 significant
/// digits, empty cells (CSV) or null (JSON) where a value does not apply.
std::string render_results(const ResultTable& table, ExportFormat format);

/// Throws ConfigError on an empty table and IoError when the destination
/// cannot be written.
void export_results(const ResultTable& table, const std::filesystem::path& destination, ExportFormat format);

}  // namespace fast
