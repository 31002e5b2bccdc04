#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dram3d/calibration.hpp"
#include "dram3d/projection.hpp"

namespace dram3d {

using Json = nlohmann::ordered_json;

/// "feasible", "infeasible" or "n/a" (planar arrays).
std::string feasibility_verdict(const EvaluationReport& report);

/// All numbers rounded to 6 significant digits.
Json to_json(const EvaluationReport& report);
Json to_json(const ComparisonTable& table);
Json to_json(const Calibration& calibration);

/// CSV with one row per report; header from `report_csv_columns()`.
const std::vector<std::string>& report_csv_columns();
std::string reports_csv(std::span<const EvaluationReport> reports);

std::string comparison_csv(const ComparisonTable& table);
/// Aligned plain-text table: one metric per row, one column per config plus
/// ratio columns against the first.
std::string comparison_text(const ComparisonTable& table);

/// anchor, target, value, relative error.
std::string residual_text(const Calibration& calibration);
std::string residual_csv(const Calibration& calibration);

/// Rows: profiles x schemes.
struct FeasibilityRow {
  std::string profile;
  Scheme scheme;
  double hcb_pitch = 0;
  double min_pitch = 0;
  bool feasible = false;
};
std::string feasibility_text(std::span<const FeasibilityRow> rows);
std::string feasibility_csv(std::span<const FeasibilityRow> rows);
Json to_json(std::span<const FeasibilityRow> rows);

/// Dump with two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace dram3d
