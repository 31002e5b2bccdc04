#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dram3d/model_config.hpp"

namespace dram3d::cli {

enum ExitCode : int {
  kOk = 0,
  kGoldenMismatch = 1,
  kInputError = 2,
  kNotConverged = 3,
};

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Named scalar results checked by `reproduce-paper`.
using Quantities = std::vector<std::pair<std::string, double>>;

/// `calibrated` must already carry the reference calibration; its studies are
/// run on top of it.
Quantities reference_quantities(const ModelConfig& calibrated);

/// Either `expected` with an absolute `tolerance`, or an upper bound `max`.
struct ExpectedQuantity {
  std::string name;
  std::string unit;
  std::optional<double> expected;
  std::optional<double> tolerance;
  std::optional<double> max;
  bool operator==(const ExpectedQuantity&) const = default;
};

std::vector<ExpectedQuantity> default_expected();
std::vector<ExpectedQuantity> load_expected(std::string_view json);
std::string dump_expected(const std::vector<ExpectedQuantity>& expected);

struct CheckResult {
  ExpectedQuantity expected;
  std::optional<double> value;  // nullopt: quantity missing
  bool pass = false;
};

std::vector<CheckResult> check_quantities(const Quantities& q, const std::vector<ExpectedQuantity>& expected);

}  // namespace dram3d::cli
