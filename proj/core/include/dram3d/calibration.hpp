#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dram3d/topology.hpp"

namespace dram3d {

/// Names one evaluation point of a model config. Missing layers/scheme fall
/// back to the config defaults.
struct ConfigRef {
  std::string profile;
  std::optional<int> layers;
  std::optional<Scheme> scheme;
  bool operator==(const ConfigRef&) const = default;
};

struct Observable {
  std::string metric;  // one of report_metrics()
  ConfigRef at;
  bool operator==(const Observable&) const = default;
};

struct CalibrationAnchor {
  std::string name;
  Observable observable;
  double target = 0;
  std::string unit;
  double weight = 1.0;
  bool operator==(const CalibrationAnchor&) const = default;
};

struct FreeParameter {
  std::string name;
  double lower = 0;
  double upper = 0;
  bool operator==(const FreeParameter&) const = default;
};

struct CalibrationSet {
  std::string name;
  std::vector<CalibrationAnchor> anchors;
  std::vector<FreeParameter> free;
  bool operator==(const CalibrationSet&) const = default;
};

void validate(const CalibrationAnchor& anchor, const std::string& path);
void validate(const FreeParameter& parameter, const std::string& path);

// Generic engine ------------------------------------------------------------

struct ParameterSpec {
  std::string name;
  double initial = 0;
  double lower = 0;
  double upper = 0;
};

/// Least-squares problem on weighted relative residuals
/// (observed - target) / |target|.
struct CalibrationProblem {
  std::vector<ParameterSpec> parameters;
  std::vector<std::string> anchor_names;
  std::vector<double> targets;
  std::vector<double> weights;
  /// Observed anchor values for a full parameter vector (parameter order).
  std::function<std::vector<double>(const std::vector<double>&)> observe;
};

struct CalibrationOptions {
  /// Sweeps stop once no parameter moves by more than this (relative).
  double tolerance = 1e-10;
  int max_sweeps = 200;
  /// Reported as converged when the last sweep moved less than this.
  double converged_step = 1e-6;
};

struct FittedParameter {
  std::string name;
  double value = 0;
  double lower = 0;
  double upper = 0;
  double initial = 0;
};

struct AnchorResidual {
  std::string name;
  double target = 0;
  double value = 0;
  double relative_error = 0;
  double weight = 1.0;
};

struct Calibration {
  std::vector<FittedParameter> parameters;
  std::vector<AnchorResidual> residuals;
  bool converged = false;
  int sweeps = 0;
  double last_step = 0;
  double objective = 0;
};

/// Deterministic coordinate descent in parameter order. A parameter that
/// moves exactly one anchor is solved by bisection on that anchor's residual;
/// otherwise by bisection on the objective's derivative.
/// Throws CalibrationError when a parameter moves no anchor.
Calibration solve(const CalibrationProblem& problem, const CalibrationOptions& options = {});

/// Largest |relative_error| over all anchors.
double max_abs_residual(const Calibration& c);

}  // namespace dram3d
