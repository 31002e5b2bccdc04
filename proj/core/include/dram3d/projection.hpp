#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dram3d/electrical.hpp"
#include "dram3d/topology.hpp"

namespace dram3d {

/// Gb/mm^2. Stacked arrays: one bit per X x Y footprint per layer, scaled by
/// array efficiency. Planar arrays return their stored reference density.
double bit_density(const ArrayConfig& config);

/// um, layers x z_pitch.
double stack_height(const ArrayConfig& config);

/// Smallest layer count whose density reaches `target` Gb/mm^2 (at least 1).
int layers_for_density(const TechnologyProfile& profile, const RoutingTopology& topology,
                       double array_efficiency, double target);

struct ProvenanceEntry {
  std::string parameter;
  double value = 0;
  bool operator==(const ProvenanceEntry&) const = default;
};

/// Everything needed to evaluate one configuration.
struct EvaluationInputs {
  ArrayConfig config;
  OperatingPoint op;
  DisturbWorkload workload;
  TimingModel timing;
  double min_pitch = kDefaultMinPitchUm;
  std::vector<ProvenanceEntry> provenance;
};

/// All derived metrics for one configuration. Units: fF, mV, ns, fJ, um,
/// um^2, Gb/mm^2. Optional fields do not apply to the configuration (e.g.
/// bond pitch of a planar array).
struct EvaluationReport {
  std::string profile;
  Scheme scheme = Scheme::selector_strap;
  std::optional<int> n_layers;
  double v_array = 0;

  double c_bl_effective = 0;
  double sense_margin = 0;
  double margin_after_disturb = 0;
  TimingBreakdown timing;
  double t_rc = 0;
  EnergyBreakdown read;
  EnergyBreakdown write;
  double e_read = 0;
  double e_write = 0;
  std::optional<double> hcb_pitch;
  std::optional<double> blsa_area;
  double bit_density = 0;
  std::optional<double> stack_height;
  std::optional<Feasibility> feasibility;
  std::vector<ProvenanceEntry> provenance;
};

EvaluationReport evaluate(const EvaluationInputs& inputs);

/// Metric names understood by `metric_value` (and by calibration anchors),
/// in report column order.
const std::vector<std::string>& report_metrics();

/// nullopt when the metric does not apply to this report.
std::optional<double> metric_value(const EvaluationReport& report, std::string_view metric);

/// Computes a single metric without building a full report.
double observe_metric(const EvaluationInputs& inputs, std::string_view metric);

struct LayerRange {
  int first = 1;
  int last = 1;
  int step = 1;
};

/// One report per layer count, ordered by layer count. `base.config` must be
/// a stacked array; its layer count is replaced.
std::vector<EvaluationReport> sweep(const EvaluationInputs& base, const LayerRange& range);

struct ComparisonTable {
  std::vector<std::string> labels;
  std::vector<EvaluationReport> reports;
  std::vector<std::string> metrics;
  /// values[row][metric], ratios[row][metric] = value / baseline value.
  std::vector<std::vector<std::optional<double>>> values;
  std::vector<std::vector<std::optional<double>>> ratios;
};

/// Side-by-side metrics with ratios against the first configuration.
ComparisonTable compare_report(const std::vector<EvaluationInputs>& configs);

/// "si3d@137/selector_strap", "d1b".
std::string config_label(const EvaluationReport& report);

}  // namespace dram3d
