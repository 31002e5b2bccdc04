#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dram3d/calibration.hpp"
#include "dram3d/electrical.hpp"
#include "dram3d/projection.hpp"
#include "dram3d/tech_profile.hpp"
#include "dram3d/topology.hpp"

namespace dram3d {

/// Per-profile array settings (V, fraction, fF, Gb/mm^2, um^2).
struct ArraySettings {
  double v_array = 0.6;
  double array_efficiency = 1.0;
  std::optional<double> c_bl_effective;
  std::optional<double> reference_density;
  std::optional<double> reference_blsa_area;
  bool operator==(const ArraySettings&) const = default;
};

struct SweepDefaults {
  std::string profile = "si3d";
  LayerRange range{10, 200, 1};
};

/// A complete model: profiles, shared topology/workload/timing, per-profile
/// array settings and the calibration sets.
struct ModelConfig {
  std::vector<TechnologyProfile> profiles;
  RoutingTopology topology;
  std::vector<std::pair<std::string, ArraySettings>> arrays;
  DisturbWorkload workload;
  TimingModel timing;
  double min_pitch = kDefaultMinPitchUm;
  /// Layer count used when a stacked profile is referenced without one.
  int default_layers = 72;
  double target_density = 2.6;
  std::vector<ConfigRef> comparison;
  SweepDefaults sweep;
  CalibrationSet calibration;
  std::vector<CalibrationSet> studies;
  /// Parameters set by `apply`; not serialized.
  std::vector<ProvenanceEntry> fitted;
};

/// The shipped model with uncalibrated starting values.
ModelConfig default_config();

ModelConfig load_config(std::string_view json);
ModelConfig load_config_file(const std::filesystem::path& path);
/// Two-space indented JSON with a trailing newline; `load_config` inverts it.
std::string dump_config(const ModelConfig& config);

const TechnologyProfile& find_profile(const ModelConfig& config, std::string_view name);
const ArraySettings& array_settings(const ModelConfig& config, std::string_view profile);
ArraySettings& array_settings(ModelConfig& config, std::string_view profile);

/// Fully specified evaluation inputs for one point. Throws PreconditionError
/// for a layer count on a planar profile.
EvaluationInputs inputs_for(const ModelConfig& config, const ConfigRef& at);

/// Names accepted as free parameters:
///   arrays.<profile>.{v_array,array_efficiency,c_bl_effective}
///   topology.{c_bond,r_bond,c_strap_wire}, topology.selector.c_junction
///   timing.{k_wl,k_bl,k_restore,t_sense,t_overhead}, timing.k_stage (all
///   three factors at once), workload.charge_loss (aC per window)
double get_parameter(const ModelConfig& config, std::string_view name);
void set_parameter(ModelConfig& config, std::string_view name, double value);

/// Fits `set.free` to `set.anchors`, starting from the values in `config`.
Calibration calibrate(const ModelConfig& config, const CalibrationSet& set,
                      const CalibrationOptions& options = {});

/// Copy of `config` with the fitted values written back and recorded as
/// provenance.
ModelConfig apply(const ModelConfig& config, const Calibration& calibration);

}  // namespace dram3d
