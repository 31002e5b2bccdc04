#pragma once

// Switched linear RC transient solver (modified nodal analysis, backward
// Euler). All quantities are SI: ohms, farads, volts, seconds.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dram3d/electrical.hpp"
#include "dram3d/topology.hpp"

namespace dram3d::sim {

inline constexpr int kGround = 0;

struct Resistor {
  int a = 0;
  int b = 0;
  double ohms = 0;
};

/// Ground-referenced capacitor.
struct Capacitor {
  int node = 0;
  double farads = 0;
  double initial_voltage = 0;
};

struct SwitchEvent {
  double time = 0;
  bool on = false;
};

/// Ideal switch: `on_resistance` when closed, removed when open. Open until
/// the first scheduled event.
struct Switch {
  int a = 0;
  int b = 0;
  double on_resistance = 0;
  std::vector<SwitchEvent> schedule;

  bool state_at(double t) const;
};

struct PwlPoint {
  double time = 0;
  double value = 0;
};

/// Ground-referenced piecewise-linear voltage source, held constant outside
/// its breakpoints.
struct VoltageSource {
  int node = 0;
  std::vector<PwlPoint> waveform;

  double value_at(double t) const;
};

struct RcNetwork {
  int node_count = 1;  // includes ground (node 0)
  std::vector<Resistor> resistors;
  std::vector<Capacitor> capacitors;
  std::vector<Switch> switches;
  std::vector<VoltageSource> sources;

  int add_node() { return node_count++; }
  double total_capacitance() const;

  /// Structural checks; throws ValidationError.
  void validate() const;
};

struct Waveform {
  std::vector<double> times;
  std::vector<int> probes;
  std::vector<std::vector<double>> values;  // values[probe][sample]

  /// Samples of `node`; throws PreconditionError if it was not probed.
  const std::vector<double>& node(int n) const;
  bool has_node(int n) const;
};

/// Integrates from t = 0 to t_end. Steps are `dt` long, shortened where a
/// switch event falls inside a step so that events land on step boundaries.
/// Throws SingularSystemError when a node has no path to a capacitor, a
/// source or ground under the active switch state.
Waveform transient(const RcNetwork& network, double dt, double t_end, std::span<const int> probes);

/// First time after which `node` stays within tolerance x |target - v(0)| of
/// `target`. nullopt when it has not settled by the end of the waveform.
std::optional<double> settle_time(const Waveform& w, int node, double target, double tolerance);

/// Relative change of total stored charge over [t_start, t_end]. The
/// interval must not contain switch events and no source may be connected
/// to a capacitor; the waveform must probe every capacitor node.
double charge_audit(const RcNetwork& network, const Waveform& w, double t_start, double t_end);

/// Bitline charge-sharing network generated from an array configuration.
///
/// Node numbering:
///   0          ground
///   1          sense-amplifier input (c_bond)
///   2          strap node (junction + strap wiring, scheme dependent)
///   3          storage node (cs)
///   4 ...      ladder nodes, ladder j layer k at 4 + j * n_layers + k,
///              layer 0 nearest the strap. Ladder 0 holds the selected cell.
struct BlNetwork {
  RcNetwork network;
  int blsa_node = 1;
  int strap_node = 2;
  int cell_node = 3;
  int ladder_count = 1;
  int layers = 1;
  double precharge = 0;  // V
  double share_time = 0; // s, access switch closes

  int ladder_node(int ladder, int layer) const { return 4 + ladder * layers + layer; }
  std::string describe() const;
};

struct BlNetworkOptions {
  bool cell_high = true;
  double share_time = 0.1e-9;
};

BlNetwork build_bl_network(const ArrayConfig& config, const OperatingPoint& op,
                           const BlNetworkOptions& options = {});

/// Default integration window and step for bitline cross-checks.
inline constexpr double kDefaultHorizon = 42e-9;
inline constexpr double kDefaultStep = 10e-12;

/// mV developed at the sense-amplifier node by the transient simulation.
double simulated_sense_margin(const ArrayConfig& config, const OperatingPoint& op,
                              double dt = kDefaultStep, double t_end = kDefaultHorizon);

std::string dump_netlist(const RcNetwork& network);
RcNetwork load_netlist(std::string_view document);

/// CSV with header `time_s,node_<k>,...`.
std::string waveform_csv(const Waveform& w);

}  // namespace dram3d::sim
