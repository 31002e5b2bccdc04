#pragma once

#include "dram3d/tech_profile.hpp"
#include "dram3d/topology.hpp"

namespace dram3d {

/// Array voltages in V. The bitline precharges to v_array / 2.
struct OperatingPoint {
  double v_array = 0;
  double v_pp = 0;
  double v_bb_wl = 0;
};

/// Array swing `v_array` with the wordline levels of `profile`.
OperatingPoint operating_point(const TechnologyProfile& profile, double v_array);

void validate(const OperatingPoint& op);

/// Charge lost per refresh window. Charges per event in aC, window in ms.
struct DisturbWorkload {
  double rh_toggles = 10'000;
  double fbe_cycles = 1.5e6;
  double refresh_window = 64.0;
  double q_rh = 0;
  double q_fbe = 0;
  /// Fraction of the total loss attributed to row hammer when the total is
  /// set through `set_total_charge_loss`.
  double rh_share = 0.5;

  /// aC lost per window.
  double total_charge_loss() const { return rh_toggles * q_rh + fbe_cycles * q_fbe; }
  void set_total_charge_loss(double q_total_ac);
};

void validate(const DisturbWorkload& w);

/// Decomposition of the row cycle into scaled RC stages plus fixed latencies.
/// Factors are dimensionless; t_sense and t_overhead in ns.
struct TimingModel {
  double k_wl = 6.0;
  double k_bl = 6.0;
  double t_sense = 0.3;
  double k_restore = 6.0;
  double t_overhead = 0.0;
};

void validate(const TimingModel& t);

/// Per-stage contributions to tRC, ns.
struct TimingBreakdown {
  double wordline = 0;
  double bitline = 0;
  double sense = 0;
  double restore = 0;
  double overhead = 0;

  double total() const { return wordline + bitline + sense + restore + overhead; }
};

/// mV developed on the bitline by charge sharing a full cell.
double sense_margin(const ArrayConfig& config, const OperatingPoint& op);

/// mV lost at the sense node over one refresh window.
double disturb_margin_loss(const ArrayConfig& config, const DisturbWorkload& workload);

/// mV, floored at zero.
double margin_after_disturb(const ArrayConfig& config, const OperatingPoint& op,
                            const DisturbWorkload& workload);

/// ns, 50% delay of a distributed line driven from one end.
double wordline_delay(const TechnologyProfile& profile);

/// ns, bitline path resistance times effective load.
double bitline_time_constant(const ArrayConfig& config);

/// ns, constant-current slew of the storage node across the full swing.
double restore_time(const ArrayConfig& config, const OperatingPoint& op);

TimingBreakdown row_cycle_time(const ArrayConfig& config, const OperatingPoint& op,
                               const TimingModel& timing);

enum class Access { read, write };

/// fJ per bit.
struct EnergyBreakdown {
  double bitline = 0;
  double wordline_share = 0;

  double total() const { return bitline + wordline_share; }
};

/// Wordline charging energy amortized over the cells on one wordline, fJ.
double wordline_energy_share(const TechnologyProfile& profile, const OperatingPoint& op);

EnergyBreakdown energy_per_bit(const ArrayConfig& config, const OperatingPoint& op, Access access);

/// Distributed-line 50% delay coefficient.
inline constexpr double kElmoreDistributed = 0.38;

}  // namespace dram3d
