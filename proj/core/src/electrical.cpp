#include "dram3d/electrical.hpp"

#include <algorithm>

#include "codec.hpp"
#include "dram3d/error.hpp"
#include "dram3d/units.hpp"

namespace dram3d {

using namespace units;

OperatingPoint operating_point(const TechnologyProfile& profile, double v_array) {
  return {v_array, profile.transistor.v_pp, profile.transistor.v_bb_wl};
}

void validate(const OperatingPoint& op) {
  if (!(op.v_array > 0)) throw ValidationError("v_array", "must be > 0");
  if (op.v_pp < op.v_array) throw ValidationError("v_pp", "must be >= v_array");
}

void DisturbWorkload::set_total_charge_loss(double q_total_ac) {
  q_rh = rh_toggles > 0 ? rh_share * q_total_ac / rh_toggles : 0.0;
  q_fbe = fbe_cycles > 0 ? (1.0 - rh_share) * q_total_ac / fbe_cycles : 0.0;
}

void validate(const DisturbWorkload& w) {
  if (w.rh_toggles < 0) throw ValidationError("workload.rh_toggles", "must be >= 0");
  if (w.fbe_cycles < 0) throw ValidationError("workload.fbe_cycles", "must be >= 0");
  if (!(w.refresh_window > 0)) throw ValidationError("workload.refresh_window", "must be > 0");
  if (w.q_rh < 0) throw ValidationError("workload.q_rh", "must be >= 0");
  if (w.q_fbe < 0) throw ValidationError("workload.q_fbe", "must be >= 0");
  if (w.rh_share < 0 || w.rh_share > 1) throw ValidationError("workload.rh_share", "must lie in [0, 1]");
}

void validate(const TimingModel& t) {
  if (t.k_wl < 0) throw ValidationError("timing.k_wl", "must be >= 0");
  if (t.k_bl < 0) throw ValidationError("timing.k_bl", "must be >= 0");
  if (t.t_sense < 0) throw ValidationError("timing.t_sense", "must be >= 0");
  if (t.k_restore < 0) throw ValidationError("timing.k_restore", "must be >= 0");
  if (t.t_overhead < 0) throw ValidationError("timing.t_overhead", "must be >= 0");
}

double sense_margin(const ArrayConfig& config, const OperatingPoint& op) {
  const double cs = fF_to_F(config.profile.cs);
  const double cbl = fF_to_F(effective_bl_capacitance(config));
  return V_to_mV(0.5 * op.v_array * cs / (cs + cbl));
}

double disturb_margin_loss(const ArrayConfig& config, const DisturbWorkload& w) {
  const double q = aC_to_C(w.total_charge_loss());
  const double c_total = fF_to_F(config.profile.cs + effective_bl_capacitance(config));
  return V_to_mV(q / c_total);
}

double margin_after_disturb(const ArrayConfig& config, const OperatingPoint& op,
                            const DisturbWorkload& w) {
  return std::max(0.0, sense_margin(config, op) - disturb_margin_loss(config, w));
}

double wordline_delay(const TechnologyProfile& p) {
  const double r = kohm_to_ohm(p.rwl);
  const double c = fF_to_F(p.cwl + p.cwl_parasitic);
  return s_to_ns(kElmoreDistributed * r * c);
}

double bitline_time_constant(const ArrayConfig& config) {
  const double r = kohm_to_ohm(bl_path_resistance(config));
  const double c = fF_to_F(effective_bl_capacitance(config));
  return s_to_ns(r * c);
}

double restore_time(const ArrayConfig& config, const OperatingPoint& op) {
  const double i_on = uA_to_A(config.profile.transistor.i_on);
  if (!(i_on > 0)) throw PreconditionError("restore_time: i_on must be > 0");
  return s_to_ns(fF_to_F(config.profile.cs) * op.v_array / i_on);
}

TimingBreakdown row_cycle_time(const ArrayConfig& config, const OperatingPoint& op,
                               const TimingModel& timing) {
  TimingBreakdown b;
  b.wordline = timing.k_wl * wordline_delay(config.profile);
  b.bitline = timing.k_bl * bitline_time_constant(config);
  b.sense = timing.t_sense;
  b.restore = timing.k_restore * restore_time(config, op);
  b.overhead = timing.t_overhead;
  return b;
}

double wordline_energy_share(const TechnologyProfile& p, const OperatingPoint& op) {
  const double c = fF_to_F(p.cwl + p.cwl_parasitic);
  return J_to_fJ(c * op.v_pp * op.v_pp / p.cells_per_wl);
}

EnergyBreakdown energy_per_bit(const ArrayConfig& config, const OperatingPoint& op, Access access) {
  const double c = fF_to_F(switched_bl_capacitance(config) + config.profile.cs);
  const double swing = access == Access::write ? op.v_array : 0.5 * op.v_array;
  return {J_to_fJ(c * swing * swing), wordline_energy_share(config.profile, op)};
}

namespace detail {

Json to_json(const DisturbWorkload& w) {
  Json j = Json::object();
  j["rh_toggles"] = w.rh_toggles;
  j["fbe_cycles"] = w.fbe_cycles;
  j["refresh_window"] = w.refresh_window;
  j["q_rh"] = w.q_rh;
  j["q_fbe"] = w.q_fbe;
  j["rh_share"] = w.rh_share;
  return j;
}

DisturbWorkload workload_from_json(const Json& j, const std::string& path) {
  StrictObject o(j, path);
  DisturbWorkload w;
  w.rh_toggles = o.number_or("rh_toggles", w.rh_toggles);
  w.fbe_cycles = o.number_or("fbe_cycles", w.fbe_cycles);
  w.refresh_window = o.number_or("refresh_window", w.refresh_window);
  w.q_rh = o.number_or("q_rh", 0.0);
  w.q_fbe = o.number_or("q_fbe", 0.0);
  w.rh_share = o.number_or("rh_share", w.rh_share);
  o.finish();
  validate(w);
  return w;
}

Json to_json(const TimingModel& t) {
  Json j = Json::object();
  j["k_wl"] = t.k_wl;
  j["k_bl"] = t.k_bl;
  j["t_sense"] = t.t_sense;
  j["k_restore"] = t.k_restore;
  j["t_overhead"] = t.t_overhead;
  return j;
}

TimingModel timing_from_json(const Json& j, const std::string& path) {
  StrictObject o(j, path);
  TimingModel t;
  t.k_wl = o.number_or("k_wl", t.k_wl);
  t.k_bl = o.number_or("k_bl", t.k_bl);
  t.t_sense = o.number_or("t_sense", t.t_sense);
  t.k_restore = o.number_or("k_restore", t.k_restore);
  t.t_overhead = o.number_or("t_overhead", t.t_overhead);
  o.finish();
  validate(t);
  return t;
}

}  // namespace detail

}  // namespace dram3d
