#include "dram3d/projection.hpp"

#include <cmath>

#include "dram3d/error.hpp"
#include "dram3d/units.hpp"

namespace dram3d {

namespace {

/// Gb/mm^2 contributed by one layer: bits per nm^2 x 1e12 nm^2/mm^2 / 1e9.
double density_per_layer(const TechnologyProfile& p, double efficiency) {
  return efficiency * 1e3 / (p.geometry.x_pitch * p.geometry.y_pitch);
}

}  // namespace

double bit_density(const ArrayConfig& config) {
  if (!config.profile.is_3d()) {
    if (!config.reference_density) {
      throw PreconditionError("bit_density: planar profile '" + config.profile.name +
                              "' has no reference density");
    }
    return *config.reference_density;
  }
  if (!config.n_layers) throw PreconditionError("bit_density: layer count required");
  return *config.n_layers * density_per_layer(config.profile, config.array_efficiency);
}

double stack_height(const ArrayConfig& config) {
  if (!config.profile.geometry.z_pitch) {
    throw PreconditionError("stack_height: profile '" + config.profile.name + "' has no z_pitch");
  }
  if (!config.n_layers) throw PreconditionError("stack_height: layer count required");
  return *config.n_layers * units::nm_to_um(*config.profile.geometry.z_pitch);
}

int layers_for_density(const TechnologyProfile& profile, const RoutingTopology& /*topology*/,
                       double array_efficiency, double target) {
  if (!(target > 0)) throw PreconditionError("layers_for_density: target must be > 0");
  if (!profile.is_3d()) throw PreconditionError("layers_for_density: stacked profile required");
  if (!(array_efficiency > 0 && array_efficiency <= 1)) {
    throw PreconditionError("layers_for_density: array efficiency must lie in (0, 1]");
  }
  // A calibrated efficiency reproduces the target only to rounding, so a
  // count that misses the target by a relative 1e-9 still qualifies.
  constexpr double kSlack = 1e-9;
  const double per_layer = density_per_layer(profile, array_efficiency);
  int n = static_cast<int>(std::ceil(target / per_layer));
  while (n > 1 && (n - 1) * per_layer >= target * (1 - kSlack)) --n;
  while (n * per_layer < target * (1 - kSlack)) ++n;
  return std::max(n, 1);
}

EvaluationReport evaluate(const EvaluationInputs& in) {
  const ArrayConfig& c = in.config;
  validate(c);
  validate(in.op);
  validate(in.workload);
  validate(in.timing);

  EvaluationReport r;
  r.profile = c.profile.name;
  r.scheme = c.topology.scheme;
  r.n_layers = c.n_layers;
  r.v_array = in.op.v_array;

  r.c_bl_effective = effective_bl_capacitance(c);
  r.sense_margin = sense_margin(c, in.op);
  r.margin_after_disturb = margin_after_disturb(c, in.op, in.workload);
  r.timing = row_cycle_time(c, in.op, in.timing);
  r.t_rc = r.timing.total();
  r.read = energy_per_bit(c, in.op, Access::read);
  r.write = energy_per_bit(c, in.op, Access::write);
  r.e_read = r.read.total();
  r.e_write = r.write.total();
  r.bit_density = bit_density(c);

  if (c.profile.is_3d()) {
    r.hcb_pitch = hcb_pitch(c);
    if (is_strap_family(c.topology.scheme)) r.blsa_area = blsa_area(c);
    r.stack_height = stack_height(c);
    r.feasibility = feasibility(c, in.min_pitch);
  } else {
    r.blsa_area = c.reference_blsa_area;
  }
  r.provenance = in.provenance;
  return r;
}

const std::vector<std::string>& report_metrics() {
  static const std::vector<std::string> names = {
      "c_bl_effective", "sense_margin", "margin_after_disturb", "t_rc",
      "e_read",         "e_write",      "e_read_write",         "hcb_pitch",
      "blsa_area",      "bit_density",  "stack_height"};
  return names;
}

std::optional<double> metric_value(const EvaluationReport& r, std::string_view m) {
  if (m == "c_bl_effective") return r.c_bl_effective;
  if (m == "sense_margin") return r.sense_margin;
  if (m == "margin_after_disturb") return r.margin_after_disturb;
  if (m == "t_rc") return r.t_rc;
  if (m == "e_read") return r.e_read;
  if (m == "e_write") return r.e_write;
  if (m == "e_read_write") return r.e_read + r.e_write;
  if (m == "hcb_pitch") return r.hcb_pitch;
  if (m == "blsa_area") return r.blsa_area;
  if (m == "bit_density") return r.bit_density;
  if (m == "stack_height") return r.stack_height;
  throw PreconditionError("unknown metric '" + std::string(m) + "'");
}

double observe_metric(const EvaluationInputs& in, std::string_view m) {
  const ArrayConfig& c = in.config;
  if (m == "c_bl_effective") return effective_bl_capacitance(c);
  if (m == "sense_margin") return sense_margin(c, in.op);
  if (m == "margin_after_disturb") return margin_after_disturb(c, in.op, in.workload);
  if (m == "t_rc") return row_cycle_time(c, in.op, in.timing).total();
  if (m == "e_read") return energy_per_bit(c, in.op, Access::read).total();
  if (m == "e_write") return energy_per_bit(c, in.op, Access::write).total();
  if (m == "e_read_write") {
    return energy_per_bit(c, in.op, Access::read).total() + energy_per_bit(c, in.op, Access::write).total();
  }
  if (m == "bit_density") return bit_density(c);
  if (m == "hcb_pitch") return hcb_pitch(c);
  if (m == "stack_height") return stack_height(c);
  if (m == "blsa_area") {
    if (!c.profile.is_3d()) {
      if (!c.reference_blsa_area) throw PreconditionError("no reference BLSA area");
      return *c.reference_blsa_area;
    }
    return blsa_area(c);
  }
  throw PreconditionError("unknown metric '" + std::string(m) + "'");
}

std::vector<EvaluationReport> sweep(const EvaluationInputs& base, const LayerRange& range) {
  if (range.step < 1) throw PreconditionError("sweep: step must be >= 1");
  if (range.first < 1 || range.last < range.first) {
    throw PreconditionError("sweep: empty layer range " + std::to_string(range.first) + ".." +
                            std::to_string(range.last));
  }
  if (!base.config.profile.is_3d()) throw PreconditionError("sweep: stacked profile required");
  std::vector<EvaluationReport> rows;
  EvaluationInputs in = base;
  for (int n = range.first; n <= range.last; n += range.step) {
    in.config.n_layers = n;
    rows.push_back(evaluate(in));
  }
  return rows;
}

std::string config_label(const EvaluationReport& r) {
  if (!r.n_layers) return r.profile;
  return r.profile + "@" + std::to_string(*r.n_layers) + "/" + std::string(to_string(r.scheme));
}

ComparisonTable compare_report(const std::vector<EvaluationInputs>& configs) {
  if (configs.size() < 2) throw PreconditionError("compare_report: at least two configurations required");
  ComparisonTable t;
  t.metrics = report_metrics();
  for (const auto& in : configs) {
    t.reports.push_back(evaluate(in));
    t.labels.push_back(config_label(t.reports.back()));
  }
  for (const auto& r : t.reports) {
    std::vector<std::optional<double>> row;
    std::vector<std::optional<double>> ratio;
    for (std::size_t m = 0; m < t.metrics.size(); ++m) {
      const auto v = metric_value(r, t.metrics[m]);
      const auto b = metric_value(t.reports.front(), t.metrics[m]);
      row.push_back(v);
      if (v && b && *b != 0) ratio.push_back(*v / *b); else ratio.push_back(std::nullopt);
    }
    t.values.push_back(std::move(row));
    t.ratios.push_back(std::move(ratio));
  }
  return t;
}

}  // namespace dram3d
