#include "dram3d/topology.hpp"

#include <cmath>

#include "codec.hpp"
#include "dram3d/error.hpp"
#include "dram3d/units.hpp"

namespace dram3d {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::direct_blsa: return "direct_blsa";
    case Scheme::bl_strap: return "bl_strap";
    case Scheme::core_mux: return "core_mux";
    case Scheme::selector_strap: return "selector_strap";
  }
  return "?";
}

Scheme parse_scheme(std::string_view s) {
  for (Scheme k : kAllSchemes) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("scheme", "unknown scheme '" + std::string(s) +
                                      "' (expected direct_blsa | bl_strap | core_mux | selector_strap)");
}

double SelectorDevice::on_resistance() const {
  // V / uA = MOhm
  return r_on.value_or(drive_voltage / i_on * units::kKilo);
}

void validate(const RoutingTopology& t, const std::string& path) {
  auto field = [&](std::string_view f) { return detail::join_path(path, f); };
  if (t.bls_per_strap < 1) throw ValidationError(field("bls_per_strap"), "must be >= 1");
  if (t.wls_per_strap_driver < 1) throw ValidationError(field("wls_per_strap_driver"), "must be >= 1");
  if (t.c_bond < 0) throw ValidationError(field("c_bond"), "must be >= 0");
  if (t.r_bond < 0) throw ValidationError(field("r_bond"), "must be >= 0");
  if (t.c_strap_wire < 0) throw ValidationError(field("c_strap_wire"), "must be >= 0");
  if ((t.scheme == Scheme::selector_strap || t.scheme == Scheme::core_mux) && !t.selector) {
    throw ValidationError(field("selector"), std::string("required for scheme ") +
                                                 std::string(to_string(t.scheme)));
  }
  if (t.selector) {
    const auto& s = *t.selector;
    if (s.i_on <= 0) throw ValidationError(field("selector.i_on"), "must be > 0");
    if (s.drive_voltage <= 0) throw ValidationError(field("selector.drive_voltage"), "must be > 0");
    if (s.width <= 0) throw ValidationError(field("selector.width"), "must be > 0");
    if (s.length <= 0) throw ValidationError(field("selector.length"), "must be > 0");
    if (s.ss < 60.0) throw ValidationError(field("selector.ss"), "must be >= 60 mV/dec");
    if (s.c_junction < 0) throw ValidationError(field("selector.c_junction"), "must be >= 0");
    if (s.on_resistance() <= 0) throw ValidationError(field("selector.r_on"), "must be > 0");
  }
}

void validate(const ArrayConfig& c) {
  validate(c.profile, "profile");
  validate(c.topology);
  if (c.profile.is_3d()) {
    if (!c.n_layers) {
      throw PreconditionError("profile '" + c.profile.name + "' is stacked3d: a layer count is required");
    }
    if (*c.n_layers < 1) throw ValidationError("n_layers", "must be >= 1");
  } else if (c.n_layers) {
    throw PreconditionError("profile '" + c.profile.name +
                            "' is planar2d: a layer count is not allowed");
  }
  if (!(c.array_efficiency > 0 && c.array_efficiency <= 1)) {
    throw ValidationError("array_efficiency", "must lie in (0, 1]");
  }
  if (c.c_bl_effective && *c.c_bl_effective < 0) {
    throw ValidationError("c_bl_effective", "must be >= 0");
  }
}

int bls_per_pad(const RoutingTopology& t) {
  return is_strap_family(t.scheme) ? t.bls_per_strap : 1;
}

double local_bl_capacitance(const ArrayConfig& c) {
  if (!c.profile.is_3d()) return c.profile.cbl_per_layer;
  return *c.n_layers * c.profile.cbl_per_layer;
}

namespace {

double junction(const RoutingTopology& t) {
  return t.selector ? t.selector->c_junction : 0.0;
}

double scheme_capacitance(const ArrayConfig& c) {
  const double local = local_bl_capacitance(c);
  if (!c.profile.is_3d()) return local;  // no bonded periphery
  const auto& t = c.topology;
  switch (t.scheme) {
    case Scheme::direct_blsa: return local + t.c_bond;
    case Scheme::core_mux: return local + t.c_bond + junction(t);
    case Scheme::bl_strap: return t.bls_per_strap * local + t.c_strap_wire + t.c_bond;
    case Scheme::selector_strap: return local + junction(t) + t.c_strap_wire + t.c_bond;
  }
  return local;
}

void require_3d(const ArrayConfig& c, std::string_view op) {
  if (!c.profile.is_3d()) {
    throw PreconditionError(std::string(op) + " applies to bonded stacked arrays; profile '" +
                            c.profile.name + "' is planar2d");
  }
  if (!c.n_layers || *c.n_layers < 1) {
    throw PreconditionError(std::string(op) + ": a layer count >= 1 is required");
  }
}

/// um^2 of plan-view array served by one pad.
double pad_footprint_um2(const ArrayConfig& c) {
  const auto& g = c.profile.geometry;
  return bls_per_pad(c.topology) * 2.0 * units::nm_to_um(g.x_pitch) * units::nm_to_um(g.y_pitch);
}

}  // namespace

double effective_bl_capacitance(const ArrayConfig& c) {
  if (c.c_bl_effective) return *c.c_bl_effective;
  return scheme_capacitance(c);
}

double switched_bl_capacitance(const ArrayConfig& c) {
  return scheme_capacitance(c);
}

double bl_path_resistance(const ArrayConfig& c) {
  if (!c.profile.is_3d()) return c.profile.rbl_per_layer;
  const auto& t = c.topology;
  double r = *c.n_layers * c.profile.rbl_per_layer + t.r_bond;
  if ((t.scheme == Scheme::selector_strap || t.scheme == Scheme::core_mux) && t.selector) {
    r += t.selector->on_resistance();
  }
  return r;
}

double hcb_pitch(const ArrayConfig& c) {
  require_3d(c, "hcb_pitch");
  return std::sqrt(pad_footprint_um2(c));
}

double blsa_area(const ArrayConfig& c) {
  if (!c.profile.is_3d()) {
    throw PreconditionError("blsa_area is computed for bonded stacked arrays only; profile '" +
                            c.profile.name + "' carries a reference value");
  }
  require_3d(c, "blsa_area");
  if (!is_strap_family(c.topology.scheme)) {
    throw PreconditionError("blsa_area requires a strap-family scheme, got " +
                            std::string(to_string(c.topology.scheme)));
  }
  return 2.0 * pad_footprint_um2(c);
}

Feasibility feasibility(const ArrayConfig& c, double min_pitch_um) {
  if (!(min_pitch_um > 0)) throw PreconditionError("min_pitch must be > 0");
  const double pitch = hcb_pitch(c);
  return {pitch >= min_pitch_um, pitch - min_pitch_um};
}

PadCounts pad_counts(const ArrayConfig& c, long bank_rows, long bank_cols) {
  if (bank_rows < 1 || bank_cols < 1) throw PreconditionError("bank dimensions must be >= 1");
  const long per_pad = bls_per_pad(c.topology);
  const long per_driver = c.topology.wls_per_strap_driver;
  return {(bank_cols + per_pad - 1) / per_pad, (bank_rows + per_driver - 1) / per_driver};
}

namespace detail {

Json to_json(const RoutingTopology& t) {
  Json j = Json::object();
  j["scheme"] = std::string(to_string(t.scheme));
  j["bls_per_strap"] = t.bls_per_strap;
  j["wls_per_strap_driver"] = t.wls_per_strap_driver;
  if (t.selector) {
    Json s = Json::object();
    s["i_on"] = t.selector->i_on;
    s["drive_voltage"] = t.selector->drive_voltage;
    s["width"] = t.selector->width;
    s["length"] = t.selector->length;
    s["ss"] = t.selector->ss;
    s["c_junction"] = t.selector->c_junction;
    if (t.selector->r_on) s["r_on"] = *t.selector->r_on;
    j["selector"] = std::move(s);
  }
  j["c_bond"] = t.c_bond;
  j["r_bond"] = t.r_bond;
  j["c_strap_wire"] = t.c_strap_wire;
  return j;
}

RoutingTopology topology_from_json(const Json& j, const std::string& path) {
  StrictObject o(j, path);
  RoutingTopology t;
  try {
    t.scheme = parse_scheme(o.string("scheme"));
  } catch (const ValidationError& e) {
    throw ValidationError(o.field("scheme"), e.reason());
  }
  t.bls_per_strap = o.opt_integer("bls_per_strap").value_or(8);
  t.wls_per_strap_driver = o.opt_integer("wls_per_strap_driver").value_or(16);
  if (const Json* s = o.opt_child("selector")) {
    StrictObject so(*s, o.field("selector"));
    SelectorDevice d;
    d.i_on = so.number("i_on");
    d.drive_voltage = so.number("drive_voltage");
    d.width = so.number("width");
    d.length = so.number("length");
    d.ss = so.number("ss");
    d.c_junction = so.number_or("c_junction", 0.0);
    d.r_on = so.opt_number("r_on");
    so.finish();
    t.selector = d;
  } else {
    t.selector.reset();
  }
  t.c_bond = o.number_or("c_bond", 0.0);
  t.r_bond = o.number_or("r_bond", 0.0);
  t.c_strap_wire = o.number_or("c_strap_wire", 0.0);
  o.finish();
  validate(t, path);
  return t;
}

}  // namespace detail

}  // namespace dram3d
