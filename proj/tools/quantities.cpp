#include <algorithm>
#include <cmath>

#include "commands.hpp"
#include "dram3d/error.hpp"
#include "dram3d/format.hpp"
#include "dram3d/report.hpp"

namespace dram3d::cli {

namespace {

double metric(const ModelConfig& c, const ConfigRef& at, std::string_view m) {
  return observe_metric(inputs_for(c, at), m);
}

}  // namespace

Quantities reference_quantities(const ModelConfig& c) {
  Quantities q;
  auto add = [&](std::string name, double v) { q.emplace_back(std::move(name), v); };

  for (const char* p : {"si3d", "aos3d"}) {
    for (Scheme s : {Scheme::direct_blsa, Scheme::selector_strap}) {
      add(std::string("hcb_pitch.") + p + "." + std::string(to_string(s)), metric(c, {p, std::nullopt, s}, "hcb_pitch"));
    }
  }
  for (const char* p : {"si3d", "aos3d"}) {
    add(std::string("blsa_area.") + p + ".selector_strap",
        metric(c, {p, std::nullopt, Scheme::selector_strap}, "blsa_area"));
  }
  add("stack_height.si3d@137", metric(c, {"si3d", 137, std::nullopt}, "stack_height"));
  add("stack_height.aos3d@87", metric(c, {"aos3d", 87, std::nullopt}, "stack_height"));
  for (const char* p : {"si3d", "aos3d"}) {
    add(std::string("layers_for_density.") + p,
        layers_for_density(find_profile(c, p), c.topology, array_settings(c, p).array_efficiency, c.target_density));
  }
  add("bit_density.si3d@137", metric(c, {"si3d", 137, std::nullopt}, "bit_density"));
  add("bit_density.aos3d@87", metric(c, {"aos3d", 87, std::nullopt}, "bit_density"));

  add("c_bl_effective.d1b", metric(c, {"d1b", std::nullopt, std::nullopt}, "c_bl_effective"));
  add("c_bl_effective.si3d@72", metric(c, {"si3d", 72, std::nullopt}, "c_bl_effective"));
  add("sense_margin.d1b", metric(c, {"d1b", std::nullopt, std::nullopt}, "sense_margin"));
  {
    // Si at the planar array voltage: no Si-specific fit involved.
    ModelConfig shared = c;
    array_settings(shared, "si3d").v_array = array_settings(c, "d1b").v_array;
    add("sense_margin.si3d@72.shared_v_array", metric(shared, {"si3d", 72, std::nullopt}, "sense_margin"));
  }
  for (const auto& study : c.studies) {
    if (study.name != "per_profile_margin") continue;
    const ModelConfig fitted = apply(c, calibrate(c, study));
    add("sense_margin.si3d@72.per_profile", metric(fitted, {"si3d", 72, std::nullopt}, "sense_margin"));
    add("sense_margin.aos3d@72.per_profile", metric(fitted, {"aos3d", 72, std::nullopt}, "sense_margin"));
    add("v_array.si3d.per_profile", array_settings(fitted, "si3d").v_array);
    add("v_array.aos3d.per_profile", array_settings(fitted, "aos3d").v_array);
  }

  add("margin_after_disturb.si3d@137", metric(c, {"si3d", 137, std::nullopt}, "margin_after_disturb"));
  {
    const auto rows = sweep(inputs_for(c, {"si3d", 10, std::nullopt}), {10, 200, 1});
    bool decreasing = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      decreasing = decreasing && rows[i].margin_after_disturb < rows[i - 1].margin_after_disturb;
    }
    add("margin_after_disturb.si3d.decreasing_10_200", decreasing ? 1.0 : 0.0);
  }

  const double trc_d1b = metric(c, {"d1b", std::nullopt, std::nullopt}, "t_rc");
  const double trc_si = metric(c, {"si3d", 137, std::nullopt}, "t_rc");
  const double trc_aos = metric(c, {"aos3d", 87, std::nullopt}, "t_rc");
  add("t_rc.d1b", trc_d1b);
  add("t_rc.si3d@137", trc_si);
  add("t_rc.aos3d@87", trc_aos);
  add("t_rc_ratio.si3d@137", trc_si / trc_d1b);
  add("t_rc_ratio.aos3d@87", trc_aos / trc_d1b);

  const double e_d1b = metric(c, {"d1b", std::nullopt, std::nullopt}, "e_read_write");
  add("e_write.si3d@137", metric(c, {"si3d", 137, std::nullopt}, "e_write"));
  add("e_read.si3d@137", metric(c, {"si3d", 137, std::nullopt}, "e_read"));
  add("e_write.aos3d@87", metric(c, {"aos3d", 87, std::nullopt}, "e_write"));
  add("e_read.aos3d@87", metric(c, {"aos3d", 87, std::nullopt}, "e_read"));
  add("e_read_write_ratio.si3d@137", metric(c, {"si3d", 137, std::nullopt}, "e_read_write") / e_d1b);
  add("e_read_write_ratio.aos3d@87", metric(c, {"aos3d", 87, std::nullopt}, "e_read_write") / e_d1b);
  return q;
}

std::vector<ExpectedQuantity> default_expected() {
  auto near = [](std::string n, std::string unit, double v, double tol) {
    return ExpectedQuantity{std::move(n), std::move(unit), v, tol, std::nullopt};
  };
  auto at_most = [](std::string n, std::string unit, double v) {
    return ExpectedQuantity{std::move(n), std::move(unit), std::nullopt, std::nullopt, v};
  };
  return {
      near("hcb_pitch.si3d.direct_blsa", "um", 0.26, 0.01),
      near("hcb_pitch.si3d.selector_strap", "um", 0.75, 0.01),
      near("hcb_pitch.aos3d.direct_blsa", "um", 0.22, 0.01),
      near("hcb_pitch.aos3d.selector_strap", "um", 0.62, 0.01),
      near("blsa_area.si3d.selector_strap", "um2", 1.12, 0.01),
      near("blsa_area.aos3d.selector_strap", "um2", 0.76, 0.01),
      near("stack_height.si3d@137", "um", 9.6, 0.05),
      near("stack_height.aos3d@87", "um", 6.9, 0.1),
      near("layers_for_density.si3d", "layers", 137, 0),
      near("layers_for_density.aos3d", "layers", 87, 0),
      near("bit_density.si3d@137", "Gb/mm2", 2.6, 2.6e-6),
      near("bit_density.aos3d@87", "Gb/mm2", 2.6, 2.6e-6),
      near("c_bl_effective.d1b", "fF", 20, 2e-5),
      near("c_bl_effective.si3d@72", "fF", 6.6, 6.6e-6),
      near("sense_margin.d1b", "mV", 54, 5.4e-5),
      near("sense_margin.si3d@72.shared_v_array", "mV", 130, 13),
      near("sense_margin.si3d@72.per_profile", "mV", 130, 1),
      near("sense_margin.aos3d@72.per_profile", "mV", 189, 1),
      near("margin_after_disturb.si3d@137", "mV", 70, 2),
      near("margin_after_disturb.si3d.decreasing_10_200", "flag", 1, 0),
      near("t_rc.d1b", "ns", 21.3, 2.13e-5),
      at_most("t_rc.si3d@137", "ns", 10.9),
      at_most("t_rc.aos3d@87", "ns", 10.5),
      at_most("t_rc_ratio.si3d@137", "", 0.52),
      at_most("t_rc_ratio.aos3d@87", "", 0.52),
      near("e_write.si3d@137", "fJ", 6.26, 0.626),
      near("e_read.si3d@137", "fJ", 1.57, 0.157),
      near("e_write.aos3d@87", "fJ", 5.38, 0.538),
      near("e_read.aos3d@87", "fJ", 1.35, 0.135),
      at_most("e_read_write_ratio.si3d@137", "", 0.5),
      at_most("e_read_write_ratio.aos3d@87", "", 0.5),
  };
}

std::string dump_expected(const std::vector<ExpectedQuantity>& expected) {
  Json list = Json::array();
  for (const auto& e : expected) {
    Json j = Json::object();
    j["name"] = e.name;
    j["unit"] = e.unit;
    if (e.expected) j["expected"] = *e.expected;
    if (e.tolerance) j["tolerance"] = *e.tolerance;
    if (e.max) j["max"] = *e.max;
    list.push_back(std::move(j));
  }
  Json root = Json::object();
  root["quantities"] = std::move(list);
  return dump(root);
}

std::vector<ExpectedQuantity> load_expected(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("quantities") || !root["quantities"].is_array()) {
    throw ValidationError("quantities", "expected an array");
  }
  std::vector<ExpectedQuantity> out;
  const auto& list = root["quantities"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "quantities[" + std::to_string(i) + "]";
    const Json& j = list[i];
    if (!j.is_object()) throw ValidationError(path, "expected an object");
    auto number = [&](const char* key) -> std::optional<double> {
      if (!j.contains(key) || j[key].is_null()) return std::nullopt;
      if (!j[key].is_number()) throw ValidationError(path + "." + key, "expected a number");
      return j[key].get<double>();
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
      static const char* known[] = {"name", "unit", "expected", "tolerance", "max"};
      if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; })) {
        throw ValidationError(path + "." + it.key(), "unknown key");
      }
    }
    if (!j.contains("name") || !j["name"].is_string()) throw ValidationError(path + ".name", "expected a string");
    ExpectedQuantity e;
    e.name = j["name"].get<std::string>();
    e.unit = j.contains("unit") && j["unit"].is_string() ? j["unit"].get<std::string>() : "";
    e.expected = number("expected");
    e.tolerance = number("tolerance");
    e.max = number("max");
    if (e.expected.has_value() == e.max.has_value()) {
      throw ValidationError(path, "exactly one of 'expected' and 'max' is required");
    }
    if (e.tolerance && *e.tolerance < 0) throw ValidationError(path + ".tolerance", "must be >= 0");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CheckResult> check_quantities(const Quantities& q, const std::vector<ExpectedQuantity>& expected) {
  std::vector<CheckResult> out;
  for (const auto& e : expected) {
    CheckResult r{e, std::nullopt, false};
    for (const auto& [name, v] : q) {
      if (name == e.name) r.value = v;
    }
    if (r.value) {
      // Compare what is printed: 6 significant digits.
      const double v = round_significant(*r.value);
      if (e.max) r.pass = v <= *e.max;
      if (e.expected) r.pass = std::abs(v - *e.expected) <= e.tolerance.value_or(0) * (1 + 1e-12);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dram3d::cli
