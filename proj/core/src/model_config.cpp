#include "dram3d/model_config.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include "codec.hpp"
#include "dram3d/error.hpp"
#include "json_util.hpp"

namespace dram3d {

using detail::Json;
using detail::StrictObject;

namespace {

CalibrationAnchor anchor(std::string name, std::string metric, std::string profile,
                         std::optional<int> layers, double target, std::string unit) {
  CalibrationAnchor a;
  a.name = std::move(name);
  a.observable.metric = std::move(metric);
  a.observable.at.profile = std::move(profile);
  a.observable.at.layers = layers;
  a.target = target;
  a.unit = std::move(unit);
  return a;
}

}  // namespace

ModelConfig default_config() {
  ModelConfig c;
  c.profiles = builtin_profiles();

  ArraySettings d1b;
  d1b.v_array = 0.6;
  d1b.c_bl_effective = 25.0;
  d1b.reference_density = 0.4333;
  d1b.reference_blsa_area = kD1bBlsaAreaUm2;
  ArraySettings si;
  si.array_efficiency = 0.7;
  ArraySettings aos;
  aos.array_efficiency = 0.7;
  c.arrays = {{"d1b", d1b}, {"si3d", si}, {"aos3d", aos}};

  c.comparison = {{"d1b", std::nullopt, std::nullopt},
                  {"si3d", 137, std::nullopt},
                  {"aos3d", 87, std::nullopt}};

  c.calibration.name = "reference";
  c.calibration.anchors = {
      anchor("d1b_effective_cbl", "c_bl_effective", "d1b", std::nullopt, 20.0, "fF"),
      anchor("d1b_sense_margin", "sense_margin", "d1b", std::nullopt, 54.0, "mV"),
      anchor("si3d_strap_effective_cbl", "c_bl_effective", "si3d", 72, 6.6, "fF"),
      anchor("si3d_density", "bit_density", "si3d", 137, 2.6, "Gb/mm2"),
      anchor("aos3d_density", "bit_density", "aos3d", 87, 2.6, "Gb/mm2"),
      anchor("si3d_write_energy", "e_write", "si3d", 137, 6.26, "fJ"),
      anchor("si3d_read_energy", "e_read", "si3d", 137, 1.57, "fJ"),
      anchor("aos3d_write_energy", "e_write", "aos3d", 87, 5.38, "fJ"),
      anchor("aos3d_read_energy", "e_read", "aos3d", 87, 1.35, "fJ"),
      anchor("si3d_disturbed_margin", "margin_after_disturb", "si3d", 137, 70.0, "mV"),
      anchor("d1b_row_cycle", "t_rc", "d1b", std::nullopt, 21.3, "ns"),
  };
  c.calibration.free = {
      {"arrays.d1b.c_bl_effective", 1.0, 100.0},
      {"arrays.d1b.v_array", 0.1, 2.5},
      {"topology.c_bond", 0.0, 10.0},
      {"arrays.si3d.array_efficiency", 0.05, 1.0},
      {"arrays.aos3d.array_efficiency", 0.05, 1.0},
      {"arrays.si3d.v_array", 0.1, 1.8},
      {"arrays.aos3d.v_array", 0.1, 1.6},
      {"workload.charge_loss", 0.0, 1e5},
      {"timing.k_stage", 0.0, 100.0},
  };

  CalibrationSet margins;
  margins.name = "per_profile_margin";
  margins.anchors = {
      anchor("si3d_strap_margin", "sense_margin", "si3d", 72, 130.0, "mV"),
      anchor("aos3d_strap_margin", "sense_margin", "aos3d", 72, 189.0, "mV"),
  };
  margins.free = {{"arrays.si3d.v_array", 0.1, 1.8}, {"arrays.aos3d.v_array", 0.1, 1.6}};
  c.studies = {margins};
  return c;
}

const TechnologyProfile& find_profile(const ModelConfig& c, std::string_view name) {
  for (const auto& p : c.profiles) {
    if (p.name == name) return p;
  }
  throw ValidationError("profile", "unknown profile '" + std::string(name) + "'");
}

const ArraySettings& array_settings(const ModelConfig& c, std::string_view profile) {
  for (const auto& [name, s] : c.arrays) {
    if (name == profile) return s;
  }
  throw ValidationError("arrays." + std::string(profile), "no array settings for this profile");
}

ArraySettings& array_settings(ModelConfig& c, std::string_view profile) {
  return const_cast<ArraySettings&>(array_settings(std::as_const(c), profile));
}

EvaluationInputs inputs_for(const ModelConfig& c, const ConfigRef& at) {
  const TechnologyProfile& p = find_profile(c, at.profile);
  const ArraySettings& s = array_settings(c, at.profile);
  EvaluationInputs in;
  in.config.profile = p;
  in.config.topology = c.topology;
  if (at.scheme) in.config.topology.scheme = *at.scheme;
  if (p.is_3d()) {
    in.config.n_layers = at.layers.value_or(c.default_layers);
  } else if (at.layers) {
    throw PreconditionError("profile '" + p.name + "' is planar2d: a layer count is not allowed");
  }
  in.config.array_efficiency = s.array_efficiency;
  in.config.c_bl_effective = s.c_bl_effective;
  in.config.reference_density = s.reference_density;
  in.config.reference_blsa_area = s.reference_blsa_area;
  in.op = operating_point(p, s.v_array);
  in.workload = c.workload;
  in.timing = c.timing;
  in.min_pitch = c.min_pitch;
  in.provenance = c.fitted;
  return in;
}

// Parameters ----------------------------------------------------------------

namespace {

struct ParameterName {
  std::string group;
  std::string profile;  // arrays only
  std::string field;
};

ParameterName split(std::string_view name) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : name) {
    if (ch == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() == 3 && parts[0] == "arrays") return {parts[0], parts[1], parts[2]};
  if (parts.size() == 3 && parts[0] == "topology" && parts[1] == "selector") {
    return {"topology", "", "selector." + parts[2]};
  }
  if (parts.size() == 2) return {parts[0], "", parts[1]};
  throw ValidationError("parameter", "unknown parameter '" + std::string(name) + "'");
}

double* parameter_slot(ModelConfig& c, std::string_view name) {
  const ParameterName n = split(name);
  if (n.group == "arrays") {
    ArraySettings& s = array_settings(c, n.profile);
    if (n.field == "v_array") return &s.v_array;
    if (n.field == "array_efficiency") return &s.array_efficiency;
    if (n.field == "c_bl_effective") {
      if (!s.c_bl_effective) {
        throw ValidationError("parameter", "'" + std::string(name) + "' has no value to fit");
      }
      return &*s.c_bl_effective;
    }
  } else if (n.group == "topology") {
    if (n.field == "c_bond") return &c.topology.c_bond;
    if (n.field == "r_bond") return &c.topology.r_bond;
    if (n.field == "c_strap_wire") return &c.topology.c_strap_wire;
    if (n.field == "selector.c_junction") {
      if (!c.topology.selector) throw ValidationError("parameter", "topology has no selector");
      return &c.topology.selector->c_junction;
    }
  } else if (n.group == "timing") {
    if (n.field == "k_wl" || n.field == "k_stage") return &c.timing.k_wl;
    if (n.field == "k_bl") return &c.timing.k_bl;
    if (n.field == "k_restore") return &c.timing.k_restore;
    if (n.field == "t_sense") return &c.timing.t_sense;
    if (n.field == "t_overhead") return &c.timing.t_overhead;
  }
  throw ValidationError("parameter", "unknown parameter '" + std::string(name) + "'");
}

}  // namespace

double get_parameter(const ModelConfig& c, std::string_view name) {
  if (name == "workload.charge_loss") return c.workload.total_charge_loss();
  return *parameter_slot(const_cast<ModelConfig&>(c), name);
}

void set_parameter(ModelConfig& c, std::string_view name, double value) {
  if (name == "workload.charge_loss") {
    c.workload.set_total_charge_loss(value);
    return;
  }
  *parameter_slot(c, name) = value;
  if (name == "timing.k_stage") c.timing.k_bl = c.timing.k_restore = value;
}

// Calibration adapter ---------------------------------------------------------

Calibration calibrate(const ModelConfig& config, const CalibrationSet& set,
                      const CalibrationOptions& options) {
  for (std::size_t i = 0; i < set.anchors.size(); ++i) {
    validate(set.anchors[i], "calibration.anchors[" + std::to_string(i) + "]");
  }
  CalibrationProblem problem;
  for (std::size_t i = 0; i < set.free.size(); ++i) {
    const FreeParameter& f = set.free[i];
    validate(f, "calibration.free[" + std::to_string(i) + "]");
    problem.parameters.push_back({f.name, get_parameter(config, f.name), f.lower, f.upper});
  }
  for (const auto& a : set.anchors) {
    problem.anchor_names.push_back(a.name);
    problem.targets.push_back(a.target);
    problem.weights.push_back(a.weight);
  }
  auto work = std::make_shared<ModelConfig>(config);
  problem.observe = [work, &set](const std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) set_parameter(*work, set.free[i].name, x[i]);
    std::vector<double> out;
    out.reserve(set.anchors.size());
    for (const auto& a : set.anchors) {
      out.push_back(observe_metric(inputs_for(*work, a.observable.at), a.observable.metric));
    }
    return out;
  };
  return solve(problem, options);
}

ModelConfig apply(const ModelConfig& config, const Calibration& calibration) {
  ModelConfig out = config;
  for (const auto& p : calibration.parameters) {
    set_parameter(out, p.name, p.value);
    auto it = std::find_if(out.fitted.begin(), out.fitted.end(),
                           [&](const ProvenanceEntry& e) { return e.parameter == p.name; });
    if (it != out.fitted.end()) it->value = p.value; else out.fitted.push_back({p.name, p.value});
  }
  return out;
}

// JSON ---------------------------------------------------------------------

namespace {

Json ref_fields(const ConfigRef& r, Json j) {
  j["profile"] = r.profile;
  if (r.layers) j["layers"] = *r.layers;
  if (r.scheme) j["scheme"] = std::string(to_string(*r.scheme));
  return j;
}

ConfigRef read_ref(StrictObject& o) {
  ConfigRef r;
  r.profile = o.string("profile");
  r.layers = o.opt_integer("layers");
  if (auto s = o.opt_string("scheme")) {
    try {
      r.scheme = parse_scheme(*s);
    } catch (const ValidationError& e) {
      throw ValidationError(o.field("scheme"), e.reason());
    }
  }
  return r;
}

Json to_json(const CalibrationSet& s, bool with_name) {
  Json j = Json::object();
  if (with_name) j["name"] = s.name;
  Json anchors = Json::array();
  for (const auto& a : s.anchors) {
    Json obs = Json::object();
    obs["metric"] = a.observable.metric;
    obs = ref_fields(a.observable.at, std::move(obs));
    Json aj = Json::object();
    aj["name"] = a.name;
    aj["observable"] = std::move(obs);
    aj["target"] = a.target;
    aj["unit"] = a.unit;
    aj["weight"] = a.weight;
    anchors.push_back(std::move(aj));
  }
  j["anchors"] = std::move(anchors);
  Json free = Json::array();
  for (const auto& f : s.free) {
    Json fj = Json::object();
    fj["name"] = f.name;
    fj["lower"] = f.lower;
    fj["upper"] = f.upper;
    free.push_back(std::move(fj));
  }
  j["free"] = std::move(free);
  return j;
}

CalibrationSet calibration_set_from_json(StrictObject& o) {
  CalibrationSet s;
  if (const Json* anchors = o.opt_child("anchors")) {
    const std::string path = o.field("anchors");
    detail::expect_array(*anchors, path);
    for (std::size_t i = 0; i < anchors->size(); ++i) {
      const std::string ap = path + "[" + std::to_string(i) + "]";
      StrictObject ao((*anchors)[i], ap);
      CalibrationAnchor a;
      a.name = ao.string("name");
      StrictObject obs(ao.child("observable"), ao.field("observable"));
      a.observable.metric = obs.string("metric");
      a.observable.at = read_ref(obs);
      obs.finish();
      const auto& metrics = report_metrics();
      if (std::find(metrics.begin(), metrics.end(), a.observable.metric) == metrics.end()) {
        throw ValidationError(obs.field("metric"), "unknown metric '" + a.observable.metric + "'");
      }
      a.target = ao.number("target");
      a.unit = ao.opt_string("unit").value_or("");
      a.weight = ao.number_or("weight", 1.0);
      ao.finish();
      validate(a, ap);
      s.anchors.push_back(std::move(a));
    }
  }
  if (const Json* free = o.opt_child("free")) {
    const std::string path = o.field("free");
    detail::expect_array(*free, path);
    for (std::size_t i = 0; i < free->size(); ++i) {
      const std::string fp = path + "[" + std::to_string(i) + "]";
      StrictObject fo((*free)[i], fp);
      FreeParameter f;
      f.name = fo.string("name");
      f.lower = fo.number("lower");
      f.upper = fo.number("upper");
      fo.finish();
      validate(f, fp);
      s.free.push_back(std::move(f));
    }
  }
  return s;
}

void check_references(const ModelConfig& c) {
  for (std::size_t i = 0; i < c.arrays.size(); ++i) {
    const std::string& name = c.arrays[i].first;
    find_profile(c, name);
    for (std::size_t k = 0; k < i; ++k) {
      if (c.arrays[k].first == name) throw ValidationError("arrays." + name, "duplicate entry");
    }
  }
  auto check_ref = [&](const ConfigRef& r, const std::string& path) {
    try {
      const TechnologyProfile& p = find_profile(c, r.profile);
      array_settings(c, r.profile);
      if (!p.is_3d() && r.layers) throw ValidationError(path + ".layers", "not allowed for a planar profile");
      if (r.layers && *r.layers < 1) throw ValidationError(path + ".layers", "must be >= 1");
    } catch (const ValidationError& e) {
      if (e.field() == "profile" || e.field().rfind("arrays.", 0) == 0) {
        throw ValidationError(path + ".profile", e.reason());
      }
      throw;
    }
  };
  for (std::size_t i = 0; i < c.comparison.size(); ++i) {
    check_ref(c.comparison[i], "comparison[" + std::to_string(i) + "]");
  }
  auto check_set = [&](const CalibrationSet& s, const std::string& path) {
    for (std::size_t i = 0; i < s.anchors.size(); ++i) {
      check_ref(s.anchors[i].observable.at, path + ".anchors[" + std::to_string(i) + "].observable");
    }
    ModelConfig probe = c;
    for (std::size_t i = 0; i < s.free.size(); ++i) {
      try {
        get_parameter(probe, s.free[i].name);
      } catch (const ValidationError& e) {
        throw ValidationError(path + ".free[" + std::to_string(i) + "].name", e.reason());
      }
    }
  };
  check_set(c.calibration, "calibration");
  for (std::size_t i = 0; i < c.studies.size(); ++i) {
    check_set(c.studies[i], "calibration.studies[" + std::to_string(i) + "]");
  }
  {
    const TechnologyProfile& p = find_profile(c, c.sweep.profile);
    if (!p.is_3d()) throw ValidationError("sweep.profile", "a stacked profile is required");
  }
}

}  // namespace

std::string dump_config(const ModelConfig& c) {
  Json j = Json::object();
  Json profiles = Json::array();
  for (const auto& p : c.profiles) profiles.push_back(detail::to_json(p));
  j["profiles"] = std::move(profiles);
  j["topology"] = detail::to_json(c.topology);
  Json arrays = Json::object();
  for (const auto& [name, s] : c.arrays) {
    Json a = Json::object();
    a["v_array"] = s.v_array;
    a["array_efficiency"] = s.array_efficiency;
    if (s.c_bl_effective) a["c_bl_effective"] = *s.c_bl_effective;
    if (s.reference_density) a["reference_density"] = *s.reference_density;
    if (s.reference_blsa_area) a["reference_blsa_area"] = *s.reference_blsa_area;
    arrays[name] = std::move(a);
  }
  j["arrays"] = std::move(arrays);
  j["workload"] = detail::to_json(c.workload);
  j["timing"] = detail::to_json(c.timing);
  j["min_pitch"] = c.min_pitch;
  j["default_layers"] = c.default_layers;
  j["target_density"] = c.target_density;
  Json comparison = Json::array();
  for (const auto& r : c.comparison) comparison.push_back(ref_fields(r, Json::object()));
  j["comparison"] = std::move(comparison);
  Json sweep = Json::object();
  sweep["profile"] = c.sweep.profile;
  sweep["from"] = c.sweep.range.first;
  sweep["to"] = c.sweep.range.last;
  sweep["step"] = c.sweep.range.step;
  j["sweep"] = std::move(sweep);
  Json cal = to_json(c.calibration, false);
  Json studies = Json::array();
  for (const auto& s : c.studies) studies.push_back(to_json(s, true));
  cal["studies"] = std::move(studies);
  j["calibration"] = std::move(cal);
  return j.dump(2) + "\n";
}

ModelConfig load_config(std::string_view text) {
  const Json doc = detail::parse_document(text);
  StrictObject o(doc, "");
  ModelConfig c;
  if (const Json* profiles = o.opt_child("profiles")) {
    c.profiles = detail::profiles_from_json(*profiles, "profiles");
  } else {
    c.profiles = builtin_profiles();
  }
  if (const Json* t = o.opt_child("topology")) c.topology = detail::topology_from_json(*t, "topology");
  {
    StrictObject arrays(o.child("arrays"), "arrays");
    for (auto it = o.child("arrays").begin(); it != o.child("arrays").end(); ++it) {
      StrictObject a(*arrays.opt_child(it.key()), arrays.field(it.key()));
      ArraySettings s;
      s.v_array = a.number("v_array");
      s.array_efficiency = a.number_or("array_efficiency", 1.0);
      s.c_bl_effective = a.opt_number("c_bl_effective");
      s.reference_density = a.opt_number("reference_density");
      s.reference_blsa_area = a.opt_number("reference_blsa_area");
      a.finish();
      if (!(s.v_array > 0)) throw ValidationError(a.field("v_array"), "must be > 0");
      if (!(s.array_efficiency > 0 && s.array_efficiency <= 1)) {
        throw ValidationError(a.field("array_efficiency"), "must lie in (0, 1]");
      }
      if (s.c_bl_effective && !(*s.c_bl_effective > 0)) {
        throw ValidationError(a.field("c_bl_effective"), "must be > 0");
      }
      c.arrays.emplace_back(it.key(), s);
    }
    arrays.finish();
  }
  if (const Json* w = o.opt_child("workload")) c.workload = detail::workload_from_json(*w, "workload");
  if (const Json* t = o.opt_child("timing")) c.timing = detail::timing_from_json(*t, "timing");
  c.min_pitch = o.number_or("min_pitch", kDefaultMinPitchUm);
  if (!(c.min_pitch > 0)) throw ValidationError("min_pitch", "must be > 0");
  c.default_layers = o.opt_integer("default_layers").value_or(c.default_layers);
  if (c.default_layers < 1) throw ValidationError("default_layers", "must be >= 1");
  c.target_density = o.number_or("target_density", c.target_density);
  if (!(c.target_density > 0)) throw ValidationError("target_density", "must be > 0");
  if (const Json* cmp = o.opt_child("comparison")) {
    detail::expect_array(*cmp, "comparison");
    for (std::size_t i = 0; i < cmp->size(); ++i) {
      StrictObject r((*cmp)[i], "comparison[" + std::to_string(i) + "]");
      c.comparison.push_back(read_ref(r));
      r.finish();
    }
  }
  if (const Json* sw = o.opt_child("sweep")) {
    StrictObject s(*sw, "sweep");
    c.sweep.profile = s.opt_string("profile").value_or(c.sweep.profile);
    c.sweep.range.first = s.opt_integer("from").value_or(c.sweep.range.first);
    c.sweep.range.last = s.opt_integer("to").value_or(c.sweep.range.last);
    c.sweep.range.step = s.opt_integer("step").value_or(c.sweep.range.step);
    s.finish();
  }
  if (const Json* cal = o.opt_child("calibration")) {
    StrictObject co(*cal, "calibration");
    c.calibration = calibration_set_from_json(co);
    c.calibration.name = "reference";
    if (const Json* studies = co.opt_child("studies")) {
      detail::expect_array(*studies, "calibration.studies");
      for (std::size_t i = 0; i < studies->size(); ++i) {
        StrictObject so((*studies)[i], "calibration.studies[" + std::to_string(i) + "]");
        const std::string name = so.string("name");
        CalibrationSet s = calibration_set_from_json(so);
        s.name = name;
        so.finish();
        c.studies.push_back(std::move(s));
      }
    }
    co.finish();
  }
  o.finish();
  check_references(c);
  return c;
}

ModelConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config", "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

}  // namespace dram3d
