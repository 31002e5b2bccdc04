#include "dram3d/tech_profile.hpp"

#include <set>

#include "codec.hpp"
#include "dram3d/error.hpp"
#include "dram3d/units.hpp"

namespace dram3d {

std::string_view to_string(Dimensionality d) {
  return d == Dimensionality::planar2d ? "planar2d" : "stacked3d";
}

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::crystalline_si: return "crystalline_si";
    case Channel::epitaxial_si: return "epitaxial_si";
    case Channel::iwo_aos: return "iwo_aos";
  }
  return "?";
}

Dimensionality parse_dimensionality(std::string_view s) {
  if (s == "planar2d") return Dimensionality::planar2d;
  if (s == "stacked3d") return Dimensionality::stacked3d;
  throw ValidationError("dimensionality", "unknown value '" + std::string(s) + "'");
}

Channel parse_channel(std::string_view s) {
  if (s == "crystalline_si") return Channel::crystalline_si;
  if (s == "epitaxial_si") return Channel::epitaxial_si;
  if (s == "iwo_aos") return Channel::iwo_aos;
  throw ValidationError("channel", "unknown value '" + std::string(s) + "'");
}

const std::vector<TechnologyProfile>& builtin_profiles() {
  static const std::vector<TechnologyProfile> profiles = [] {
    std::vector<TechnologyProfile> v;

    TechnologyProfile d1b;
    d1b.name = "d1b";
    d1b.dimensionality = Dimensionality::planar2d;
    d1b.channel = Channel::crystalline_si;
    d1b.geometry = {32.6, 37.6, std::nullopt, 120.0, 11.7};
    d1b.cs = 4.0;
    d1b.cbl_per_layer = 25.0;
    d1b.rbl_per_layer = 49.6;
    d1b.cwl = 30.0;
    d1b.rwl = 81.2;
    d1b.cwl_parasitic = 16.2;
    d1b.cells_per_wl = 1024;
    d1b.cells_per_bl_fixed = 1280;
    d1b.transistor = {2.44, 0.2, 0.43, 2.5, -0.3, -0.6};
    v.push_back(d1b);

    TechnologyProfile si;
    si.name = "si3d";
    si.dimensionality = Dimensionality::stacked3d;
    si.channel = Channel::epitaxial_si;
    si.geometry = {349.0, 100.0, 70.0, 100.0, 70.0};
    si.cs = 4.0;
    si.cbl_per_layer = 0.0815;
    si.rbl_per_layer = 0.292;
    si.rbl_material = "N+ p-Si";
    si.cwl = 96.3;
    si.rwl = 8.1;
    si.cwl_parasitic = 42.0;
    si.cells_per_wl = 1024;
    si.transistor = {9.03, 0.02, 0.30, 1.8, -0.3, std::nullopt};
    v.push_back(si);

    TechnologyProfile aos;
    aos.name = "aos3d";
    aos.dimensionality = Dimensionality::stacked3d;
    aos.channel = Channel::iwo_aos;
    aos.geometry = {238.0, 100.0, 80.0, 40.0, 70.0};
    aos.cs = 4.0;
    aos.cbl_per_layer = 0.128;
    aos.rbl_per_layer = 0.0167;
    aos.rbl_material = "TiN/W";
    aos.cwl = 94.4;
    aos.rwl = 19.9;
    aos.cwl_parasitic = 33.2;
    aos.cells_per_wl = 1024;
    aos.transistor = {10.4, 0.02, 0.20, 1.6, -0.6, std::nullopt};
    v.push_back(aos);

    return v;
  }();
  return profiles;
}

const TechnologyProfile& builtin_profile(std::string_view name) {
  for (const auto& p : builtin_profiles()) {
    if (p.name == name) return p;
  }
  throw PreconditionError("no built-in profile named '" + std::string(name) + "'");
}

namespace {

void require(bool ok, const std::string& path, std::string_view field, const std::string& what) {
  if (!ok) throw ValidationError(detail::join_path(path, field), what);
}

}  // namespace

void validate(const TechnologyProfile& p, const std::string& path) {
  require(!p.name.empty(), path, "name", "must not be empty");

  const auto& g = p.geometry;
  require(g.x_pitch > 0, path, "geometry.x_pitch", "must be > 0");
  require(g.y_pitch > 0, path, "geometry.y_pitch", "must be > 0");
  require(g.gate_length > 0, path, "geometry.gate_length", "must be > 0");
  require(g.channel_width > 0, path, "geometry.channel_width", "must be > 0");
  if (p.is_3d()) {
    require(g.z_pitch.has_value(), path, "geometry.z_pitch", "required for stacked3d profiles");
    require(*g.z_pitch > 0, path, "geometry.z_pitch", "must be > 0");
  } else {
    require(!g.z_pitch.has_value(), path, "geometry.z_pitch", "not allowed for planar2d profiles");
  }

  require(p.cs > 0, path, "cs", "must be > 0");
  require(p.cbl_per_layer >= 0, path, "cbl_per_layer", "must be >= 0");
  require(p.cwl >= 0, path, "cwl", "must be >= 0");
  require(p.cwl_parasitic >= 0, path, "cwl_parasitic", "must be >= 0");
  require(p.rbl_per_layer >= 0, path, "rbl_per_layer", "must be >= 0");
  require(p.rwl >= 0, path, "rwl", "must be >= 0");
  require(p.cells_per_wl >= 1, path, "cells_per_wl", "must be >= 1");

  if (p.is_3d()) {
    require(!p.cells_per_bl_fixed.has_value(), path, "cells_per_bl_fixed",
            "not allowed for stacked3d profiles (two cells per layer)");
  } else {
    require(p.cells_per_bl_fixed.has_value(), path, "cells_per_bl_fixed",
            "required for planar2d profiles");
    require(*p.cells_per_bl_fixed >= 1, path, "cells_per_bl_fixed", "must be >= 1");
  }

  const auto& t = p.transistor;
  require(t.i_on > 0, path, "transistor.i_on", "must be > 0");
  require(t.i_off >= 0, path, "transistor.i_off", "must be >= 0");
  require(units::uA_to_A(t.i_on) > units::fA_to_A(t.i_off), path, "transistor.i_on",
          "must exceed i_off");
  require(t.v_th > 0, path, "transistor.v_th", "must be > 0");
  require(t.v_pp > t.v_th, path, "transistor.v_pp", "must exceed v_th");
  require(t.v_bb_wl <= 0, path, "transistor.v_bb_wl", "must be <= 0");
}

namespace detail {

Json to_json(const TechnologyProfile& p) {
  Json geometry = Json::object();
  geometry["x_pitch"] = p.geometry.x_pitch;
  geometry["y_pitch"] = p.geometry.y_pitch;
  if (p.geometry.z_pitch) geometry["z_pitch"] = *p.geometry.z_pitch;
  geometry["gate_length"] = p.geometry.gate_length;
  geometry["channel_width"] = p.geometry.channel_width;

  Json transistor = Json::object();
  transistor["i_on"] = p.transistor.i_on;
  transistor["i_off"] = p.transistor.i_off;
  transistor["v_th"] = p.transistor.v_th;
  transistor["v_pp"] = p.transistor.v_pp;
  transistor["v_bb_wl"] = p.transistor.v_bb_wl;
  if (p.transistor.v_bb) transistor["v_bb"] = *p.transistor.v_bb;

  Json j = Json::object();
  j["name"] = p.name;
  j["dimensionality"] = std::string(to_string(p.dimensionality));
  j["channel"] = std::string(to_string(p.channel));
  j["geometry"] = std::move(geometry);
  j["cs"] = p.cs;
  j["cbl_per_layer"] = p.cbl_per_layer;
  j["rbl_per_layer"] = p.rbl_per_layer;
  if (!p.rbl_material.empty()) j["rbl_material"] = p.rbl_material;
  j["cwl"] = p.cwl;
  j["rwl"] = p.rwl;
  j["cwl_parasitic"] = p.cwl_parasitic;
  j["cells_per_wl"] = p.cells_per_wl;
  if (p.cells_per_bl_fixed) j["cells_per_bl_fixed"] = *p.cells_per_bl_fixed;
  j["transistor"] = std::move(transistor);
  return j;
}

TechnologyProfile profile_from_json(const Json& j, const std::string& path) {
  StrictObject o(j, path);
  TechnologyProfile p;
  p.name = o.string("name");
  try {
    p.dimensionality = parse_dimensionality(o.string("dimensionality"));
    p.channel = parse_channel(o.string("channel"));
  } catch (const ValidationError& e) {
    throw ValidationError(o.field(e.field()), e.reason());
  }

  {
    StrictObject g(o.child("geometry"), o.field("geometry"));
    p.geometry.x_pitch = g.number("x_pitch");
    p.geometry.y_pitch = g.number("y_pitch");
    p.geometry.z_pitch = g.opt_number("z_pitch");
    p.geometry.gate_length = g.number("gate_length");
    p.geometry.channel_width = g.number("channel_width");
    g.finish();
  }

  p.cs = o.number("cs");
  p.cbl_per_layer = o.number("cbl_per_layer");
  p.rbl_per_layer = o.number("rbl_per_layer");
  p.rbl_material = o.opt_string("rbl_material").value_or("");
  p.cwl = o.number("cwl");
  p.rwl = o.number("rwl");
  p.cwl_parasitic = o.number("cwl_parasitic");
  p.cells_per_wl = o.integer("cells_per_wl");
  p.cells_per_bl_fixed = o.opt_integer("cells_per_bl_fixed");

  {
    StrictObject t(o.child("transistor"), o.field("transistor"));
    p.transistor.i_on = t.number("i_on");
    p.transistor.i_off = t.number("i_off");
    p.transistor.v_th = t.number("v_th");
    p.transistor.v_pp = t.number("v_pp");
    p.transistor.v_bb_wl = t.number("v_bb_wl");
    p.transistor.v_bb = t.opt_number("v_bb");
    t.finish();
  }
  o.finish();

  validate(p, path);
  return p;
}

}  // namespace detail

std::vector<TechnologyProfile> load_profiles(std::string_view document) {
  const detail::Json root = detail::parse_document(document);
  detail::StrictObject o(root, "");
  const detail::Json& list = o.child("profiles");
  o.finish();
  return detail::profiles_from_json(list, "profiles");
}

std::string dump_profiles(std::span<const TechnologyProfile> profiles) {
  detail::Json list = detail::Json::array();
  for (const auto& p : profiles) list.push_back(detail::to_json(p));
  detail::Json root = detail::Json::object();
  root["profiles"] = std::move(list);
  return root.dump(2) + "\n";
}

int cells_per_bl(const TechnologyProfile& profile, std::optional<int> n_layers) {
  if (profile.is_3d()) {
    if (!n_layers) {
      throw PreconditionError("profile '" + profile.name + "' is stacked3d: a layer count is required");
    }
    if (*n_layers < 1) throw PreconditionError("layer count must be >= 1");
    return 2 * *n_layers;
  }
  if (n_layers) {
    throw PreconditionError("profile '" + profile.name + "' is planar2d: a layer count is not allowed");
  }
  return *profile.cells_per_bl_fixed;
}

namespace detail {

std::vector<TechnologyProfile> profiles_from_json(const Json& list, const std::string& path) {
  expect_array(list, path);
  std::vector<TechnologyProfile> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string item = path + "[" + std::to_string(i) + "]";
    TechnologyProfile p = profile_from_json(list[i], item);
    if (!names.insert(p.name).second) {
      throw ValidationError(item + ".name", "duplicate profile name '" + p.name + "'");
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

}  // namespace dram3d
