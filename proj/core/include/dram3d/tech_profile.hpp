#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dram3d {

enum class Dimensionality { planar2d, stacked3d };
enum class Channel { crystalline_si, epitaxial_si, iwo_aos };

std::string_view to_string(Dimensionality d);
std::string_view to_string(Channel c);
Dimensionality parse_dimensionality(std::string_view s);
Channel parse_channel(std::string_view s);

/// Cell footprint and access-device dimensions, all in nm.
struct CellGeometry {
  double x_pitch = 0;
  double y_pitch = 0;
  std::optional<double> z_pitch;  // per-layer height, stacked3d only
  double gate_length = 0;
  double channel_width = 0;

  bool operator==(const CellGeometry&) const = default;
};

/// Access transistor figures. Currents: i_on in uA, i_off in fA. Voltages in V.
struct AccessTransistor {
  double i_on = 0;
  double i_off = 0;
  double v_th = 0;
  double v_pp = 0;
  double v_bb_wl = 0;
  std::optional<double> v_bb;

  bool operator==(const AccessTransistor&) const = default;
};

/// One technology column: geometry, per-layer bitline parasitics, wordline
/// RC and the access device. Capacitances in fF, resistances in kOhm.
///
/// For planar2d profiles `cbl_per_layer` / `rbl_per_layer` hold the whole
/// bitline (a planar array has one "layer") and `cells_per_bl_fixed` is set.
/// Stacked profiles leave it empty; their bitline holds two cells per layer.
struct TechnologyProfile {
  std::string name;
  Dimensionality dimensionality = Dimensionality::stacked3d;
  Channel channel = Channel::epitaxial_si;
  CellGeometry geometry;
  double cs = 0;
  double cbl_per_layer = 0;
  double rbl_per_layer = 0;
  std::string rbl_material;  // free-text note, not modeled
  double cwl = 0;
  double rwl = 0;
  double cwl_parasitic = 0;
  int cells_per_wl = 0;
  std::optional<int> cells_per_bl_fixed;
  AccessTransistor transistor;

  bool is_3d() const { return dimensionality == Dimensionality::stacked3d; }
  bool operator==(const TechnologyProfile&) const = default;
};

/// d1b, si3d and aos3d, in that order.
const std::vector<TechnologyProfile>& builtin_profiles();

/// Lookup by name among the built-ins; throws PreconditionError if absent.
const TechnologyProfile& builtin_profile(std::string_view name);

/// Throws ValidationError naming the first violated invariant. `path`
/// prefixes the field names in the message.
void validate(const TechnologyProfile& profile, const std::string& path = "");

/// Parse a `{"profiles": [...]}` document. Unknown keys, duplicate names and
/// invariant violations are rejected.
std::vector<TechnologyProfile> load_profiles(std::string_view document);

/// Serialize to the same schema `load_profiles` accepts.
std::string dump_profiles(std::span<const TechnologyProfile> profiles);

/// Planar: the fixed count. Stacked: two cells per layer.
int cells_per_bl(const TechnologyProfile& profile, std::optional<int> n_layers);

}  // namespace dram3d
