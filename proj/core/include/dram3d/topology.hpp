#pragma once

#include <optional>
#include <string_view>

#include "dram3d/tech_profile.hpp"

namespace dram3d {

/// Bitline routing between the cell array and the bonded CMOS periphery.
enum class Scheme { direct_blsa, bl_strap, core_mux, selector_strap };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view s);
inline constexpr Scheme kAllSchemes[] = {Scheme::direct_blsa, Scheme::bl_strap, Scheme::core_mux,
                                         Scheme::selector_strap};

/// Schemes that share one bond pad among `bls_per_strap` bitlines.
constexpr bool is_strap_family(Scheme s) {
  return s == Scheme::bl_strap || s == Scheme::selector_strap;
}

/// Select transistor between a local bitline and the strap node (also used
/// as the mux device of core_mux). i_on in uA at `drive_voltage` V,
/// width/length in nm, ss in mV/dec, c_junction in fF, r_on in kOhm.
struct SelectorDevice {
  double i_on = 50.0;
  double drive_voltage = 2.0;
  double width = 70.0;
  double length = 50.0;
  double ss = 60.0;
  double c_junction = 0.1;
  std::optional<double> r_on;  // default: drive_voltage / i_on

  /// Effective on-resistance in kOhm.
  double on_resistance() const;
  bool operator==(const SelectorDevice&) const = default;
};

/// Capacitances in fF, resistances in kOhm.
struct RoutingTopology {
  Scheme scheme = Scheme::selector_strap;
  int bls_per_strap = 8;
  int wls_per_strap_driver = 16;
  std::optional<SelectorDevice> selector = SelectorDevice{};
  double c_bond = 0.5;
  double r_bond = 0.05;
  double c_strap_wire = 0.0;

  bool operator==(const RoutingTopology&) const = default;
};

void validate(const RoutingTopology& topology, const std::string& path = "topology");

/// One evaluation point.
struct ArrayConfig {
  TechnologyProfile profile;
  RoutingTopology topology;
  std::optional<int> n_layers;
  double array_efficiency = 1.0;
  /// Measured effective bitline load (fF) used in place of the scheme model.
  /// Intended for planar baselines whose sensing load is an external anchor.
  std::optional<double> c_bl_effective;
  /// Planar baselines only: stored density (Gb/mm^2) and BLSA area (um^2).
  std::optional<double> reference_density;
  std::optional<double> reference_blsa_area;
};

void validate(const ArrayConfig& config);

/// Bitlines sharing one bond pad: 1 for direct_blsa/core_mux,
/// bls_per_strap for the strap family.
int bls_per_pad(const RoutingTopology& topology);

/// fF. Planar: the whole-line table value. Stacked: layers x per-layer value.
double local_bl_capacitance(const ArrayConfig& config);

/// fF seen by the sense amplifier during charge sharing.
double effective_bl_capacitance(const ArrayConfig& config);

/// fF actually swung per access (energy accounting). Same as the effective
/// load, except that a planar `c_bl_effective` override does not apply.
double switched_bl_capacitance(const ArrayConfig& config);

/// kOhm from the cell to the sense-amplifier input.
double bl_path_resistance(const ArrayConfig& config);

/// Hybrid-bond pad pitch in um, pads on a square grid each owning the
/// plan-view footprint of the bitlines it serves.
double hcb_pitch(const ArrayConfig& config);

/// um^2 available to one sense amplifier (two pad footprints).
double blsa_area(const ArrayConfig& config);

struct Feasibility {
  bool feasible = false;
  double margin = 0;  // um, pitch - min_pitch
};

Feasibility feasibility(const ArrayConfig& config, double min_pitch_um);

struct PadCounts {
  long bl_pads = 0;
  long wl_pads = 0;
  bool operator==(const PadCounts&) const = default;
};

PadCounts pad_counts(const ArrayConfig& config, long bank_rows, long bank_cols);

/// Default lower edge of the manufacturable wafer-to-wafer bond pitch window.
inline constexpr double kDefaultMinPitchUm = 0.4;

/// Reference BLSA area of the planar baseline, um^2.
inline constexpr double kD1bBlsaAreaUm2 = 0.44;

}  // namespace dram3d
