#pragma once

// Conversion factors between the table units used in profiles and config
// files (nm, fF, kOhm, uA, fA, V) and SI. Model code converts on entry and
// converts back to reporting units on exit.

namespace dram3d::units {

inline constexpr double kNano = 1e-9;
inline constexpr double kMicro = 1e-6;
inline constexpr double kMilli = 1e-3;
inline constexpr double kFemto = 1e-15;
inline constexpr double kAtto = 1e-18;
inline constexpr double kKilo = 1e3;

constexpr double nm_to_m(double nm) { return nm * kNano; }
constexpr double nm_to_um(double nm) { return nm * 1e-3; }
constexpr double fF_to_F(double ff) { return ff * kFemto; }
constexpr double F_to_fF(double f) { return f / kFemto; }
constexpr double kohm_to_ohm(double kohm) { return kohm * kKilo; }
constexpr double ohm_to_kohm(double ohm) { return ohm / kKilo; }
constexpr double uA_to_A(double ua) { return ua * kMicro; }
constexpr double fA_to_A(double fa) { return fa * kFemto; }
constexpr double aC_to_C(double ac) { return ac * kAtto; }
constexpr double V_to_mV(double v) { return v / kMilli; }
constexpr double s_to_ns(double s) { return s / kNano; }
constexpr double ns_to_s(double ns) { return ns * kNano; }
constexpr double J_to_fJ(double j) { return j / kFemto; }

}  // namespace dram3d::units
