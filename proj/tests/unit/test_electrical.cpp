#include <gtest/gtest.h>

#include <random>

#include "dram3d/electrical.hpp"
#include "dram3d/error.hpp"
#include "oracle.hpp"

using namespace dram3d;

namespace {

ArrayConfig planar(double c_eff) {
  ArrayConfig c;
  c.profile = builtin_profile("d1b");
  c.c_bl_effective = c_eff;
  return c;
}

ArrayConfig stacked(const char* p, int layers) {
  ArrayConfig c;
  c.profile = builtin_profile(p);
  c.n_layers = layers;
  return c;
}

OperatingPoint op(const ArrayConfig& c, double v) { return operating_point(c.profile, v); }

}  // namespace

TEST(SenseMargin, D1bAnchor) {
  const auto c = planar(20.0);
  EXPECT_NEAR(sense_margin(c, op(c, 0.648)), 54.0, 0.05);
  EXPECT_NEAR(sense_margin(c, op(c, 0.648)), oracle::share_signal_mv(0.648, 4, 20), 1e-9);
}

TEST(SenseMargin, SixPointSixFemtofarad) {
  const auto c = planar(6.6);
  EXPECT_NEAR(sense_margin(c, op(c, 0.648)), 122.0, 0.5);
}

TEST(SenseMargin, NoLoadGivesHalfSwing) {
  auto c = stacked("si3d", 1);
  c.topology.scheme = Scheme::direct_blsa;
  c.topology.c_bond = 0;
  c.profile.cbl_per_layer = 0;
  EXPECT_DOUBLE_EQ(sense_margin(c, op(c, 0.8)), 400.0);
}

TEST(SenseMargin, LinearInVoltageAndDecreasingInLoad) {
  const auto c = stacked("aos3d", 40);
  const double m1 = sense_margin(c, op(c, 0.5));
  EXPECT_NEAR(sense_margin(c, op(c, 1.0)), 2 * m1, 1e-9);
  double prev = 1e9;
  for (double ceff = 1; ceff < 40; ceff += 1.5) {
    const double m = sense_margin(planar(ceff), op(planar(ceff), 0.6));
    EXPECT_LT(m, prev);
    prev = m;
  }
}

TEST(SenseMargin, StackedMatchesOracleOverLayers) {
  for (const char* p : {"si3d", "aos3d"}) {
    for (int n = 1; n <= 200; n += 7) {
      const auto c = stacked(p, n);
      const double ceff = effective_bl_capacitance(c);
      EXPECT_NEAR(sense_margin(c, op(c, 0.6)), oracle::share_signal_mv(0.6, 4, ceff), 1e-9);
    }
  }
}

TEST(Disturb, ZeroWorkloadLosesNothing) {
  const auto c = stacked("si3d", 137);
  DisturbWorkload w;
  EXPECT_EQ(disturb_margin_loss(c, w), 0.0);
  EXPECT_EQ(margin_after_disturb(c, op(c, 0.6), w), sense_margin(c, op(c, 0.6)));
}

TEST(Disturb, LossIsChargeOverTotalCapacitance) {
  const auto c = stacked("si3d", 137);
  DisturbWorkload w;
  w.q_rh = 10;    // aC per toggle -> 0.1 fC
  w.q_fbe = 0.1;  // aC per cycle -> 0.15 fC
  const double q_fc = (1e4 * 10 + 1.5e6 * 0.1) * 1e-3;
  const double expected_mv = q_fc / (4 + effective_bl_capacitance(c)) * 1e3;
  EXPECT_NEAR(disturb_margin_loss(c, w), expected_mv, 1e-9);
  DisturbWorkload w2 = w;
  w2.q_rh *= 2;
  w2.q_fbe *= 2;
  EXPECT_NEAR(disturb_margin_loss(c, w2), 2 * disturb_margin_loss(c, w), 1e-9);
}

TEST(Disturb, FlooredAtZero) {
  const auto c = stacked("si3d", 137);
  DisturbWorkload w;
  w.q_rh = 1e6;
  EXPECT_EQ(margin_after_disturb(c, op(c, 0.6), w), 0.0);
}

TEST(Disturb, DecreasingInLayers) {
  DisturbWorkload w;
  w.set_total_charge_loss(200);
  for (const char* p : {"si3d", "aos3d"}) {
    double prev = 1e9;
    for (int n = 10; n <= 200; ++n) {
      const auto c = stacked(p, n);
      const double m = margin_after_disturb(c, op(c, 0.6), w);
      EXPECT_LT(m, prev) << p << " " << n;
      prev = m;
    }
  }
}

TEST(Disturb, TotalChargeSplit) {
  DisturbWorkload w;
  w.rh_share = 0.25;
  w.set_total_charge_loss(400);
  EXPECT_NEAR(w.total_charge_loss(), 400, 1e-9);
  EXPECT_NEAR(w.rh_toggles * w.q_rh, 100, 1e-9);
  EXPECT_NEAR(w.fbe_cycles * w.q_fbe, 300, 1e-9);
}

TEST(Disturb, WorkloadValidation) {
  DisturbWorkload w;
  w.q_rh = -1;
  EXPECT_THROW(validate(w), ValidationError);
  w = {};
  w.refresh_window = 0;
  EXPECT_THROW(validate(w), ValidationError);
  w = {};
  w.rh_share = 1.5;
  EXPECT_THROW(validate(w), ValidationError);
}

TEST(WordlineDelay, Examples) {
  EXPECT_NEAR(wordline_delay(builtin_profile("d1b")), 1.43, 0.005);
  EXPECT_NEAR(wordline_delay(builtin_profile("si3d")), 0.426, 0.0005);
  for (const char* p : {"d1b", "si3d", "aos3d"}) {
    const auto& prof = builtin_profile(p);
    EXPECT_NEAR(wordline_delay(prof), oracle::distributed_delay_ns(prof.rwl, prof.cwl + prof.cwl_parasitic), 1e-12);
  }
  auto zero = builtin_profile("aos3d");
  zero.rwl = 0;
  EXPECT_EQ(wordline_delay(zero), 0.0);
}

TEST(RestoreTime, Examples) {
  const auto d = planar(20);
  EXPECT_NEAR(restore_time(d, op(d, 0.648)), 1.06, 0.005);
  const auto s = stacked("si3d", 10);
  EXPECT_NEAR(restore_time(s, op(s, 0.648)), 0.287, 0.0005);
  auto fast = s;
  fast.profile.transistor.i_on = 1e12;
  EXPECT_NEAR(restore_time(fast, op(fast, 0.648)), 0.0, 1e-9);
}

TEST(BitlineTimeConstant, ResistanceTimesLoad) {
  const auto s = stacked("si3d", 20);
  EXPECT_NEAR(bitline_time_constant(s), bl_path_resistance(s) * effective_bl_capacitance(s) * 1e-3, 1e-12);
  const auto d = planar(20);
  EXPECT_NEAR(bitline_time_constant(d), 49.6 * 20 * 1e-3, 1e-12);
}

TEST(RowCycle, StagesSumToTotal) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> k(0, 10);
  for (int i = 0; i < 50; ++i) {
    TimingModel t{k(rng), k(rng), k(rng) / 10, k(rng), k(rng) / 10};
    const auto c = stacked(i % 2 ? "si3d" : "aos3d", 1 + i * 3);
    const auto b = row_cycle_time(c, op(c, 0.6), t);
    EXPECT_GE(b.wordline, 0);
    EXPECT_GE(b.bitline, 0);
    EXPECT_GE(b.sense, 0);
    EXPECT_GE(b.restore, 0);
    EXPECT_GE(b.overhead, 0);
    EXPECT_DOUBLE_EQ(b.total(), b.wordline + b.bitline + b.sense + b.restore + b.overhead);
    EXPECT_NEAR(b.wordline, t.k_wl * wordline_delay(c.profile), 1e-12);
    EXPECT_NEAR(b.bitline, t.k_bl * bitline_time_constant(c), 1e-12);
    EXPECT_NEAR(b.restore, t.k_restore * restore_time(c, op(c, 0.6)), 1e-12);
  }
}

TEST(RowCycle, ZeroFactorsLeaveOverhead) {
  const auto c = stacked("si3d", 50);
  TimingModel t{0, 0, 0, 0, 3.25};
  EXPECT_EQ(row_cycle_time(c, op(c, 0.6), t).total(), 3.25);
  t.k_wl = -1;
  EXPECT_THROW(validate(t), ValidationError);
}

TEST(Energy, SpecifiedFormula) {
  const auto c = stacked("aos3d", 87);
  const auto o = op(c, 0.60);
  const double ceff = effective_bl_capacitance(c);
  const double ewl = (94.4 + 33.2) * 1.6 * 1.6 / 1024;
  EXPECT_NEAR(wordline_energy_share(c.profile, o), ewl, 1e-12);
  const auto w = energy_per_bit(c, o, Access::write);
  const auto r = energy_per_bit(c, o, Access::read);
  EXPECT_NEAR(w.total(), (ceff + 4) * 0.36 + ewl, 1e-12);
  EXPECT_NEAR(r.total(), (ceff + 4) * 0.09 + ewl, 1e-12);
  EXPECT_NEAR(w.bitline, (ceff + 4) * 0.36, 1e-12);
  EXPECT_NEAR(w.wordline_share, ewl, 1e-12);
}

TEST(Energy, AosExampleMagnitudes) {
  // Local line 87 x 0.128 fF plus junction and bond; wordline share from the
  // tabulated wordline load at 1.6 V.
  auto c = stacked("aos3d", 87);
  c.topology.c_bond = 0.6;
  const auto o = op(c, 0.60);
  EXPECT_NEAR(local_bl_capacitance(c), 11.1, 0.05);
  EXPECT_NEAR(effective_bl_capacitance(c), local_bl_capacitance(c) + 0.1 + 0.6, 1e-12);
  EXPECT_NEAR(wordline_energy_share(c.profile, o), 0.28, 0.05);
  const auto w = energy_per_bit(c, o, Access::write).total();
  const auto r = energy_per_bit(c, o, Access::read).total();
  EXPECT_NEAR(w - r, 0.75 * 0.36 * (effective_bl_capacitance(c) + 4), 1e-12);
  EXPECT_NEAR(w, 6.02, 0.01);
  EXPECT_NEAR(r, 1.74, 0.01);
}

TEST(Energy, ReadBelowWrite) {
  for (double v : {0.1, 0.5, 1.0, 1.5}) {
    const auto c = stacked("si3d", 64);
    EXPECT_LT(energy_per_bit(c, op(c, v), Access::read).total(), energy_per_bit(c, op(c, v), Access::write).total());
  }
}

TEST(Energy, PlanarUsesPhysicalLine) {
  const auto c = planar(20);
  const auto o = op(c, 0.648);
  EXPECT_NEAR(energy_per_bit(c, o, Access::write).bitline, (25 + 4) * 0.648 * 0.648, 1e-12);
}

TEST(OperatingPointCheck, Invariants) {
  const auto& p = builtin_profile("si3d");
  EXPECT_EQ(operating_point(p, 0.6).v_pp, 1.8);
  EXPECT_EQ(operating_point(p, 0.6).v_bb_wl, -0.3);
  EXPECT_THROW(validate(operating_point(p, 0.0)), ValidationError);
  EXPECT_THROW(validate(operating_point(p, 1.9)), ValidationError);
  EXPECT_NO_THROW(validate(operating_point(p, 1.8)));
}

TEST(Energy, ZeroSwingLeavesWordlineShare) {
  const auto c = stacked("si3d", 64);
  const OperatingPoint o{0.0, 1.8, -0.3};
  const double ewl = wordline_energy_share(c.profile, o);
  EXPECT_EQ(energy_per_bit(c, o, Access::write).total(), ewl);
  EXPECT_EQ(energy_per_bit(c, o, Access::read).total(), ewl);
}
