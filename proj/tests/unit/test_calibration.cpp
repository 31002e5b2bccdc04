#include <gtest/gtest.h>

#include <cmath>

#include "dram3d/calibration.hpp"
#include "dram3d/error.hpp"
#include "dram3d/model_config.hpp"
#include "oracle.hpp"

using namespace dram3d;

namespace {

CalibrationProblem problem(std::vector<ParameterSpec> params, std::vector<double> targets,
                           std::function<std::vector<double>(const std::vector<double>&)> f) {
  CalibrationProblem p;
  p.parameters = std::move(params);
  for (std::size_t i = 0; i < targets.size(); ++i) p.anchor_names.push_back("a" + std::to_string(i));
  p.weights.assign(targets.size(), 1.0);
  p.targets = std::move(targets);
  p.observe = std::move(f);
  return p;
}

CalibrationSet single(const char* name, const char* metric, const char* profile, std::optional<int> layers,
                      double target, const char* param, double lo, double hi) {
  CalibrationSet s;
  s.name = name;
  CalibrationAnchor a;
  a.name = name;
  a.observable = {metric, {profile, layers, std::nullopt}};
  a.target = target;
  s.anchors = {a};
  s.free = {{param, lo, hi}};
  return s;
}

}  // namespace

TEST(Solve, MonotoneSingleAnchor) {
  const auto c = solve(problem({{"x", 0.5, 0, 10}}, {6}, [](const auto& x) { return std::vector{3 * x[0]}; }));
  ASSERT_EQ(c.parameters.size(), 1u);
  EXPECT_NEAR(c.parameters[0].value, 2.0, 1e-9);
  EXPECT_EQ(c.parameters[0].initial, 0.5);
  EXPECT_TRUE(c.converged);
  EXPECT_LE(max_abs_residual(c), 1e-9);
}

TEST(Solve, DecreasingDependence) {
  const auto c = solve(problem({{"x", 1, 0.1, 10}}, {0.25}, [](const auto& x) { return std::vector{1 / x[0]}; }));
  EXPECT_NEAR(c.parameters[0].value, 4.0, 4e-9);
}

TEST(Solve, WeightedLeastSquares) {
  // Minimizes (x - 1)^2 + ((x - 3) / 3)^2, minimum at x = 1.2.
  const auto c = solve(problem({{"x", 0, -5, 5}}, {1, 3}, [](const auto& x) { return std::vector{x[0], x[0]}; }));
  EXPECT_NEAR(c.parameters[0].value, 1.2, 1e-6);
  ASSERT_EQ(c.residuals.size(), 2u);
  EXPECT_NEAR(c.residuals[0].relative_error, 0.2, 1e-6);
  EXPECT_NEAR(c.residuals[1].relative_error, -0.6, 1e-6);
  EXPECT_NEAR(c.objective, 0.04 + 0.36, 1e-6);
}

TEST(Solve, CoupledParameters) {
  const auto c = solve(problem({{"a", 0, -10, 10}, {"b", 0, -10, 10}}, {3, 1},
                               [](const auto& x) { return std::vector{x[0] + x[1], x[0] - x[1]}; }));
  EXPECT_TRUE(c.converged);
  EXPECT_NEAR(c.parameters[0].value, 2.0, 1e-6);
  EXPECT_NEAR(c.parameters[1].value, 1.0, 1e-6);
}

TEST(Solve, StaysInsideBounds) {
  const auto c = solve(problem({{"x", 1, 0, 2}}, {10}, [](const auto& x) { return std::vector{x[0]}; }));
  EXPECT_NEAR(c.parameters[0].value, 2.0, 1e-9);
  EXPECT_NEAR(c.residuals[0].relative_error, -0.8, 1e-9);
}

TEST(Solve, ZeroTargetUsesAbsoluteResidual) {
  const auto c = solve(problem({{"x", 1, -2, 2}}, {0}, [](const auto& x) { return std::vector{x[0] - 0.5}; }));
  EXPECT_NEAR(c.parameters[0].value, 0.5, 1e-9);
}

TEST(Solve, EmptyFreeSetReportsResiduals) {
  const auto c = solve(problem({}, {2, 4}, [](const auto&) { return std::vector{2.0, 5.0}; }));
  EXPECT_TRUE(c.converged);
  EXPECT_EQ(c.sweeps, 0);
  ASSERT_EQ(c.residuals.size(), 2u);
  EXPECT_EQ(c.residuals[0].relative_error, 0.0);
  EXPECT_NEAR(c.residuals[1].relative_error, 0.25, 1e-15);
}

TEST(Solve, InsensitiveParameterIsAnError) {
  auto p = problem({{"x", 1, 0, 2}, {"unused", 1, 0, 2}}, {1}, [](const auto& x) { return std::vector{x[0]}; });
  try {
    solve(p);
    FAIL();
  } catch (const CalibrationError& e) {
    EXPECT_NE(std::string(e.what()).find("unused"), std::string::npos);
  }
}

TEST(Solve, RejectsMalformedProblems) {
  EXPECT_THROW(solve(problem({{"x", 1, 0, 2}}, {}, [](const auto&) { return std::vector<double>{}; })),
               PreconditionError);
  EXPECT_THROW(solve(problem({{"x", 1, 2, 2}}, {1}, [](const auto& x) { return std::vector{x[0]}; })),
               PreconditionError);
  EXPECT_THROW(solve(problem({{"x", 1, 0, 2}}, {1}, [](const auto&) { return std::vector{1.0, 2.0}; })),
               PreconditionError);
}

TEST(Solve, UnmetConvergenceIsReported) {
  // Strongly coupled: coordinate descent needs many sweeps.
  auto p = problem({{"a", 0, -10, 10}, {"b", 0, -10, 10}}, {3, 3.02},
                   [](const auto& x) { return std::vector{x[0] + x[1], x[0] + 1.01 * x[1]}; });
  CalibrationOptions o;
  o.max_sweeps = 2;
  const auto c = solve(p, o);
  EXPECT_FALSE(c.converged);
  EXPECT_EQ(c.sweeps, 2);
  EXPECT_GT(c.last_step, o.converged_step);
}

TEST(Solve, Deterministic) {
  auto p = problem({{"a", 0.3, 0, 5}, {"b", 0.7, 0, 5}}, {2, 1, 4},
                   [](const auto& x) { return std::vector{x[0] * x[1], x[0] - x[1] + 1, x[0] * x[0] + x[1]}; });
  const auto a = solve(p);
  const auto b = solve(p);
  for (std::size_t i = 0; i < a.parameters.size(); ++i) EXPECT_EQ(a.parameters[i].value, b.parameters[i].value);
  EXPECT_EQ(a.sweeps, b.sweeps);
}

TEST(Calibrate, PlanarSwingFromMargin) {
  auto cfg = default_config();
  array_settings(cfg, "d1b").c_bl_effective = 20.0;
  const auto c = calibrate(cfg, single("m", "sense_margin", "d1b", std::nullopt, 54.0, "arrays.d1b.v_array", 0.1, 2.5));
  const double closed_form = 2 * 0.054 * (4 + 20) / 4;
  EXPECT_NEAR(c.parameters[0].value, closed_form, 0.001);
  EXPECT_NEAR(c.parameters[0].value, closed_form, 1e-9);
  EXPECT_TRUE(c.converged);
}

TEST(Calibrate, EfficiencyFromDensity) {
  const auto cfg = default_config();
  const auto c = calibrate(
      cfg, single("d", "bit_density", "si3d", 137, 2.6, "arrays.si3d.array_efficiency", 0.05, 1.0));
  const double closed_form = 2.6 / oracle::gb_per_mm2(1.0, 137, oracle::kSi);
  EXPECT_NEAR(c.parameters[0].value, 0.662, 0.002);
  EXPECT_NEAR(c.parameters[0].value, closed_form, 1e-9);
}

TEST(Calibrate, InsensitiveModelParameter) {
  auto set = single("d", "bit_density", "si3d", 137, 2.6, "arrays.si3d.array_efficiency", 0.05, 1.0);
  set.free.push_back({"timing.t_overhead", 0, 5});
  EXPECT_THROW(calibrate(default_config(), set), CalibrationError);
}

TEST(Calibrate, ReferenceSetFitsExactAnchors) {
  const auto cfg = default_config();
  const auto c = calibrate(cfg, cfg.calibration);
  EXPECT_TRUE(c.converged);
  for (const auto& r : c.residuals) {
    if (r.name == "d1b_effective_cbl" || r.name == "d1b_sense_margin" || r.name == "si3d_strap_effective_cbl" ||
        r.name == "si3d_density" || r.name == "aos3d_density" || r.name == "si3d_disturbed_margin" ||
        r.name == "d1b_row_cycle") {
      EXPECT_LE(std::abs(r.relative_error), 1e-6) << r.name;
    }
  }
  for (const auto& p : c.parameters) {
    EXPECT_GE(p.value, p.lower) << p.name;
    EXPECT_LE(p.value, p.upper) << p.name;
  }
}

TEST(Calibrate, Idempotent) {
  const auto cfg = default_config();
  const auto first = calibrate(cfg, cfg.calibration);
  const auto fitted = apply(cfg, first);
  const auto second = calibrate(fitted, fitted.calibration);
  ASSERT_EQ(first.parameters.size(), second.parameters.size());
  for (std::size_t i = 0; i < first.parameters.size(); ++i) {
    const double a = first.parameters[i].value, b = second.parameters[i].value;
    EXPECT_LE(std::abs(b - a), 1e-9 * std::max(std::abs(a), 1e-12)) << first.parameters[i].name;
  }
}

TEST(Calibrate, ApplyRecordsProvenance) {
  const auto cfg = default_config();
  const auto c = calibrate(cfg, single("d", "bit_density", "aos3d", 87, 2.6, "arrays.aos3d.array_efficiency", 0.05, 1.0));
  const auto fitted = apply(cfg, c);
  EXPECT_EQ(array_settings(fitted, "aos3d").array_efficiency, c.parameters[0].value);
  ASSERT_EQ(fitted.fitted.size(), 1u);
  EXPECT_EQ(fitted.fitted[0].parameter, "arrays.aos3d.array_efficiency");
  const auto in = inputs_for(fitted, {"aos3d", 87, std::nullopt});
  ASSERT_FALSE(in.provenance.empty());
  EXPECT_EQ(layers_for_density(in.config.profile, in.config.topology, in.config.array_efficiency, 2.6), 87);
}
