#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dram3d/error.hpp"
#include "dram3d/model_config.hpp"

using namespace dram3d;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
  return s;
}

std::string validation_field(const std::string& doc) {
  try {
    load_config(doc);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<accepted>";
}

}  // namespace

TEST(ModelConfig, RoundTrip) {
  const auto c = default_config();
  const std::string text = dump_config(c);
  const auto back = load_config(text);
  EXPECT_EQ(dump_config(back), text);
  EXPECT_EQ(back.arrays, c.arrays);
  EXPECT_EQ(back.calibration, c.calibration);
  EXPECT_EQ(back.studies, c.studies);
  EXPECT_EQ(back.topology, c.topology);
  EXPECT_EQ(back.default_layers, 72);
  ASSERT_FALSE(text.empty());
  EXPECT_EQ(text.back(), '\n');
}

TEST(ModelConfig, ShippedFileMatchesBuiltIn) {
  const auto path = std::filesystem::path(DRAM3D_SOURCE_DIR) / "configs" / "paper_anchors.json";
  EXPECT_EQ(read_file(path), dump_config(default_config()));
  EXPECT_EQ(dump_config(load_config_file(path)), dump_config(default_config()));
}

TEST(ModelConfig, MinimalDocumentUsesDefaults) {
  const auto c = load_config(R"({"arrays": {"si3d": {"v_array": 0.5}}})");
  EXPECT_EQ(c.profiles.size(), 3u);
  EXPECT_EQ(array_settings(c, "si3d").array_efficiency, 1.0);
  EXPECT_EQ(c.min_pitch, kDefaultMinPitchUm);
  EXPECT_TRUE(c.calibration.anchors.empty());
}

TEST(ModelConfig, StrictErrorsNameTheField) {
  const std::string base = dump_config(default_config());
  EXPECT_EQ(validation_field(replace_once(base, "\"min_pitch\": 0.4", "\"min_pitch\": 0.4, \"bogus\": 1")), "bogus");
  EXPECT_EQ(validation_field(replace_once(base, "\"min_pitch\": 0.4", "\"min_pitch\": -1.0")), "min_pitch");
  EXPECT_EQ(validation_field(replace_once(base, "\"default_layers\": 72", "\"default_layers\": 0")), "default_layers");
  EXPECT_EQ(validation_field(replace_once(base, "\"scheme\": \"selector_strap\"", "\"scheme\": \"nope\"")),
            "topology.scheme");
  EXPECT_EQ(validation_field(replace_once(base, "\"name\": \"timing.k_stage\"", "\"name\": \"timing.k_nope\"")),
            "calibration.free[8].name");
  EXPECT_EQ(validation_field(R"({"arrays": {"nope": {"v_array": 0.5}}})"), "profile");
  EXPECT_EQ(validation_field(R"({"arrays": {"si3d": {"v_array": 0.5, "array_efficiency": 1.5}}})"),
            "arrays.si3d.array_efficiency");
  EXPECT_EQ(validation_field(R"({"arrays": {"d1b": {"v_array": 0.5}}, "comparison": [{"profile": "d1b", "layers": 3}]})"),
            "comparison[0].layers");
  EXPECT_EQ(validation_field(R"({"arrays": {"si3d": {"v_array": 0.5}}, "sweep": {"profile": "d1b"}})"),
            "sweep.profile");
  EXPECT_THROW(load_config("[1, 2"), ParseError);
  EXPECT_THROW(load_config_file("/nonexistent/config.json"), ValidationError);
}

TEST(ModelConfig, InputsFor) {
  const auto c = default_config();
  const auto si = inputs_for(c, {"si3d", std::nullopt, std::nullopt});
  EXPECT_EQ(si.config.n_layers, 72);
  EXPECT_EQ(si.config.topology.scheme, Scheme::selector_strap);
  EXPECT_EQ(si.op.v_pp, 1.8);
  const auto mux = inputs_for(c, {"aos3d", 10, Scheme::core_mux});
  EXPECT_EQ(mux.config.n_layers, 10);
  EXPECT_EQ(mux.config.topology.scheme, Scheme::core_mux);
  const auto d1b = inputs_for(c, {"d1b", std::nullopt, std::nullopt});
  EXPECT_FALSE(d1b.config.n_layers);
  EXPECT_EQ(d1b.config.c_bl_effective, 25.0);
  EXPECT_THROW(inputs_for(c, {"d1b", 4, std::nullopt}), PreconditionError);
  EXPECT_THROW(inputs_for(c, {"nope", std::nullopt, std::nullopt}), ValidationError);
}

TEST(ModelConfig, ParameterAccess) {
  auto c = default_config();
  set_parameter(c, "arrays.si3d.v_array", 0.55);
  EXPECT_EQ(array_settings(c, "si3d").v_array, 0.55);
  EXPECT_EQ(get_parameter(c, "arrays.si3d.v_array"), 0.55);
  set_parameter(c, "timing.k_stage", 4.5);
  EXPECT_EQ(c.timing.k_wl, 4.5);
  EXPECT_EQ(c.timing.k_bl, 4.5);
  EXPECT_EQ(c.timing.k_restore, 4.5);
  set_parameter(c, "workload.charge_loss", 30.0);
  EXPECT_NEAR(get_parameter(c, "workload.charge_loss"), 30.0, 1e-12);
  EXPECT_NEAR(c.workload.total_charge_loss(), 30.0, 1e-12);
  set_parameter(c, "topology.selector.c_junction", 0.2);
  EXPECT_EQ(c.topology.selector->c_junction, 0.2);
  set_parameter(c, "topology.c_bond", 0.7);
  EXPECT_EQ(get_parameter(c, "topology.c_bond"), 0.7);
  EXPECT_THROW(get_parameter(c, "arrays.si3d.c_bl_effective"), ValidationError);
  EXPECT_THROW(get_parameter(c, "timing.nope"), ValidationError);
  EXPECT_THROW(get_parameter(c, "a.b.c.d"), ValidationError);
}

TEST(ModelConfig, CalibratedReferenceModel) {
  const auto c = default_config();
  const auto cal = calibrate(c, c.calibration);
  const auto fitted = apply(c, cal);
  EXPECT_EQ(fitted.fitted.size(), c.calibration.free.size());
  EXPECT_NEAR(get_parameter(fitted, "arrays.d1b.v_array"), 0.648, 1e-6);
  EXPECT_NEAR(get_parameter(fitted, "arrays.d1b.c_bl_effective"), 20.0, 1e-5);
  const auto si = inputs_for(fitted, {"si3d", 137, std::nullopt});
  EXPECT_EQ(layers_for_density(si.config.profile, si.config.topology, si.config.array_efficiency, 2.6), 137);
  const auto aos = inputs_for(fitted, {"aos3d", 87, std::nullopt});
  EXPECT_EQ(layers_for_density(aos.config.profile, aos.config.topology, aos.config.array_efficiency, 2.6), 87);
  EXPECT_NEAR(evaluate(si).margin_after_disturb, 70.0, 2.0);
  EXPECT_NEAR(effective_bl_capacitance(inputs_for(fitted, {"si3d", 72, std::nullopt}).config), 6.6, 1e-5);
  EXPECT_LE(evaluate(inputs_for(fitted, {"d1b", std::nullopt, std::nullopt})).t_rc, 21.3 * (1 + 1e-6));
}
