#include <gtest/gtest.h>

#include <sstream>

#include "dram3d/error.hpp"
#include "dram3d/format.hpp"
#include "dram3d/model_config.hpp"
#include "dram3d/report.hpp"
#include "dram3d/svg_plot.hpp"

using namespace dram3d;

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

EvaluationReport sample_report() {
  auto c = default_config();
  c.fitted = {{"arrays.si3d.v_array", 0.5707}};
  return evaluate(inputs_for(c, {"si3d", 137, std::nullopt}));
}

}  // namespace

TEST(Format, SixSignificantDigits) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(10.14226), "10.1423");
  EXPECT_EQ(format_number(2.6), "2.6");
  EXPECT_EQ(format_number(1234567.0), "1.23457e+06");
  EXPECT_EQ(round_significant(10.142264), 10.1423);
  EXPECT_EQ(round_significant(0.0), 0.0);
  EXPECT_EQ(format_fixed(1.005, 1), "1.0");
  EXPECT_EQ(format_fixed(-0.0001, 2), "0.00");
}

TEST(Report, JsonAndCsvCarryTheSameNumbers) {
  const auto r = sample_report();
  const Json j = to_json(r);
  const auto rows = lines(reports_csv(std::span(&r, 1)));
  ASSERT_EQ(rows.size(), 2u);
  const auto header = split(rows[0]);
  const auto cells = split(rows[1]);
  EXPECT_EQ(header, report_csv_columns());
  ASSERT_EQ(cells.size(), header.size());
  auto col = [&](const std::string& name) {
    return cells[std::find(header.begin(), header.end(), name) - header.begin()];
  };
  for (const char* k : {"c_bl_effective", "sense_margin", "margin_after_disturb", "t_rc", "e_read", "e_write",
                        "hcb_pitch", "blsa_area", "bit_density", "stack_height"}) {
    EXPECT_EQ(std::stod(col(k)), j[k].get<double>()) << k;
  }
  EXPECT_EQ(std::stod(col("t_wordline")), j["t_rc_stages"]["wordline"].get<double>());
  EXPECT_EQ(col("feasibility"), j["feasibility"]["verdict"].get<std::string>());
  EXPECT_EQ(col("provenance"), "arrays.si3d.v_array=0.5707");
  EXPECT_EQ(j["config"]["n_layers"], 137);
  EXPECT_EQ(j["config"]["scheme"], "selector_strap");
  EXPECT_EQ(j["provenance"][0]["parameter"], "arrays.si3d.v_array");
}

TEST(Report, PlanarVerdictAndEmptyCells) {
  const auto c = default_config();
  const auto r = evaluate(inputs_for(c, {"d1b", std::nullopt, std::nullopt}));
  EXPECT_EQ(feasibility_verdict(r), "n/a");
  const Json j = to_json(r);
  EXPECT_TRUE(j["hcb_pitch"].is_null());
  EXPECT_TRUE(j["config"]["n_layers"].is_null());
  const auto cells = split(lines(reports_csv(std::span(&r, 1)))[1]);
  EXPECT_EQ(cells[2], "");
}

TEST(Report, ComparisonOutputs) {
  const auto c = default_config();
  std::vector<EvaluationInputs> in;
  for (const auto& ref : c.comparison) in.push_back(inputs_for(c, ref));
  const auto t = compare_report(in);
  const auto csv = lines(comparison_csv(t));
  ASSERT_EQ(csv.size(), 4u);
  EXPECT_EQ(split(csv[0]).size(), 1 + 2 * t.metrics.size());
  for (const auto& l : csv) EXPECT_EQ(split(l).size(), split(csv[0]).size());
  const auto text = lines(comparison_text(t));
  EXPECT_EQ(text.size(), 1 + t.metrics.size());
  EXPECT_NE(text[0].find("ratio si3d@137/selector_strap"), std::string::npos);
  const Json j = to_json(t);
  EXPECT_EQ(j["baseline"], "d1b");
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["rows"][0]["ratio_to_baseline"]["t_rc"], 1.0);
  EXPECT_TRUE(j["rows"][1]["ratio_to_baseline"]["hcb_pitch"].is_null());
}

TEST(Report, CalibrationOutputs) {
  Calibration c;
  c.parameters = {{"x", 2.0, 0, 10, 1}};
  c.residuals = {{"a", 6, 6.0000001, 1.6e-8, 1}};
  c.converged = true;
  c.sweeps = 3;
  const Json j = to_json(c);
  EXPECT_EQ(j["free_parameters"]["x"]["value"], 2.0);
  EXPECT_EQ(j["residuals"]["a"]["relative_error"], 1.6e-8);
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_EQ(lines(residual_csv(c)).size(), 2u);
  EXPECT_NE(residual_text(c).find("converged: yes after 3 sweep(s)"), std::string::npos);
}

TEST(Report, FeasibilityOutputs) {
  const std::vector<FeasibilityRow> rows = {{"si3d", Scheme::direct_blsa, 0.26, 0.4, false},
                                            {"si3d", Scheme::selector_strap, 0.747, 0.4, true}};
  const auto csv = lines(feasibility_csv(rows));
  ASSERT_EQ(csv.size(), 3u);
  EXPECT_EQ(csv[1], "si3d,direct_blsa,0.26,0.4,infeasible");
  EXPECT_EQ(csv[2], "si3d,selector_strap,0.747,0.4,feasible");
  EXPECT_EQ(to_json(std::span(rows))[1]["verdict"], "feasible");
  EXPECT_EQ(lines(feasibility_text(rows)).size(), 3u);
}

TEST(Svg, DocumentShape) {
  LinePlot p;
  p.title = "margin";
  p.x_label = "density";
  p.y_label = "mV";
  p.series = {{"si3d", {1, 2, 3}, {100, 80, 60}}, {"aos3d", {1, 2}, {150, 120}}};
  p.references = {{"floor", 70}};
  const std::string svg = render_svg(p);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("viewBox=\"0 0 800 600\""), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  std::size_t polylines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++polylines;
  EXPECT_EQ(polylines, 2u);
  EXPECT_NE(svg.find("si3d"), std::string::npos);
  EXPECT_NE(svg.find("floor"), std::string::npos);
  EXPECT_EQ(render_svg(p), svg);
}

TEST(Svg, Degenerate) {
  LinePlot p;
  EXPECT_NO_THROW(render_svg(p));
  p.series = {{"flat", {1, 1}, {5, 5}}};
  EXPECT_NE(render_svg(p).find("<polyline"), std::string::npos);
  p.series = {{"bad", {1, 2}, {5}}};
  EXPECT_THROW(render_svg(p), PreconditionError);
}
