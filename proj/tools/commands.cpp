#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dram3d/circuit_sim.hpp"
#include "dram3d/error.hpp"
#include "dram3d/format.hpp"
#include "dram3d/report.hpp"
#include "dram3d/svg_plot.hpp"

namespace dram3d::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string profile;
  std::string scheme;
  int layers = 0;
  std::string out;
  bool csv = false;
  std::string svg;
  double min_pitch = 0;
  int from = 0, to = 0, step = 1;
  std::string study;
  std::string expected;
  std::string netlist_out;
  std::string waveform_out;

  CLI::Option* profile_opt = nullptr;
  CLI::Option* scheme_opt = nullptr;
  CLI::Option* layers_opt = nullptr;
  CLI::Option* min_pitch_opt = nullptr;
  CLI::Option* from_opt = nullptr;
  CLI::Option* to_opt = nullptr;
  CLI::Option* step_opt = nullptr;
};

/// Thrown for conditions that map to a specific exit code.
struct Exit {
  int code;
};

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("out", "cannot write '" + path.string() + "'");
  f << text;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) out << text; else write_file(o.out, text);
}

ModelConfig read_config(const Options& o) {
  return o.config.empty() ? default_config() : load_config_file(o.config);
}

bool has_calibration(const ModelConfig& c) {
  return !c.calibration.anchors.empty() && !c.calibration.free.empty();
}

/// Config with its reference calibration applied. Non-convergence aborts
/// with the residual table.
ModelConfig prepare(const Options& o, std::ostream& err, Calibration* used = nullptr) {
  ModelConfig c = read_config(o);
  if (!has_calibration(c)) return c;
  Calibration cal = calibrate(c, c.calibration);
  if (!cal.converged) {
    err << "error: calibration did not converge\n" << residual_text(cal);
    throw Exit{kNotConverged};
  }
  if (used != nullptr) *used = cal;
  return apply(c, cal);
}

std::optional<Scheme> scheme_flag(const Options& o) {
  if (o.scheme_opt->count() == 0) return std::nullopt;
  try {
    return parse_scheme(o.scheme);
  } catch (const ValidationError& e) {
    throw ValidationError("--scheme", e.reason());
  }
}

const CalibrationSet& find_study(const ModelConfig& c, const std::string& name) {
  for (const auto& s : c.studies) {
    if (s.name == name) return s;
  }
  throw ValidationError("--study", "unknown study '" + name + "'");
}

// evaluate -------------------------------------------------------------------

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelConfig c = prepare(o, err);
  ConfigRef at{o.profile_opt->count() ? o.profile : std::string("si3d"), std::nullopt, scheme_flag(o)};
  if (o.layers_opt->count()) {
    if (!find_profile(c, at.profile).is_3d()) {
      throw ValidationError("--layers", "profile '" + at.profile + "' is planar2d and takes no layer count");
    }
    at.layers = o.layers;
  }
  EvaluationInputs in = inputs_for(c, at);
  if (o.min_pitch_opt->count()) in.min_pitch = o.min_pitch;
  const EvaluationReport r = evaluate(in);
  if (r.feasibility && !r.feasibility->feasible) {
    err << "warning: " << config_label(r) << " bond pitch " << format_number(*r.hcb_pitch)
        << " um is below the " << format_number(in.min_pitch) << " um minimum\n";
  }
  if (o.csv) {
    const EvaluationReport rows[] = {r};
    emit(o, out, reports_csv(rows));
  } else {
    emit(o, out, dump(to_json(r)));
  }
  if (!o.netlist_out.empty() || !o.waveform_out.empty()) {
    const sim::BlNetwork bl = sim::build_bl_network(in.config, in.op);
    if (!o.netlist_out.empty()) write_file(o.netlist_out, sim::dump_netlist(bl.network));
    if (!o.waveform_out.empty()) {
      const int probes[] = {bl.blsa_node, bl.strap_node, bl.cell_node};
      const sim::Waveform w = sim::transient(bl.network, sim::kDefaultStep, sim::kDefaultHorizon, probes);
      write_file(o.waveform_out, sim::waveform_csv(w));
    }
  }
  return kOk;
}

// sweep ------------------------------------------------------------------------

LinePlot margin_plot(const std::vector<std::vector<EvaluationReport>>& sweeps) {
  LinePlot p;
  p.title = "Sense margin vs bit density";
  p.x_label = "bit density (Gb/mm2)";
  p.y_label = "margin (mV)";
  for (const auto& rows : sweeps) {
    if (rows.empty()) continue;
    PlotSeries clean{rows.front().profile + " clean", {}, {}};
    PlotSeries disturbed{rows.front().profile + " after disturb", {}, {}};
    for (const auto& r : rows) {
      clean.x.push_back(r.bit_density);
      clean.y.push_back(r.sense_margin);
      disturbed.x.push_back(r.bit_density);
      disturbed.y.push_back(r.margin_after_disturb);
    }
    p.series.push_back(std::move(clean));
    p.series.push_back(std::move(disturbed));
  }
  return p;
}

LinePlot height_plot(const std::vector<std::vector<EvaluationReport>>& sweeps) {
  LinePlot p;
  p.title = "Stack height vs layer count";
  p.x_label = "layers";
  p.y_label = "stack height (um)";
  for (const auto& rows : sweeps) {
    if (rows.empty()) continue;
    PlotSeries s{rows.front().profile, {}, {}};
    for (const auto& r : rows) {
      s.x.push_back(*r.n_layers);
      s.y.push_back(*r.stack_height);
    }
    p.series.push_back(std::move(s));
  }
  return p;
}

std::vector<EvaluationReport> run_sweep(const ModelConfig& c, const std::string& profile,
                                        std::optional<Scheme> scheme, const LayerRange& range) {
  if (!find_profile(c, profile).is_3d()) {
    throw ValidationError("--profile", "sweep needs a stacked profile, got '" + profile + "'");
  }
  if (range.step < 1) throw ValidationError("--step", "must be >= 1");
  if (range.first < 1 || range.last < range.first) {
    throw ValidationError("--from/--to", "empty layer range " + std::to_string(range.first) + ".." +
                                             std::to_string(range.last));
  }
  return sweep(inputs_for(c, {profile, range.first, scheme}), range);
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelConfig c = prepare(o, err);
  const std::string profile = o.profile_opt->count() ? o.profile : c.sweep.profile;
  LayerRange range = c.sweep.range;
  if (o.from_opt->count()) range.first = o.from;
  if (o.to_opt->count()) range.last = o.to;
  if (o.step_opt->count()) range.step = o.step;
  if (o.layers_opt->count()) range = {o.layers, o.layers, 1};
  const auto rows = run_sweep(c, profile, scheme_flag(o), range);
  if (o.out.empty()) {
    out << reports_csv(rows);
  } else {
    write_file(o.out, reports_csv(rows));
    out << "sweep " << config_label(rows.front()) << " .. " << *rows.back().n_layers << " layers: "
        << rows.size() << " rows -> " << o.out << "\n";
    out << "  bit_density " << format_number(rows.front().bit_density) << " .. "
        << format_number(rows.back().bit_density) << " Gb/mm2\n";
    out << "  margin_after_disturb " << format_number(rows.front().margin_after_disturb) << " .. "
        << format_number(rows.back().margin_after_disturb) << " mV\n";
  }
  if (!o.svg.empty()) {
    const std::vector<std::vector<EvaluationReport>> all = {rows};
    write_file(o.svg + "_margin_vs_density.svg", render_svg(margin_plot(all)));
    write_file(o.svg + "_height_vs_layers.svg", render_svg(height_plot(all)));
  }
  return kOk;
}

// compare ----------------------------------------------------------------------

ComparisonTable comparison(const ModelConfig& c, std::optional<Scheme> scheme, std::optional<double> min_pitch) {
  std::vector<EvaluationInputs> ins;
  for (ConfigRef r : c.comparison) {
    if (scheme && find_profile(c, r.profile).is_3d()) r.scheme = scheme;
    ins.push_back(inputs_for(c, r));
    if (min_pitch) ins.back().min_pitch = *min_pitch;
  }
  if (ins.size() < 2) throw ValidationError("comparison", "at least two configurations are required");
  return compare_report(ins);
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelConfig c = prepare(o, err);
  std::optional<double> mp;
  if (o.min_pitch_opt->count()) mp = o.min_pitch;
  const ComparisonTable t = comparison(c, scheme_flag(o), mp);
  emit(o, out, o.csv ? comparison_csv(t) : comparison_text(t));
  return kOk;
}

// calibrate --------------------------------------------------------------------

int cmd_calibrate(const Options& o, std::ostream& out, std::ostream& err) {
  ModelConfig c = read_config(o);
  const CalibrationSet* set = &c.calibration;
  if (!o.study.empty()) {
    set = &find_study(c, o.study);
    if (has_calibration(c)) {
      const Calibration base = calibrate(c, c.calibration);
      if (!base.converged) {
        err << "error: reference calibration did not converge\n" << residual_text(base);
        return kNotConverged;
      }
      c = apply(c, base);
      set = &find_study(c, o.study);
    }
  }
  if (set->anchors.empty()) throw ValidationError("calibration.anchors", "at least one anchor is required");
  const Calibration cal = calibrate(c, *set);
  if (!cal.converged) {
    err << "error: calibration did not converge\n" << residual_text(cal);
    return kNotConverged;
  }
  out << (o.csv ? residual_csv(cal) : residual_text(cal));
  if (!o.out.empty()) write_file(o.out, dump_config(apply(c, cal)));
  return kOk;
}

// feasibility ----------------------------------------------------------------

std::vector<FeasibilityRow> feasibility_matrix(const ModelConfig& c, const std::vector<std::string>& profiles,
                                               std::optional<int> layers, double min_pitch) {
  std::vector<FeasibilityRow> rows;
  for (const auto& name : profiles) {
    if (!find_profile(c, name).is_3d()) {
      throw ValidationError("--profile", "bond pitch applies to stacked profiles, got '" + name + "'");
    }
    for (Scheme s : kAllSchemes) {
      const EvaluationInputs in = inputs_for(c, {name, layers, s});
      const Feasibility f = feasibility(in.config, min_pitch);
      rows.push_back({name, s, hcb_pitch(in.config), min_pitch, f.feasible});
    }
  }
  return rows;
}

int cmd_feasibility(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelConfig c = prepare(o, err);
  std::vector<std::string> profiles;
  if (o.profile_opt->count()) {
    profiles.push_back(o.profile);
  } else {
    for (const auto& [name, s] : c.arrays) {
      if (find_profile(c, name).is_3d()) profiles.push_back(name);
    }
  }
  const double mp = o.min_pitch_opt->count() ? o.min_pitch : c.min_pitch;
  if (!(mp > 0)) throw ValidationError("--min-pitch", "must be > 0");
  const auto layers = o.layers_opt->count() ? std::optional<int>(o.layers) : std::nullopt;
  const auto rows = feasibility_matrix(c, profiles, layers, mp);
  emit(o, out, o.csv ? feasibility_csv(rows) : feasibility_text(rows));
  return kOk;
}

// reproduce-paper --------------------------------------------------------------

std::string check_table(const std::vector<CheckResult>& checks) {
  std::vector<std::vector<std::string>> rows = {{"quantity", "value", "expected", "status"}};
  std::size_t passed = 0;
  for (const auto& c : checks) {
    std::string exp;
    if (c.expected.max) exp = "<= " + format_number(*c.expected.max);
    if (c.expected.expected) {
      exp = format_number(*c.expected.expected) + " +/- " + format_number(c.expected.tolerance.value_or(0));
    }
    rows.push_back({c.expected.name, c.value ? format_number(*c.value) : "missing", exp, c.pass ? "ok" : "MISMATCH"});
    if (c.pass) ++passed;
  }
  std::ostringstream s;
  std::vector<std::size_t> w(4, 0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < 4; ++i) w[i] = std::max(w[i], r[i].size());
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < 4; ++i) {
      std::string cell = r[i];
      if (i < 3) cell += std::string(w[i] - cell.size(), ' ') + "  ";
      line += cell;
    }
    s << line << "\n";
  }
  s << passed << "/" << checks.size() << " checks passed\n";
  return s.str();
}

int cmd_reproduce(const Options& o, std::ostream& out, std::ostream& err) {
  Calibration cal;
  const ModelConfig c = prepare(o, err, &cal);
  const std::vector<ExpectedQuantity> expected = [&] {
    if (o.expected.empty()) return default_expected();
    std::ifstream f(o.expected, std::ios::binary);
    if (!f) throw ValidationError("--expected", "cannot read '" + o.expected + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_expected(ss.str());
  }();
  const fs::path dir = o.out.empty() ? fs::path("reproduce-out") : fs::path(o.out);

  Json calibration = Json::object();
  calibration["reference"] = to_json(cal);
  for (const auto& s : c.studies) calibration[s.name] = to_json(calibrate(c, s));
  write_file(dir / "calibration.json", dump(calibration));
  write_file(dir / "calibrated_config.json", dump_config(c));

  const ComparisonTable t = comparison(c, std::nullopt, std::nullopt);
  write_file(dir / "comparison.csv", comparison_csv(t));
  write_file(dir / "comparison.txt", comparison_text(t));

  std::vector<std::vector<EvaluationReport>> sweeps;
  for (const auto& [name, s] : c.arrays) {
    if (!find_profile(c, name).is_3d()) continue;
    sweeps.push_back(run_sweep(c, name, std::nullopt, c.sweep.range));
    write_file(dir / ("sweep_" + name + ".csv"), reports_csv(sweeps.back()));
  }
  write_file(dir / "margin_vs_density.svg", render_svg(margin_plot(sweeps)));
  write_file(dir / "height_vs_layers.svg", render_svg(height_plot(sweeps)));
  const auto feas = feasibility_matrix(c, {"si3d", "aos3d"}, std::nullopt, c.min_pitch);
  write_file(dir / "feasibility.csv", feasibility_csv(feas));

  const Quantities q = reference_quantities(c);
  const auto checks = check_quantities(q, expected);
  Json results = Json::object();
  Json qj = Json::object();
  for (const auto& [name, v] : q) qj[name] = round_significant(v);
  results["quantities"] = std::move(qj);
  Json cj = Json::array();
  bool all = true;
  for (const auto& ch : checks) {
    Json e = Json::object();
    e["name"] = ch.expected.name;
    e["value"] = ch.value ? Json(round_significant(*ch.value)) : Json(nullptr);
    e["pass"] = ch.pass;
    cj.push_back(std::move(e));
    all = all && ch.pass;
  }
  results["checks"] = std::move(cj);
  write_file(dir / "results.json", dump(results));

  const std::string table = check_table(checks);
  write_file(dir / "checks.txt", table);
  out << table;
  return all ? kOk : kGoldenMismatch;
}

void common_flags(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "model config JSON")->envname("DRAM3D_CONFIG");
  sub->add_option("--profile", o.profile, "technology profile name");
  sub->add_option("--scheme", o.scheme, "direct_blsa | bl_strap | core_mux | selector_strap");
  sub->add_option("--layers", o.layers, "layer count (stacked profiles)");
  sub->add_option("--out", o.out, "output path");
  sub->add_flag("--csv", o.csv, "CSV output");
  sub->add_option("--min-pitch", o.min_pitch, "minimum bond pitch, um");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design-space exploration for monolithic 3D DRAM", "dram3d"};
  app.require_subcommand(1);
  Options o;

  auto* evaluate_cmd = app.add_subcommand("evaluate", "evaluate one configuration (JSON report)");
  auto* sweep_cmd = app.add_subcommand("sweep", "layer-count sweep (CSV, optional SVG)");
  auto* compare_cmd = app.add_subcommand("compare", "side-by-side comparison of the configured points");
  auto* calibrate_cmd = app.add_subcommand("calibrate", "fit free parameters to the anchors");
  auto* feasibility_cmd = app.add_subcommand("feasibility", "bond-pitch verdict per profile and scheme");
  auto* reproduce_cmd = app.add_subcommand("reproduce-paper", "calibrate, compare, sweep and check the reference results");

  for (auto* sub : {evaluate_cmd, sweep_cmd, compare_cmd, calibrate_cmd, feasibility_cmd, reproduce_cmd}) {
    common_flags(sub, o);
  }
  evaluate_cmd->add_option("--netlist-out", o.netlist_out, "write the bitline netlist (JSON)");
  evaluate_cmd->add_option("--waveform-out", o.waveform_out, "write the bitline transient (CSV)");
  for (auto* sub : {sweep_cmd}) {
    sub->add_option("--from", o.from, "first layer count");
    sub->add_option("--to", o.to, "last layer count");
    sub->add_option("--step", o.step, "layer increment");
    sub->add_option("--svg", o.svg, "write <prefix>_margin_vs_density.svg and <prefix>_height_vs_layers.svg");
  }
  calibrate_cmd->add_option("--study", o.study, "run a named study on top of the reference calibration");
  reproduce_cmd->add_option("--expected", o.expected, "expected-results JSON (default: built in)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  CLI::App* sub = app.get_subcommands().front();
  o.profile_opt = sub->get_option("--profile");
  o.scheme_opt = sub->get_option("--scheme");
  o.layers_opt = sub->get_option("--layers");
  o.min_pitch_opt = sub->get_option("--min-pitch");
  o.from_opt = sub->get_option_no_throw("--from");
  o.to_opt = sub->get_option_no_throw("--to");
  o.step_opt = sub->get_option_no_throw("--step");

  try {
    if (sub == evaluate_cmd) return cmd_evaluate(o, out, err);
    if (sub == sweep_cmd) return cmd_sweep(o, out, err);
    if (sub == compare_cmd) return cmd_compare(o, out, err);
    if (sub == calibrate_cmd) return cmd_calibrate(o, out, err);
    if (sub == feasibility_cmd) return cmd_feasibility(o, out, err);
    return cmd_reproduce(o, out, err);
  } catch (const Exit& e) {
    return e.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace dram3d::cli
