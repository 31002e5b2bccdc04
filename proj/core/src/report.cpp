#include "dram3d/report.hpp"

#include <algorithm>
#include <sstream>

#include "dram3d/format.hpp"

namespace dram3d {

namespace {

Json num(double v) { return round_significant(v); }

Json opt_num(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string provenance_cell(const std::vector<ProvenanceEntry>& p) {
  std::string s;
  for (const auto& e : p) {
    if (!s.empty()) s += ';';
    s += e.parameter + "=" + format_number(e.value);
  }
  return s;
}

std::string pad_right(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string pad_left(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

// Column 0 left aligned, the rest right aligned, two spaces apart.
std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0) line += "  ";
      line += i == 0 ? pad_right(r[i], width[i]) : pad_left(r[i], width[i]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string join(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) s += ',';
    s += cells[i];
  }
  return s + "\n";
}

}  // namespace

std::string feasibility_verdict(const EvaluationReport& r) {
  if (!r.feasibility) return "n/a";
  return r.feasibility->feasible ? "feasible" : "infeasible";
}

Json to_json(const EvaluationReport& r) {
  Json j = Json::object();
  Json echo = Json::object();
  echo["profile"] = r.profile;
  echo["scheme"] = std::string(to_string(r.scheme));
  echo["n_layers"] = r.n_layers ? Json(*r.n_layers) : Json(nullptr);
  echo["v_array"] = num(r.v_array);
  j["config"] = std::move(echo);
  j["c_bl_effective"] = num(r.c_bl_effective);
  j["sense_margin"] = num(r.sense_margin);
  j["margin_after_disturb"] = num(r.margin_after_disturb);
  j["t_rc"] = num(r.t_rc);
  Json stages = Json::object();
  stages["wordline"] = num(r.timing.wordline);
  stages["bitline"] = num(r.timing.bitline);
  stages["sense"] = num(r.timing.sense);
  stages["restore"] = num(r.timing.restore);
  stages["overhead"] = num(r.timing.overhead);
  j["t_rc_stages"] = std::move(stages);
  j["e_read"] = num(r.e_read);
  j["e_write"] = num(r.e_write);
  j["hcb_pitch"] = opt_num(r.hcb_pitch);
  j["blsa_area"] = opt_num(r.blsa_area);
  j["bit_density"] = num(r.bit_density);
  j["stack_height"] = opt_num(r.stack_height);
  Json f = Json::object();
  f["verdict"] = feasibility_verdict(r);
  f["pitch_margin"] = r.feasibility ? num(r.feasibility->margin) : Json(nullptr);
  j["feasibility"] = std::move(f);
  Json prov = Json::array();
  for (const auto& e : r.provenance) {
    Json p = Json::object();
    p["parameter"] = e.parameter;
    p["value"] = num(e.value);
    prov.push_back(std::move(p));
  }
  j["provenance"] = std::move(prov);
  return j;
}

const std::vector<std::string>& report_csv_columns() {
  static const std::vector<std::string> cols = {
      "profile",      "scheme",      "n_layers",      "v_array",     "c_bl_effective",
      "sense_margin", "margin_after_disturb", "t_wordline", "t_bitline", "t_sense",
      "t_restore",    "t_overhead",  "t_rc",          "e_read",      "e_write",
      "hcb_pitch",    "blsa_area",   "bit_density",   "stack_height", "feasibility",
      "pitch_margin", "provenance"};
  return cols;
}

std::string reports_csv(std::span<const EvaluationReport> reports) {
  std::string out = join(report_csv_columns());
  for (const auto& r : reports) {
    out += join({r.profile,
                 std::string(to_string(r.scheme)),
                 r.n_layers ? std::to_string(*r.n_layers) : "",
                 format_number(r.v_array),
                 format_number(r.c_bl_effective),
                 format_number(r.sense_margin),
                 format_number(r.margin_after_disturb),
                 format_number(r.timing.wordline),
                 format_number(r.timing.bitline),
                 format_number(r.timing.sense),
                 format_number(r.timing.restore),
                 format_number(r.timing.overhead),
                 format_number(r.t_rc),
                 format_number(r.e_read),
                 format_number(r.e_write),
                 cell(r.hcb_pitch),
                 cell(r.blsa_area),
                 format_number(r.bit_density),
                 cell(r.stack_height),
                 feasibility_verdict(r),
                 r.feasibility ? format_number(r.feasibility->margin) : "",
                 provenance_cell(r.provenance)});
  }
  return out;
}

Json to_json(const ComparisonTable& t) {
  Json j = Json::object();
  j["baseline"] = t.labels.empty() ? Json(nullptr) : Json(t.labels.front());
  j["metrics"] = t.metrics;
  Json rows = Json::array();
  for (std::size_t i = 0; i < t.reports.size(); ++i) {
    Json row = Json::object();
    row["label"] = t.labels[i];
    Json values = Json::object();
    Json ratios = Json::object();
    for (std::size_t m = 0; m < t.metrics.size(); ++m) {
      values[t.metrics[m]] = opt_num(t.values[i][m]);
      ratios[t.metrics[m]] = opt_num(t.ratios[i][m]);
    }
    row["values"] = std::move(values);
    row["ratio_to_baseline"] = std::move(ratios);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string comparison_csv(const ComparisonTable& t) {
  std::vector<std::string> header = {"config"};
  for (const auto& m : t.metrics) header.push_back(m);
  for (const auto& m : t.metrics) header.push_back(m + "_ratio");
  std::string out = join(header);
  for (std::size_t i = 0; i < t.reports.size(); ++i) {
    std::vector<std::string> row = {t.labels[i]};
    for (const auto& v : t.values[i]) row.push_back(cell(v));
    for (const auto& v : t.ratios[i]) row.push_back(cell(v));
    out += join(row);
  }
  return out;
}

std::string comparison_text(const ComparisonTable& t) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"metric"};
  for (const auto& l : t.labels) header.push_back(l);
  for (std::size_t i = 1; i < t.labels.size(); ++i) header.push_back("ratio " + t.labels[i]);
  rows.push_back(header);
  for (std::size_t m = 0; m < t.metrics.size(); ++m) {
    std::vector<std::string> row = {t.metrics[m]};
    for (std::size_t i = 0; i < t.reports.size(); ++i) row.push_back(cell(t.values[i][m]));
    for (std::size_t i = 1; i < t.reports.size(); ++i) row.push_back(cell(t.ratios[i][m]));
    for (auto& c : row) {
      if (c.empty()) c = "-";
    }
    rows.push_back(std::move(row));
  }
  return aligned(rows);
}

Json to_json(const Calibration& c) {
  Json j = Json::object();
  j["converged"] = c.converged;
  j["sweeps"] = c.sweeps;
  Json params = Json::object();
  for (const auto& p : c.parameters) {
    Json pj = Json::object();
    pj["value"] = num(p.value);
    pj["lower"] = num(p.lower);
    pj["upper"] = num(p.upper);
    params[p.name] = std::move(pj);
  }
  j["free_parameters"] = std::move(params);
  Json res = Json::object();
  for (const auto& r : c.residuals) {
    Json rj = Json::object();
    rj["target"] = num(r.target);
    rj["value"] = num(r.value);
    rj["relative_error"] = num(r.relative_error);
    res[r.name] = std::move(rj);
  }
  j["residuals"] = std::move(res);
  return j;
}

std::string residual_text(const Calibration& c) {
  std::vector<std::vector<std::string>> rows = {{"anchor", "target", "value", "rel_error"}};
  for (const auto& r : c.residuals) {
    rows.push_back({r.name, format_number(r.target), format_number(r.value),
                    format_number(r.relative_error)});
  }
  std::string out = aligned(rows);
  std::vector<std::vector<std::string>> params = {{"parameter", "value", "lower", "upper"}};
  for (const auto& p : c.parameters) {
    params.push_back({p.name, format_number(p.value), format_number(p.lower), format_number(p.upper)});
  }
  if (!c.parameters.empty()) out += "\n" + aligned(params);
  out += std::string("\nconverged: ") + (c.converged ? "yes" : "no") + " after " +
         std::to_string(c.sweeps) + " sweep(s)\n";
  return out;
}

std::string residual_csv(const Calibration& c) {
  std::string out = "anchor,target,value,relative_error\n";
  for (const auto& r : c.residuals) {
    out += join({r.name, format_number(r.target), format_number(r.value), format_number(r.relative_error)});
  }
  return out;
}

std::string feasibility_text(std::span<const FeasibilityRow> rows) {
  std::vector<std::vector<std::string>> t = {{"profile", "scheme", "hcb_pitch_um", "min_pitch_um", "verdict"}};
  for (const auto& r : rows) {
    t.push_back({r.profile, std::string(to_string(r.scheme)), format_number(r.hcb_pitch),
                 format_number(r.min_pitch), r.feasible ? "feasible" : "infeasible"});
  }
  return aligned(t);
}

std::string feasibility_csv(std::span<const FeasibilityRow> rows) {
  std::string out = "profile,scheme,hcb_pitch,min_pitch,verdict\n";
  for (const auto& r : rows) {
    out += join({r.profile, std::string(to_string(r.scheme)), format_number(r.hcb_pitch),
                 format_number(r.min_pitch), r.feasible ? "feasible" : "infeasible"});
  }
  return out;
}

Json to_json(std::span<const FeasibilityRow> rows) {
  Json j = Json::array();
  for (const auto& r : rows) {
    Json rj = Json::object();
    rj["profile"] = r.profile;
    rj["scheme"] = std::string(to_string(r.scheme));
    rj["hcb_pitch"] = num(r.hcb_pitch);
    rj["min_pitch"] = num(r.min_pitch);
    rj["verdict"] = r.feasible ? "feasible" : "infeasible";
    j.push_back(std::move(rj));
  }
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dram3d
