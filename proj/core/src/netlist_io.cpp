#include <cstdio>
#include <sstream>

#include "dram3d/circuit_sim.hpp"
#include "dram3d/error.hpp"
#include "json_util.hpp"

namespace dram3d::sim {

using detail::Json;
using detail::StrictObject;

std::string dump_netlist(const RcNetwork& net) {
  Json j = Json::object();
  j["node_count"] = net.node_count;
  Json rs = Json::array();
  for (const auto& r : net.resistors) rs.push_back({{"a", r.a}, {"b", r.b}, {"ohms", r.ohms}});
  Json cs = Json::array();
  for (const auto& c : net.capacitors) {
    cs.push_back({{"node", c.node}, {"farads", c.farads}, {"initial_voltage", c.initial_voltage}});
  }
  Json ss = Json::array();
  for (const auto& s : net.switches) {
    Json sched = Json::array();
    for (const auto& e : s.schedule) sched.push_back({{"time", e.time}, {"on", e.on}});
    ss.push_back({{"a", s.a}, {"b", s.b}, {"on_resistance", s.on_resistance}, {"schedule", sched}});
  }
  Json vs = Json::array();
  for (const auto& s : net.sources) {
    Json pts = Json::array();
    for (const auto& p : s.waveform) pts.push_back({{"time", p.time}, {"value", p.value}});
    vs.push_back({{"node", s.node}, {"waveform", pts}});
  }
  j["resistors"] = std::move(rs);
  j["capacitors"] = std::move(cs);
  j["switches"] = std::move(ss);
  j["sources"] = std::move(vs);
  return j.dump(2) + "\n";
}

RcNetwork load_netlist(std::string_view document) {
  const Json root = detail::parse_document(document);
  StrictObject o(root, "");
  RcNetwork net;
  net.node_count = o.integer("node_count");

  auto list = [&](std::string_view key) -> const Json* {
    const Json* j = o.opt_child(key);
    if (j) detail::expect_array(*j, std::string(key));
    return j;
  };

  if (const Json* rs = list("resistors")) {
    for (std::size_t i = 0; i < rs->size(); ++i) {
      StrictObject r((*rs)[i], "resistors[" + std::to_string(i) + "]");
      net.resistors.push_back({r.integer("a"), r.integer("b"), r.number("ohms")});
      r.finish();
    }
  }
  if (const Json* cs = list("capacitors")) {
    for (std::size_t i = 0; i < cs->size(); ++i) {
      StrictObject c((*cs)[i], "capacitors[" + std::to_string(i) + "]");
      net.capacitors.push_back({c.integer("node"), c.number("farads"), c.number_or("initial_voltage", 0.0)});
      c.finish();
    }
  }
  if (const Json* ss = list("switches")) {
    for (std::size_t i = 0; i < ss->size(); ++i) {
      const std::string path = "switches[" + std::to_string(i) + "]";
      StrictObject s((*ss)[i], path);
      Switch sw{s.integer("a"), s.integer("b"), s.number("on_resistance"), {}};
      if (const Json* sched = s.opt_child("schedule")) {
        detail::expect_array(*sched, path + ".schedule");
        for (std::size_t k = 0; k < sched->size(); ++k) {
          StrictObject e((*sched)[k], path + ".schedule[" + std::to_string(k) + "]");
          const Json& on = e.child("on");
          if (!on.is_boolean()) throw ValidationError(e.field("on"), "expected a boolean");
          sw.schedule.push_back({e.number("time"), on.get<bool>()});
          e.finish();
        }
      }
      s.finish();
      net.switches.push_back(std::move(sw));
    }
  }
  if (const Json* vs = list("sources")) {
    for (std::size_t i = 0; i < vs->size(); ++i) {
      const std::string path = "sources[" + std::to_string(i) + "]";
      StrictObject s((*vs)[i], path);
      VoltageSource src{s.integer("node"), {}};
      const Json& pts = detail::expect_array(s.child("waveform"), path + ".waveform");
      for (std::size_t k = 0; k < pts.size(); ++k) {
        StrictObject p(pts[k], path + ".waveform[" + std::to_string(k) + "]");
        src.waveform.push_back({p.number("time"), p.number("value")});
        p.finish();
      }
      s.finish();
      net.sources.push_back(std::move(src));
    }
  }
  o.finish();
  net.validate();
  return net;
}

std::string waveform_csv(const Waveform& w) {
  std::string out = "time_s";
  for (int p : w.probes) out += ",node_" + std::to_string(p);
  out += '\n';
  char buf[32];
  for (std::size_t i = 0; i < w.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g", w.times[i]);
    out += buf;
    for (const auto& col : w.values) {
      std::snprintf(buf, sizeof buf, ",%.9g", col[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace dram3d::sim
