#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "dram3d/circuit_sim.hpp"
#include "dram3d/error.hpp"

using namespace dram3d;
using namespace dram3d::sim;

namespace {

RcNetwork sample() {
  RcNetwork n;
  n.node_count = 4;
  n.sources.push_back({1, {{0.0, 0.0}, {1e-10, 1.2}}});
  n.resistors.push_back({1, 2, 1234.5});
  n.capacitors.push_back({2, 3.3e-15, 0.1});
  n.capacitors.push_back({3, 1.7e-15, 0.9});
  n.switches.push_back({2, 3, 2e5, {{1e-10, true}, {3e-10, false}}});
  return n;
}

}  // namespace

TEST(Netlist, RoundTripIsExact) {
  const auto n = sample();
  const std::string text = dump_netlist(n);
  const auto back = load_netlist(text);
  EXPECT_EQ(back.node_count, n.node_count);
  ASSERT_EQ(back.resistors.size(), 1u);
  EXPECT_EQ(back.resistors[0].ohms, 1234.5);
  ASSERT_EQ(back.capacitors.size(), 2u);
  EXPECT_EQ(back.capacitors[1].farads, 1.7e-15);
  EXPECT_EQ(back.capacitors[1].initial_voltage, 0.9);
  ASSERT_EQ(back.switches.size(), 1u);
  ASSERT_EQ(back.switches[0].schedule.size(), 2u);
  EXPECT_FALSE(back.switches[0].schedule[1].on);
  ASSERT_EQ(back.sources.size(), 1u);
  EXPECT_EQ(back.sources[0].waveform[1].value, 1.2);
  EXPECT_EQ(dump_netlist(back), text);
}

TEST(Netlist, GeneratedBitlineRoundTrips) {
  ArrayConfig c;
  c.profile = builtin_profile("si3d");
  c.n_layers = 12;
  const auto bl = build_bl_network(c, operating_point(c.profile, 0.6));
  const auto back = load_netlist(dump_netlist(bl.network));
  const int probe[] = {bl.blsa_node};
  const auto a = transient(bl.network, 1e-11, 5e-9, probe);
  const auto b = transient(back, 1e-11, 5e-9, probe);
  EXPECT_EQ(a.values, b.values);
}

TEST(Netlist, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(load_netlist(R"({"node_count": 2, "extra": 1})"), ValidationError);
  EXPECT_THROW(load_netlist(R"({"node_count": 2, "resistors": {}})"), ValidationError);
  EXPECT_THROW(load_netlist(R"({"node_count": 3, "switches": [{"a": 1, "b": 2, "on_resistance": 1,
      "schedule": [{"time": 0, "on": 1}]}]})"),
               ValidationError);
  EXPECT_THROW(load_netlist(R"({"resistors": []})"), ValidationError);
  EXPECT_THROW(load_netlist("{not json"), ParseError);
}

TEST(Netlist, RejectsInvalidElements) {
  EXPECT_THROW(load_netlist(R"({"node_count": 2, "resistors": [{"a": 0, "b": 5, "ohms": 1}]})"),
               ValidationError);
  EXPECT_THROW(load_netlist(R"({"node_count": 2, "capacitors": [{"node": 1, "farads": -1}]})"),
               ValidationError);
  try {
    load_netlist(R"({"node_count": 2, "capacitors": [{"node": 1, "farads": 1e-15, "bogus": 0}]})");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("capacitors[0]"), std::string::npos) << e.what();
  }
}

TEST(Netlist, WaveformCsv) {
  const auto n = sample();
  const int probe[] = {2, 3};
  const auto w = transient(n, 1e-10, 4e-10, probe);
  const std::string csv = waveform_csv(w);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "time_s,node_2,node_3");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 2);
  }
  EXPECT_EQ(rows, static_cast<int>(w.times.size()));
}
