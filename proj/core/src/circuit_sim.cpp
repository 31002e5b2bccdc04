#include "dram3d/circuit_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "dram3d/error.hpp"
#include "dram3d/units.hpp"

namespace dram3d::sim {

namespace {

// Dense LU below this many unknowns, sparse LU above.
constexpr int kDenseLimit = 1000;

using Triplet = Eigen::Triplet<double>;

class LinearSystem {
 public:
  LinearSystem(int n, const std::vector<Triplet>& entries) : n_(n) {
    if (n_ <= kDenseLimit) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
      for (const auto& t : entries) a(t.row(), t.col()) += t.value();
      dense_ = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXd>>(a);
    } else {
      Eigen::SparseMatrix<double> a(n_, n_);
      a.setFromTriplets(entries.begin(), entries.end());
      a.makeCompressed();
      sparse_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
      sparse_->analyzePattern(a);
      sparse_->factorize(a);
      if (sparse_->info() != Eigen::Success) {
        throw SingularSystemError(-1, "sparse factorization failed: " + sparse_->lastErrorMessage());
      }
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    if (dense_) return dense_->solve(rhs);
    return sparse_->solve(rhs);
  }

 private:
  int n_;
  std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> dense_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> sparse_;
};

struct DisjointSet {
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  std::vector<int> parent;
};

std::vector<bool> switch_states(const RcNetwork& net, double t) {
  std::vector<bool> s(net.switches.size());
  for (std::size_t i = 0; i < net.switches.size(); ++i) s[i] = net.switches[i].state_at(t);
  return s;
}

DisjointSet connectivity(const RcNetwork& net, const std::vector<bool>& states) {
  DisjointSet ds(net.node_count);
  for (const auto& r : net.resistors) ds.unite(r.a, r.b);
  for (std::size_t i = 0; i < net.switches.size(); ++i) {
    if (states[i]) ds.unite(net.switches[i].a, net.switches[i].b);
  }
  return ds;
}

/// Every component must reach ground, a capacitor or a source.
void check_floating(const RcNetwork& net, const std::vector<bool>& states) {
  DisjointSet ds = connectivity(net, states);
  std::vector<bool> anchored(net.node_count, false);
  anchored[ds.find(kGround)] = true;
  for (const auto& c : net.capacitors) anchored[ds.find(c.node)] = true;
  for (const auto& s : net.sources) anchored[ds.find(s.node)] = true;
  for (int n = 1; n < net.node_count; ++n) {
    if (!anchored[ds.find(n)]) {
      throw SingularSystemError(n, "singular MNA system: node " + std::to_string(n) +
                                       " floats (no capacitor, source or ground reachable)");
    }
  }
}

std::vector<double> node_capacitance(const RcNetwork& net) {
  std::vector<double> c(net.node_count, 0.0);
  for (const auto& cap : net.capacitors) c[cap.node] += cap.farads;
  return c;
}

/// Conductance stamps for resistors and closed switches, over unknowns
/// indexed node - 1.
void stamp_conductances(const RcNetwork& net, const std::vector<bool>& states,
                        std::vector<Triplet>& out) {
  auto stamp = [&out](int a, int b, double g) {
    if (a != kGround) out.emplace_back(a - 1, a - 1, g);
    if (b != kGround) out.emplace_back(b - 1, b - 1, g);
    if (a != kGround && b != kGround) {
      out.emplace_back(a - 1, b - 1, -g);
      out.emplace_back(b - 1, a - 1, -g);
    }
  };
  for (const auto& r : net.resistors) stamp(r.a, r.b, 1.0 / r.ohms);
  for (std::size_t i = 0; i < net.switches.size(); ++i) {
    if (states[i]) stamp(net.switches[i].a, net.switches[i].b, 1.0 / net.switches[i].on_resistance);
  }
}

/// Node voltages at t = 0: capacitor nodes hold their (charge-weighted)
/// initial voltage, source nodes their source value, and purely resistive
/// nodes are solved from the conductance network.
Eigen::VectorXd initial_state(const RcNetwork& net, const std::vector<bool>& states) {
  const int n = net.node_count;
  std::vector<double> q(n, 0.0);
  std::vector<double> c(n, 0.0);
  for (const auto& cap : net.capacitors) {
    q[cap.node] += cap.farads * cap.initial_voltage;
    c[cap.node] += cap.farads;
  }
  std::vector<bool> known(n, false);
  std::vector<double> v(n, 0.0);
  known[kGround] = true;
  for (int k = 1; k < n; ++k) {
    if (c[k] > 0) {
      known[k] = true;
      v[k] = q[k] / c[k];
    }
  }
  for (const auto& s : net.sources) {
    known[s.node] = true;
    v[s.node] = s.value_at(0.0);
  }

  std::vector<int> index(n, -1);
  int m = 0;
  for (int k = 1; k < n; ++k) {
    if (!known[k]) index[k] = m++;
  }
  if (m > 0) {
    std::vector<Triplet> entries;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    auto stamp = [&](int a, int b, double g) {
      const int ia = index[a];
      const int ib = index[b];
      if (ia >= 0) {
        entries.emplace_back(ia, ia, g);
        if (ib >= 0) entries.emplace_back(ia, ib, -g); else rhs[ia] += g * v[b];
      }
      if (ib >= 0) {
        entries.emplace_back(ib, ib, g);
        if (ia >= 0) entries.emplace_back(ib, ia, -g); else rhs[ib] += g * v[a];
      }
    };
    for (const auto& r : net.resistors) stamp(r.a, r.b, 1.0 / r.ohms);
    for (std::size_t i = 0; i < net.switches.size(); ++i) {
      if (states[i]) stamp(net.switches[i].a, net.switches[i].b, 1.0 / net.switches[i].on_resistance);
    }
    const Eigen::VectorXd x = LinearSystem(m, entries).solve(rhs);
    for (int k = 1; k < n; ++k) {
      if (index[k] >= 0) v[k] = x[index[k]];
    }
  }
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) out[k] = v[k];
  return out;
}

double interpolate(const std::vector<double>& times, const std::vector<double>& values, double t) {
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times.begin());
  const double t0 = times[i - 1];
  const double t1 = times[i];
  const double f = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
  return values[i - 1] + f * (values[i] - values[i - 1]);
}

}  // namespace

bool Switch::state_at(double t) const {
  bool on = false;
  for (const auto& e : schedule) {
    if (e.time <= t) on = e.on; else break;
  }
  return on;
}

double VoltageSource::value_at(double t) const {
  if (waveform.empty()) return 0.0;
  if (t <= waveform.front().time) return waveform.front().value;
  if (t >= waveform.back().time) return waveform.back().value;
  for (std::size_t i = 1; i < waveform.size(); ++i) {
    if (t <= waveform[i].time) {
      const auto& p0 = waveform[i - 1];
      const auto& p1 = waveform[i];
      if (p1.time == p0.time) return p1.value;
      return p0.value + (p1.value - p0.value) * (t - p0.time) / (p1.time - p0.time);
    }
  }
  return waveform.back().value;
}

double RcNetwork::total_capacitance() const {
  double c = 0;
  for (const auto& cap : capacitors) c += cap.farads;
  return c;
}

void RcNetwork::validate() const {
  auto node_ok = [this](int n) { return n >= 0 && n < node_count; };
  if (node_count < 1) throw ValidationError("node_count", "must be >= 1");
  for (std::size_t i = 0; i < resistors.size(); ++i) {
    const auto& r = resistors[i];
    const std::string f = "resistors[" + std::to_string(i) + "]";
    if (!node_ok(r.a) || !node_ok(r.b)) throw ValidationError(f, "node index out of range");
    if (!(r.ohms > 0)) throw ValidationError(f + ".ohms", "must be > 0");
  }
  for (std::size_t i = 0; i < capacitors.size(); ++i) {
    const auto& c = capacitors[i];
    const std::string f = "capacitors[" + std::to_string(i) + "]";
    if (!node_ok(c.node)) throw ValidationError(f, "node index out of range");
    if (c.node == kGround) throw ValidationError(f, "capacitor on ground node");
    if (!(c.farads > 0)) throw ValidationError(f + ".farads", "must be > 0");
  }
  for (std::size_t i = 0; i < switches.size(); ++i) {
    const auto& s = switches[i];
    const std::string f = "switches[" + std::to_string(i) + "]";
    if (!node_ok(s.a) || !node_ok(s.b)) throw ValidationError(f, "node index out of range");
    if (!(s.on_resistance > 0)) throw ValidationError(f + ".on_resistance", "must be > 0");
    for (std::size_t k = 1; k < s.schedule.size(); ++k) {
      if (s.schedule[k].time < s.schedule[k - 1].time) {
        throw ValidationError(f + ".schedule", "must be time-sorted");
      }
    }
  }
  std::vector<bool> driven(node_count, false);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto& s = sources[i];
    const std::string f = "sources[" + std::to_string(i) + "]";
    if (!node_ok(s.node) || s.node == kGround) throw ValidationError(f, "invalid node");
    if (driven[s.node]) throw ValidationError(f, "node already driven by another source");
    driven[s.node] = true;
    if (s.waveform.empty()) throw ValidationError(f + ".waveform", "must not be empty");
    for (std::size_t k = 1; k < s.waveform.size(); ++k) {
      if (s.waveform[k].time < s.waveform[k - 1].time) {
        throw ValidationError(f + ".waveform", "must be time-sorted");
      }
    }
  }
  std::vector<bool> touched(node_count, false);
  for (const auto& r : resistors) touched[r.a] = touched[r.b] = true;
  for (const auto& c : capacitors) touched[c.node] = true;
  for (const auto& s : switches) touched[s.a] = touched[s.b] = true;
  for (const auto& s : sources) touched[s.node] = true;
  for (int n = 1; n < node_count; ++n) {
    if (!touched[n]) throw ValidationError("node " + std::to_string(n), "not connected to any element");
  }
}

bool Waveform::has_node(int n) const {
  return std::find(probes.begin(), probes.end(), n) != probes.end();
}

const std::vector<double>& Waveform::node(int n) const {
  auto it = std::find(probes.begin(), probes.end(), n);
  if (it == probes.end()) throw PreconditionError("node " + std::to_string(n) + " was not probed");
  return values[static_cast<std::size_t>(it - probes.begin())];
}

Waveform transient(const RcNetwork& net, double dt, double t_end, std::span<const int> probes) {
  if (!(dt > 0)) throw PreconditionError("transient: dt must be > 0");
  if (!(t_end >= dt)) throw PreconditionError("transient: t_end must be >= dt");
  net.validate();
  for (int p : probes) {
    if (p < 0 || p >= net.node_count) throw PreconditionError("probe node out of range");
  }

  const int n_nodes = net.node_count - 1;
  const int n_unknowns = n_nodes + static_cast<int>(net.sources.size());
  const std::vector<double> cap = node_capacitance(net);

  // Switch event times inside (0, t_end); events at t <= 0 set the initial state.
  std::vector<double> events;
  for (const auto& s : net.switches) {
    for (const auto& e : s.schedule) {
      if (e.time > 0 && e.time < t_end) events.push_back(e.time);
    }
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  std::vector<bool> states = switch_states(net, 0.0);
  check_floating(net, states);
  Eigen::VectorXd v = initial_state(net, states);

  Waveform w;
  w.probes.assign(probes.begin(), probes.end());
  w.values.resize(w.probes.size());
  auto record = [&](double t) {
    w.times.push_back(t);
    for (std::size_t i = 0; i < w.probes.size(); ++i) w.values[i].push_back(v[w.probes[i]]);
  };
  record(0.0);

  std::map<std::pair<std::vector<bool>, double>, std::unique_ptr<LinearSystem>> cache;
  auto system_for = [&](const std::vector<bool>& st, double h) -> const LinearSystem& {
    auto key = std::make_pair(st, h);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    std::vector<Triplet> entries;
    stamp_conductances(net, st, entries);
    for (int k = 1; k < net.node_count; ++k) {
      if (cap[k] > 0) entries.emplace_back(k - 1, k - 1, cap[k] / h);
    }
    for (std::size_t s = 0; s < net.sources.size(); ++s) {
      const int row = n_nodes + static_cast<int>(s);
      const int node = net.sources[s].node - 1;
      entries.emplace_back(node, row, 1.0);
      entries.emplace_back(row, node, 1.0);
    }
    auto sys = std::make_unique<LinearSystem>(n_unknowns, entries);
    return *cache.emplace(std::move(key), std::move(sys)).first->second;
  };

  const double snap = 1e-9 * dt;
  double t = 0.0;
  std::size_t next_event = 0;
  long grid = 0;
  Eigen::VectorXd rhs(n_unknowns);
  while (t < t_end - snap) {
    double target = std::min(static_cast<double>(grid + 1) * dt, t_end);
    if (next_event < events.size() && events[next_event] < target + snap) {
      target = events[next_event];
    }
    if (target >= static_cast<double>(grid + 1) * dt - snap) ++grid;
    if (t_end - target < snap) target = t_end;

    const double h = target - t;
    if (h > snap) {
      const LinearSystem& sys = system_for(states, h);
      rhs.setZero();
      for (int k = 1; k < net.node_count; ++k) {
        if (cap[k] > 0) rhs[k - 1] = cap[k] / h * v[k];
      }
      for (std::size_t s = 0; s < net.sources.size(); ++s) {
        rhs[n_nodes + static_cast<int>(s)] = net.sources[s].value_at(target);
      }
      const Eigen::VectorXd x = sys.solve(rhs);
      for (int k = 1; k < net.node_count; ++k) v[k] = x[k - 1];
      t = target;
      record(t);
    } else {
      t = target;
    }

    bool changed = false;
    while (next_event < events.size() && events[next_event] <= t + snap) {
      ++next_event;
      changed = true;
    }
    if (changed) {
      states = switch_states(net, t + snap);
      check_floating(net, states);
    }
  }
  return w;
}

std::optional<double> settle_time(const Waveform& w, int node, double target, double tolerance) {
  if (!(tolerance > 0 && tolerance < 1)) throw PreconditionError("settle_time: tolerance must lie in (0, 1)");
  const auto& v = w.node(node);
  const auto& t = w.times;
  if (v.empty()) throw PreconditionError("settle_time: empty waveform");
  const double band = tolerance * std::abs(target - v.front());

  std::optional<std::size_t> last_out;
  for (std::size_t i = v.size(); i-- > 0;) {
    if (std::abs(v[i] - target) > band) {
      last_out = i;
      break;
    }
  }
  if (!last_out) return t.front();
  const std::size_t i = *last_out;
  if (i + 1 >= v.size()) return std::nullopt;

  const double e0 = v[i] - target;
  const double e1 = v[i + 1] - target;
  const double edge = e0 > 0 ? band : -band;
  const double f = e1 != e0 ? (edge - e0) / (e1 - e0) : 1.0;
  return t[i] + std::clamp(f, 0.0, 1.0) * (t[i + 1] - t[i]);
}

double charge_audit(const RcNetwork& net, const Waveform& w, double t_start, double t_end) {
  if (t_end < t_start) throw PreconditionError("charge_audit: t_end < t_start");
  for (const auto& s : net.switches) {
    for (const auto& e : s.schedule) {
      if (e.time > t_start && e.time < t_end) {
        throw PreconditionError("charge_audit: interval contains a switch event");
      }
    }
  }
  const std::vector<bool> states = switch_states(net, t_start);
  DisjointSet ds = connectivity(net, states);
  std::vector<bool> driven(net.node_count, false);
  for (const auto& s : net.sources) driven[ds.find(s.node)] = true;
  for (const auto& c : net.capacitors) {
    if (driven[ds.find(c.node)]) {
      throw PreconditionError("charge_audit: capacitor at node " + std::to_string(c.node) +
                              " is connected to a source");
    }
  }
  if (t_end == t_start) return 0.0;

  double q0 = 0;
  double q1 = 0;
  for (const auto& c : net.capacitors) {
    const auto& v = w.node(c.node);
    q0 += c.farads * interpolate(w.times, v, t_start);
    q1 += c.farads * interpolate(w.times, v, t_end);
  }
  const double dq = std::abs(q1 - q0);
  if (q0 == 0) return dq == 0 ? 0.0 : dq / net.total_capacitance();
  return dq / std::abs(q0);
}

std::string BlNetwork::describe() const {
  std::ostringstream os;
  os << "node 0: ground\n"
     << "node " << blsa_node << ": sense-amplifier input\n"
     << "node " << strap_node << ": strap\n"
     << "node " << cell_node << ": storage node\n";
  for (int j = 0; j < ladder_count; ++j) {
    os << "nodes " << ladder_node(j, 0) << ".." << ladder_node(j, layers - 1) << ": ladder " << j
       << (j == 0 ? " (selected)" : "") << ", layer 0 .. " << layers - 1 << "\n";
  }
  return os.str();
}

BlNetwork build_bl_network(const ArrayConfig& config, const OperatingPoint& op,
                           const BlNetworkOptions& options) {
  using namespace units;
  validate(config);
  if (!config.profile.is_3d()) {
    throw PreconditionError("build_bl_network requires a stacked3d profile");
  }
  const auto& p = config.profile;
  const auto& topo = config.topology;
  // Zero-resistance elements are given a negligible value so every branch
  // can be stamped.
  constexpr double kMinOhms = 1e-3;

  BlNetwork bl;
  bl.layers = *config.n_layers;
  bl.ladder_count = topo.scheme == Scheme::bl_strap ? topo.bls_per_strap : 1;
  bl.precharge = 0.5 * op.v_array;
  bl.share_time = options.share_time;

  RcNetwork& net = bl.network;
  net.node_count = 4 + bl.ladder_count * bl.layers;

  const double local = local_bl_capacitance(config);
  const double strap_cap = effective_bl_capacitance(config) - local * bl.ladder_count - topo.c_bond;
  if (topo.c_bond > 0) net.capacitors.push_back({bl.blsa_node, fF_to_F(topo.c_bond), bl.precharge});
  if (strap_cap > 1e-12) net.capacitors.push_back({bl.strap_node, fF_to_F(strap_cap), bl.precharge});
  net.capacitors.push_back({bl.cell_node, fF_to_F(p.cs), options.cell_high ? op.v_array : 0.0});

  net.resistors.push_back({bl.strap_node, bl.blsa_node, std::max(kohm_to_ohm(topo.r_bond), kMinOhms)});

  const double r_layer = std::max(kohm_to_ohm(p.rbl_per_layer), kMinOhms);
  const bool gated = topo.scheme == Scheme::selector_strap || topo.scheme == Scheme::core_mux;
  for (int j = 0; j < bl.ladder_count; ++j) {
    for (int k = 0; k < bl.layers; ++k) {
      if (p.cbl_per_layer > 0) {
        net.capacitors.push_back({bl.ladder_node(j, k), fF_to_F(p.cbl_per_layer), bl.precharge});
      }
      if (k + 1 < bl.layers) net.resistors.push_back({bl.ladder_node(j, k), bl.ladder_node(j, k + 1), r_layer});
    }
    if (gated && j == 0) {
      const double r_sel = kohm_to_ohm(topo.selector->on_resistance());
      net.switches.push_back({bl.ladder_node(j, 0), bl.strap_node, r_sel + r_layer, {{0.0, true}}});
    } else {
      net.resistors.push_back({bl.ladder_node(j, 0), bl.strap_node, r_layer});
    }
  }

  // Access device: on-resistance at wordline overdrive.
  const double r_access = op.v_pp / uA_to_A(p.transistor.i_on);
  net.switches.push_back({bl.cell_node, bl.ladder_node(0, bl.layers - 1), r_access,
                          {{options.share_time, true}}});
  return bl;
}

double simulated_sense_margin(const ArrayConfig& config, const OperatingPoint& op, double dt,
                              double t_end) {
  const BlNetwork bl = build_bl_network(config, op);
  const int probe[] = {bl.blsa_node};
  const Waveform w = transient(bl.network, dt, t_end, probe);
  return units::V_to_mV(w.values[0].back() - bl.precharge);
}

}  // namespace dram3d::sim
