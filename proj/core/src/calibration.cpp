#include "dram3d/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dram3d/error.hpp"

namespace dram3d {

void validate(const CalibrationAnchor& a, const std::string& path) {
  if (a.name.empty()) throw ValidationError(path + ".name", "must not be empty");
  if (a.observable.metric.empty()) throw ValidationError(path + ".observable.metric", "must not be empty");
  if (a.observable.at.profile.empty()) throw ValidationError(path + ".observable.profile", "must not be empty");
  if (!std::isfinite(a.target)) throw ValidationError(path + ".target", "must be finite");
  if (!(a.weight >= 0) || !std::isfinite(a.weight)) throw ValidationError(path + ".weight", "must be >= 0");
}

void validate(const FreeParameter& p, const std::string& path) {
  if (p.name.empty()) throw ValidationError(path + ".name", "must not be empty");
  if (!std::isfinite(p.lower) || !std::isfinite(p.upper) || !(p.lower < p.upper)) {
    throw ValidationError(path, "bounds must be finite with lower < upper");
  }
}

namespace {

double relative(double value, double target) {
  return target != 0 ? (value - target) / std::abs(target) : value - target;
}

class Solver {
 public:
  Solver(const CalibrationProblem& p, const CalibrationOptions& o) : p_(p), o_(o) {}

  Calibration run() {
    check_shape();
    x_.clear();
    for (const auto& s : p_.parameters) x_.push_back(std::clamp(s.initial, s.lower, s.upper));

    Calibration out;
    if (!x_.empty()) {
      find_sensitive_anchors();
      for (int sweep = 1; sweep <= o_.max_sweeps; ++sweep) {
        double step = 0;
        for (std::size_t i = 0; i < x_.size(); ++i) {
          const double before = x_[i];
          x_[i] = sensitive_[i].size() == 1 ? solve_single(i, sensitive_[i].front()) : solve_least_squares(i);
          const double scale = std::max(std::abs(before), std::abs(x_[i]));
          if (scale > 0) step = std::max(step, std::abs(x_[i] - before) / scale);
        }
        out.sweeps = sweep;
        out.last_step = step;
        if (step <= o_.tolerance) break;
      }
      out.converged = out.last_step < o_.converged_step;
    } else {
      out.converged = true;
    }

    for (std::size_t i = 0; i < x_.size(); ++i) {
      const auto& s = p_.parameters[i];
      out.parameters.push_back({s.name, x_[i], s.lower, s.upper, s.initial});
    }
    const auto obs = p_.observe(x_);
    for (std::size_t a = 0; a < obs.size(); ++a) {
      const double r = relative(obs[a], p_.targets[a]);
      out.residuals.push_back({p_.anchor_names[a], p_.targets[a], obs[a], r, p_.weights[a]});
      out.objective += p_.weights[a] * r * r;
    }
    return out;
  }

 private:
  void check_shape() const {
    const std::size_t n = p_.anchor_names.size();
    if (n == 0) throw PreconditionError("calibrate: at least one anchor is required");
    if (p_.targets.size() != n || p_.weights.size() != n) {
      throw PreconditionError("calibrate: anchor arrays differ in length");
    }
    if (!p_.observe) throw PreconditionError("calibrate: no observation function");
    for (const auto& s : p_.parameters) {
      if (!(s.lower < s.upper)) throw PreconditionError("calibrate: empty bounds for " + s.name);
    }
  }

  std::vector<double> observe_with(std::size_t i, double v) {
    const double saved = x_[i];
    x_[i] = v;
    auto obs = p_.observe(x_);
    x_[i] = saved;
    if (obs.size() != p_.targets.size()) throw PreconditionError("calibrate: observation count mismatch");
    return obs;
  }

  // Anchors that move when parameter i is nudged across its range.
  void find_sensitive_anchors() {
    sensitive_.assign(x_.size(), {});
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const auto& s = p_.parameters[i];
      const double h = 1e-3 * (s.upper - s.lower);
      const double lo = std::max(s.lower, x_[i] - h);
      const double hi = std::min(s.upper, x_[i] + h);
      const auto a = observe_with(i, lo);
      const auto b = observe_with(i, hi);
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double tol = 1e-12 * std::max({std::abs(a[k]), std::abs(b[k]), 1e-300});
        if (p_.weights[k] > 0 && std::abs(a[k] - b[k]) > tol) sensitive_[i].push_back(k);
      }
      if (sensitive_[i].empty()) {
        throw CalibrationError("parameter '" + s.name + "' does not influence any weighted anchor");
      }
    }
  }

  // Root of one anchor's residual; falls back to least squares without a
  // sign change in range.
  double solve_single(std::size_t i, std::size_t anchor) {
    const auto& s = p_.parameters[i];
    auto f = [&](double v) { return observe_with(i, v)[anchor] - p_.targets[anchor]; };
    double lo = s.lower, hi = s.upper;
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo < 0) == (fhi < 0)) return solve_least_squares(i);
    for (int it = 0; it < 400; ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      if (fm == 0) return mid;
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return lo + 0.5 * (hi - lo);
  }

  double objective_slope(std::size_t i, double v) {
    const auto& s = p_.parameters[i];
    const double h = 1e-4 * std::max(std::abs(v), 1e-6 * (s.upper - s.lower));
    const double a = std::max(s.lower, v - h);
    const double b = std::min(s.upper, v + h);
    const auto oa = observe_with(i, a);
    const auto ob = observe_with(i, b);
    double g = 0;
    for (std::size_t k : sensitive_[i]) {
      const double ra = relative(oa[k], p_.targets[k]);
      const double rb = relative(ob[k], p_.targets[k]);
      g += p_.weights[k] * (rb - ra) * (rb + ra);
    }
    return g / (b - a);
  }

  // Stationary point of the objective along parameter i (bounded).
  double solve_least_squares(std::size_t i) {
    const auto& s = p_.parameters[i];
    double lo = s.lower, hi = s.upper;
    if (objective_slope(i, lo) >= 0) return lo;
    if (objective_slope(i, hi) <= 0) return hi;
    for (int it = 0; it < 400; ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      if (objective_slope(i, mid) < 0) lo = mid; else hi = mid;
    }
    return lo + 0.5 * (hi - lo);
  }

  const CalibrationProblem& p_;
  const CalibrationOptions& o_;
  std::vector<double> x_;
  std::vector<std::vector<std::size_t>> sensitive_;
};

}  // namespace

Calibration solve(const CalibrationProblem& problem, const CalibrationOptions& options) {
  return Solver(problem, options).run();
}

double max_abs_residual(const Calibration& c) {
  double m = 0;
  for (const auto& r : c.residuals) m = std::max(m, std::abs(r.relative_error));
  return m;
}

}  // namespace dram3d
