// Copyright 2026 The udcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace udcert::optim {

enum class LbfgsStatus {
  converged,           // ||g||_inf <= gradient_tolerance
  target_reached,      // f <= target_value
  max_iterations,
  line_search_failed,  // no decrease along the search direction
};

inline const char* to_string(LbfgsStatus s) {
  switch (s) {
    case LbfgsStatus::converged: return "converged";
    case LbfgsStatus::target_reached: return "target_reached";
    case LbfgsStatus::max_iterations: return "max_iterations";
    default: return "line_search_failed";
  }
}

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 500;
  double gradient_tolerance = 1e-10;
  double target_value = -std::numeric_limits<double>::infinity();
  int max_line_search = 40;
  double armijo = 1e-4;
  double curvature = 0.9;
};

struct LbfgsResult {
  double initial_value = 0.0;
  double value = 0.0;
  double gradient_inf_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::max_iterations;
  /// Objective at the start point followed by the value after each accepted step.
  std::vector<double> accepted_values;

  bool degraded() const { return status == LbfgsStatus::line_search_failed; }
};

namespace detail {

struct LinePoint {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd g;
};

// Minimizer of the cubic interpolating (a, fa, da) and (b, fb, db), clamped to
// the inner 80% of the bracket; bisection when the cubic is degenerate.
inline double cubic_step(double a, double fa, double da, double b, double fb, double db) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double margin = 0.1 * (hi - lo);
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  double t = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom != 0.0) {
      const double c = b - (b - a) * (db + d2 - d1) / denom;
      if (std::isfinite(c)) t = c;
    }
  }
  return std::clamp(t, lo + margin, hi - margin);
}

}  // namespace detail

/// Limited-memory BFGS with a strong-Wolfe line search.
///
/// `objective(x, grad)` returns f(x) and writes the gradient. `x` holds the
/// start point on entry and the best iterate on exit. Every accepted step
/// satisfies the Armijo condition, so the returned value never exceeds the
/// initial one.
template <class Objective>
LbfgsResult minimize_lbfgs(Objective&& objective, Eigen::VectorXd& x,
                           const LbfgsOptions& opt = {}) {
  using Eigen::VectorXd;
  LbfgsResult res;
  VectorXd g(x.size());
  double f = objective(x, g);
  res.evaluations = 1;
  res.initial_value = f;
  res.accepted_values.push_back(f);

  std::deque<VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  auto finish = [&](LbfgsStatus status) {
    res.status = status;
    res.value = f;
    res.gradient_inf_norm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
    return res;
  };

  if (g.size() == 0 || g.cwiseAbs().maxCoeff() <= opt.gradient_tolerance)
    return finish(LbfgsStatus::converged);
  if (f <= opt.target_value) return finish(LbfgsStatus::target_reached);

  auto eval_at = [&](const VectorXd& p, double alpha) {
    detail::LinePoint pt;
    pt.alpha = alpha;
    pt.x = x + alpha * p;
    pt.g.resize(x.size());
    pt.f = objective(pt.x, pt.g);
    ++res.evaluations;
    if (!std::isfinite(pt.f)) pt.f = std::numeric_limits<double>::infinity();
    pt.slope = pt.g.dot(p);
    return pt;
  };

  // Returns true and fills `out` when a point with sufficient decrease was found.
  auto line_search = [&](const VectorXd& p, double slope0, double alpha,
                         detail::LinePoint& out) {
    const double c1 = opt.armijo, c2 = opt.curvature;
    detail::LinePoint prev;
    prev.alpha = 0.0;
    prev.f = f;
    prev.slope = slope0;
    prev.x = x;
    prev.g = g;
    bool have_best = false;
    detail::LinePoint best;
    auto note = [&](const detail::LinePoint& pt) {
      if (pt.f <= f + c1 * pt.alpha * slope0 && (!have_best || pt.f < best.f)) {
        best = pt;
        have_best = true;
      }
    };
    auto zoom = [&](detail::LinePoint lo, detail::LinePoint hi, int budget) {
      for (int k = 0; k < budget; ++k) {
        if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, std::abs(lo.alpha)))
          break;
        double a;
        if (std::isfinite(hi.f)) {
          a = detail::cubic_step(lo.alpha, lo.f, lo.slope, hi.alpha, hi.f, hi.slope);
        } else {
          a = 0.5 * (lo.alpha + hi.alpha);
        }
        detail::LinePoint pt = eval_at(p, a);
        note(pt);
        if (pt.f > f + c1 * a * slope0 || pt.f >= lo.f) {
          hi = std::move(pt);
        } else {
          if (std::abs(pt.slope) <= -c2 * slope0) {
            out = std::move(pt);
            return true;
          }
          if (pt.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
          lo = std::move(pt);
        }
      }
      return false;
    };
    for (int k = 0; k < opt.max_line_search; ++k) {
      detail::LinePoint pt = eval_at(p, alpha);
      note(pt);
      const int budget = opt.max_line_search - k - 1;
      if (pt.f > f + c1 * alpha * slope0 || (k > 0 && pt.f >= prev.f)) {
        if (zoom(prev, pt, budget)) return true;
        break;
      }
      if (std::abs(pt.slope) <= -c2 * slope0) {
        out = std::move(pt);
        return true;
      }
      if (pt.slope >= 0.0) {
        if (zoom(pt, prev, budget)) return true;
        break;
      }
      prev = std::move(pt);
      alpha *= 2.0;
    }
    if (have_best && best.f < f) {
      out = std::move(best);
      return true;
    }
    return false;
  };

  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    // Two-loop recursion for p = -H g.
    VectorXd p = -g;
    const std::size_t m = s_hist.size();
    std::vector<double> a(m);
    for (std::size_t i = m; i-- > 0;) {
      a[i] = rho_hist[i] * s_hist[i].dot(p);
      p -= a[i] * y_hist[i];
    }
    if (m > 0) p *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < m; ++i) {
      const double b = rho_hist[i] * y_hist[i].dot(p);
      p += (a[i] - b) * s_hist[i];
    }
    double slope0 = g.dot(p);
    if (!(slope0 < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      p = -g;
      slope0 = -g.squaredNorm();
    }
    const double alpha0 = s_hist.empty() ? std::min(1.0, 1.0 / g.cwiseAbs().maxCoeff()) : 1.0;

    detail::LinePoint next;
    bool ok = line_search(p, slope0, alpha0, next);
    if (!ok && !s_hist.empty()) {
      // Retry once along steepest descent with a fresh memory.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      p = -g;
      ok = line_search(p, -g.squaredNorm(), std::min(1.0, 1.0 / g.cwiseAbs().maxCoeff()), next);
    }
    if (!ok) return finish(LbfgsStatus::line_search_failed);

    VectorXd s = next.x - x;
    VectorXd y = next.g - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * std::sqrt(s.squaredNorm() * y.squaredNorm()) && sy > 0.0) {
      if (static_cast<int>(s_hist.size()) == opt.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    x = std::move(next.x);
    g = std::move(next.g);
    f = next.f;
    res.iterations = iter;
    res.accepted_values.push_back(f);
    if (g.cwiseAbs().maxCoeff() <= opt.gradient_tolerance)
      return finish(LbfgsStatus::converged);
    if (f <= opt.target_value) return finish(LbfgsStatus::target_reached);
  }
  return finish(LbfgsStatus::max_iterations);
}

}  // namespace udcert::optim
