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
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace udcert::optim {

enum class LmStatus {
  converged,       // ||grad||_inf <= gradient_tolerance
  target_reached,  // value <= target_value
  max_iterations,
  stalled,         // step or damping hit floating-point limits first
};

inline const char* to_string(LmStatus s) {
  switch (s) {
    case LmStatus::converged: return "converged";
    case LmStatus::target_reached: return "target_reached";
    case LmStatus::max_iterations: return "max_iterations";
    default: return "stalled";
  }
}

struct LmOptions {
  int max_iterations = 500;
  /// Tolerance on the infinity norm of grad ||r||^2 = 2 J^T r.
  double gradient_tolerance = 1e-10;
  double target_value = -std::numeric_limits<double>::infinity();
  double initial_damping = 1e-3;
};

struct LmResult {
  double initial_value = 0.0;
  double value = 0.0;
  double gradient_inf_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  LmStatus status = LmStatus::max_iterations;
  /// ||r||^2 at the start point and after every accepted step.
  std::vector<double> accepted_values;

  bool degraded() const { return status == LmStatus::stalled; }
};

/// Levenberg-Marquardt minimization of ||r(x)||^2 with the gain-ratio damping
/// update of Madsen, Nielsen and Tingleff.
///
/// `residual(x, jac)` returns r(x) and, when `jac` is non-null, writes the
/// Jacobian. Only steps that lower the value are accepted.
template <class Residual>
LmResult minimize_lm(Residual&& residual, Eigen::VectorXd& x, const LmOptions& opt = {}) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  LmResult res;
  MatrixXd jac;
  VectorXd r = residual(x, &jac);
  ++res.evaluations;
  double value = r.squaredNorm();
  res.initial_value = value;
  res.accepted_values.push_back(value);

  MatrixXd normal = jac.transpose() * jac;
  VectorXd g = jac.transpose() * r;
  double mu = opt.initial_damping * std::max(normal.diagonal().maxCoeff(), 1e-300);
  double nu = 2.0;

  auto finish = [&](LmStatus s) {
    res.status = s;
    res.value = value;
    res.gradient_inf_norm = 2.0 * (g.size() ? g.cwiseAbs().maxCoeff() : 0.0);
    return res;
  };

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    res.iterations = iter;
    if (2.0 * g.cwiseAbs().maxCoeff() <= opt.gradient_tolerance) return finish(LmStatus::converged);
    if (value <= opt.target_value) return finish(LmStatus::target_reached);

    MatrixXd damped = normal;
    damped.diagonal().array() += mu;
    const VectorXd h = damped.ldlt().solve(-g);
    if (!h.allFinite() || h.norm() <= 1e-15 * (x.norm() + 1e-15)) return finish(LmStatus::stalled);

    VectorXd trial_x = x + h;
    const VectorXd trial_r = residual(trial_x, nullptr);
    ++res.evaluations;
    const double trial_value = trial_r.allFinite() ? trial_r.squaredNorm()
                                                   : std::numeric_limits<double>::infinity();
    const double predicted = h.dot(mu * h - g);
    if (trial_value < value) {
      const double rho = predicted > 0.0 ? (value - trial_value) / predicted : 1.0;
      x = std::move(trial_x);
      r = residual(x, &jac);
      ++res.evaluations;
      value = r.squaredNorm();
      normal = jac.transpose() * jac;
      g = jac.transpose() * r;
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      mu = std::max(mu, 1e-300);
      nu = 2.0;
      res.accepted_values.push_back(value);
    } else {
      mu *= nu;
      nu *= 2.0;
      if (!std::isfinite(mu) || mu > 1e250) return finish(LmStatus::stalled);
    }
  }
  res.iterations = opt.max_iterations;
  return finish(LmStatus::max_iterations);
}

}  // namespace udcert::optim
