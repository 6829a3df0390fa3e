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

#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "udcert/certify/loss.hpp"
#include "udcert/certify/residual.hpp"
#include "udcert/core/parallel.hpp"
#include "udcert/core/random.hpp"
#include "udcert/optim/lbfgs.hpp"
#include "udcert/optim/levenberg_marquardt.hpp"

namespace udcert {

enum class Optimizer { levenberg_marquardt, lbfgs };

inline const char* to_string(Optimizer o) {
  return o == Optimizer::lbfgs ? "lbfgs" : "levenberg_marquardt";
}

inline Optimizer parse_optimizer(const std::string& s) {
  if (s == "lm" || s == "levenberg_marquardt") return Optimizer::levenberg_marquardt;
  if (s == "lbfgs") return Optimizer::lbfgs;
  throw ContractError("unknown optimizer '" + s + "'");
}

struct MinimizeOptions {
  Optimizer method = Optimizer::levenberg_marquardt;
  /// Infinity norm of dL/dtheta at which a descent counts as converged.
  double gradient_tolerance = 1e-10;
  int max_iterations = 500;
  /// Stop as soon as the loss drops to this value.
  double target_loss = -std::numeric_limits<double>::infinity();
};

struct MinimizeOutcome {
  double loss = 0.0;
  double initial_loss = 0.0;
  VariationalParams params;
  std::string status;
  int iterations = 0;
  int evaluations = 0;
  double gradient_inf_norm = 0.0;
  /// Loss after every accepted step, starting with the initial loss.
  std::vector<double> accepted_losses;
  /// The optimizer stalled before the gradient tolerance was met.
  bool degraded = false;
};

/// One local descent of the loss from `start`.
inline MinimizeOutcome minimize_once(const MeasurementScheme& scheme, Mode mode,
                                     const VariationalParams& start,
                                     const MinimizeOptions& options = {}) {
  start.validate();
  detail::require(start.mode == mode, "minimize_once: start point has the wrong mode");
  detail::require(start.dim() == scheme.dim(), "minimize_once: dimension mismatch");
  detail::require(options.max_iterations >= 0, "minimize_once: iteration cap must be >= 0");
  const LossFunction f(scheme, mode);
  RVector x = start.flatten();
  MinimizeOutcome out;
  auto fill = [&](const auto& report) {
    out.initial_loss = report.initial_value;
    out.status = to_string(report.status);
    out.iterations = report.iterations;
    out.evaluations = report.evaluations;
    out.gradient_inf_norm = report.gradient_inf_norm;
    out.accepted_losses = report.accepted_values;
    out.degraded = report.degraded();
  };
  if (options.method == Optimizer::lbfgs) {
    optim::LbfgsOptions opt;
    opt.gradient_tolerance = options.gradient_tolerance;
    opt.max_iterations = options.max_iterations;
    opt.target_value = options.target_loss;
    fill(optim::minimize_lbfgs(f, x, opt));
  } else {
    const MeasurementResidual r(scheme, mode);
    optim::LmOptions opt;
    opt.gradient_tolerance = options.gradient_tolerance;
    opt.max_iterations = options.max_iterations;
    opt.target_value = options.target_loss;
    fill(optim::minimize_lm(r, x, opt));
  }
  out.params = VariationalParams::unflatten(mode, scheme.dim(), x);
  out.loss = f.value(out.params);
  return out;
}

inline MinimizeOutcome minimize_once(const MeasurementScheme& scheme, Mode mode,
                                     const VariationalParams& start, double tol) {
  MinimizeOptions o;
  o.gradient_tolerance = tol;
  return minimize_once(scheme, mode, start, o);
}

/// Standard-normal start point of trial `trial` under master seed `seed`.
inline VariationalParams initial_params(Mode mode, int dim, std::uint64_t seed,
                                        std::uint64_t trial) {
  Rng rng(derive_seed(seed, {trial}));
  VariationalParams p;
  p.mode = mode;
  p.theta_lambda = standard_normal_vector(lambda_count(mode, dim), rng);
  p.theta_psi = standard_normal_vector(dim * dim, rng).reshaped(dim, dim);
  return p;
}

inline constexpr double kDefaultDelta = 1e-6;

struct CertifyConfig {
  Mode mode = Mode::uda;
  int trials = 10;
  double delta = kDefaultDelta;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Stop all trials once any loss reaches delta; the verdict is unchanged
  /// but trial_losses then only lists the trials that ran.
  bool stop_at_threshold = false;
  /// Run the trials even when Ker(A) = {0} so that min_loss is populated.
  bool optimize_when_injective = false;
  MinimizeOptions minimize;
};

struct CertificationResult {
  Mode mode = Mode::uda;
  /// +inf when no optimization ran.
  double min_loss = std::numeric_limits<double>::infinity();
  bool is_ud = false;
  double delta = kDefaultDelta;
  int trials = 0;
  std::uint64_t seed = 0;
  bool via_kernel_shortcut = false;
  std::vector<double> trial_losses;
  int best_trial = -1;
  int degraded_trials = 0;
  std::optional<HermitianMatrix> delta_star;
  std::optional<PureState> psi_minus;

  bool optimized() const { return !trial_losses.empty(); }
};

/// Unit eigenvector of the smallest (negative) eigenvalue of `delta`.
inline PureState negative_eigenvector(const HermitianMatrix& delta) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(delta.matrix());
  return PureState::normalized(es.eigenvectors().col(0));
}

/// Procedure T: UD when Ker(A) = {0} or the best of N descents stays above delta.
inline CertificationResult certify(const MeasurementScheme& scheme, const CertifyConfig& cfg) {
  detail::require(cfg.trials >= 1, "certify: trial count must be >= 1");
  detail::require(cfg.delta > 0.0, "certify: threshold delta must be > 0");
  detail::require(scheme.dim() >= 2, "certify: dimension must be >= 2");

  CertificationResult res;
  res.mode = cfg.mode;
  res.delta = cfg.delta;
  res.trials = cfg.trials;
  res.seed = cfg.seed;
  res.via_kernel_shortcut = has_trivial_kernel(scheme);
  if (res.via_kernel_shortcut) {
    res.is_ud = true;
    if (!cfg.optimize_when_injective) return res;
  }

  MinimizeOptions mopt = cfg.minimize;
  if (cfg.stop_at_threshold) mopt.target_loss = std::max(mopt.target_loss, cfg.delta);

  const auto n = static_cast<std::size_t>(cfg.trials);
  std::vector<std::optional<MinimizeOutcome>> outcomes(n);
  std::atomic<std::size_t> first_hit{n};
  parallel_for(n, cfg.threads, [&](std::size_t t) {
    if (cfg.stop_at_threshold && t > first_hit.load()) return;
    const VariationalParams start = initial_params(cfg.mode, scheme.dim(), cfg.seed, t);
    outcomes[t] = minimize_once(scheme, cfg.mode, start, mopt);
    if (cfg.stop_at_threshold && outcomes[t]->loss <= cfg.delta) {
      std::size_t cur = first_hit.load();
      while (t < cur && !first_hit.compare_exchange_weak(cur, t)) {
      }
    }
  });

  const std::size_t last = cfg.stop_at_threshold ? std::min(first_hit.load(), n - 1) : n - 1;
  for (std::size_t t = 0; t <= last; ++t) {
    if (!outcomes[t]) continue;
    const MinimizeOutcome& o = *outcomes[t];
    res.trial_losses.push_back(o.loss);
    if (o.degraded) ++res.degraded_trials;
    if (res.best_trial < 0 || o.loss < res.min_loss) {
      res.min_loss = o.loss;
      res.best_trial = static_cast<int>(t);
    }
  }
  const MinimizeOutcome& best = *outcomes[static_cast<std::size_t>(res.best_trial)];
  res.delta_star = build_delta(best.params);
  res.psi_minus = negative_eigenvector(*res.delta_star);
  res.is_ud = res.via_kernel_shortcut || res.min_loss > cfg.delta;
  return res;
}

inline CertificationResult certify(const MeasurementScheme& scheme, Mode mode, int trials,
                                   double delta, std::uint64_t seed) {
  CertifyConfig cfg;
  cfg.mode = mode;
  cfg.trials = trials;
  cfg.delta = delta;
  cfg.seed = seed;
  return certify(scheme, cfg);
}

}  // namespace udcert
