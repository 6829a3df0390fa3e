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

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "udcert/core/random.hpp"
#include "udcert/core/scheme.hpp"
#include "udcert/optim/lbfgs.hpp"
#include "udcert/recovery/projection.hpp"

namespace udcert {

enum class RecoveryMode { uda_convex, udp_rank1 };

inline const char* to_string(RecoveryMode m) {
  return m == RecoveryMode::udp_rank1 ? "udp_rank1" : "uda_convex";
}

/// Solver for the convex program.
enum class ConvexSolver {
  /// Log-barrier Newton method; robust when the map is badly conditioned.
  interior_point,
  /// Monotone FISTA with spectrahedron projection and step 1 / sigma_max(M)^2.
  projected_gradient,
};

inline const char* to_string(ConvexSolver s) {
  return s == ConvexSolver::projected_gradient ? "projected_gradient" : "interior_point";
}

struct RecoveryOptions {
  RecoveryMode mode = RecoveryMode::uda_convex;
  ConvexSolver solver = ConvexSolver::interior_point;
  /// Convex mode stops once a bound on f(Y) - min f, with f = |M(Y) - b|^2 / 2, drops
  /// below max(gap_absolute, gap_relative * f(Y)). The bound is d / t on the barrier path
  /// and the Frank-Wolfe gap for projected gradient.
  double gap_relative = 1e-4;
  double gap_absolute = 1e-20;
  /// Newton steps (interior point) or gradient steps (projected gradient).
  int max_iterations = 200000;
  /// Rank-1 mode.
  int restarts = 32;
  int restart_iterations = 2000;
  /// Residuals within this distance of the best count as the same optimum.
  double agreement_tolerance = 1e-6;
  std::uint64_t seed = 0;
};

struct RecoveryProblem {
  const MeasurementScheme* scheme = nullptr;
  MeasurementVector b;
  RecoveryOptions options;

  void validate() const {
    detail::require(scheme != nullptr, "recovery: no scheme");
    detail::require(b.size() == static_cast<Eigen::Index>(scheme->size()),
                    "recovery: data length must equal the scheme size");
    detail::require(b.values().allFinite(), "recovery: data must be finite");
    detail::require(options.max_iterations >= 1 && options.restarts >= 1 &&
                        options.restart_iterations >= 1,
                    "recovery: iteration and restart counts must be >= 1");
  }
};

struct RecoveryResult {
  DensityMatrix y_star;
  /// |M(Y*) - b|_2.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Convex mode: residual of every accepted iterate, starting at the warm start.
  std::vector<double> residual_history;
  /// Convex mode: final bound on f(Y*) - min f.
  double gap = 0.0;
  /// Rank-1 mode: best residual of each restart.
  std::vector<double> restart_residuals;
  /// Rank-1 mode: max minus min restart residual.
  double restart_spread = 0.0;
};

namespace detail {

/// Frank-Wolfe gap Tr[G Y] - lambda_min(G) of f = |M y - b|^2 / 2 at y.
inline double frank_wolfe_gap(const RMatrix& m, const RVector& b, const RVector& y, int d) {
  const RVector g = m.transpose() * (m * y - b);
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(unhvec_matrix(g, d), Eigen::EigenvaluesOnly);
  return std::max(0.0, g.dot(y) - es.eigenvalues()(0));
}

inline RecoveryResult recover_projected_gradient(const MeasurementScheme& scheme, const RVector& b,
                                                 const RecoveryOptions& opt) {
  const int d = scheme.dim();
  const RMatrix& m = scheme.map_matrix();
  const RMatrix gram = m.transpose() * m;
  const double lipschitz = Eigen::SelfAdjointEigenSolver<RMatrix>(gram).eigenvalues().maxCoeff();
  detail::require(lipschitz > 0.0, "recovery: measurement map is zero");

  auto objective = [&](const RVector& y) { return 0.5 * (m * y - b).squaredNorm(); };
  auto project = [&](const RVector& y) {
    return hvec(project_spectrahedron_matrix(unhvec_matrix(y, d)));
  };
  auto fw_gap = [&](const RVector& y) { return frank_wolfe_gap(m, b, y, d); };

  // Warm start: least-squares fit projected onto the spectrahedron.
  RVector x = project(m.completeOrthogonalDecomposition().solve(b));
  double fx = objective(x);
  RecoveryResult res;
  res.residual_history.push_back(std::sqrt(2.0 * fx));
  RVector y = x;
  double t = 1.0;
  bool restarted = false;
  int k = 0;
  for (; k < opt.max_iterations; ++k) {
    if (k % 10 == 0) {
      res.gap = fw_gap(x);
      if (res.gap <= std::max(opt.gap_absolute, opt.gap_relative * fx)) {
        res.converged = true;
        break;
      }
    }
    const RVector z = project(y - m.transpose() * (m * y - b) / lipschitz);
    const double fz = objective(z);
    if (fz > fx) {
      // Monotone restart: drop momentum and retry from the best iterate.
      if (restarted) {
        res.gap = fw_gap(x);
        res.converged = res.gap <= std::max(opt.gap_absolute, opt.gap_relative * fx);
        break;
      }
      restarted = true;
      y = x;
      t = 1.0;
      continue;
    }
    restarted = false;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = z + ((t - 1.0) / t_next) * (z - x);
    x = z;
    fx = fz;
    t = t_next;
    res.residual_history.push_back(std::sqrt(2.0 * fx));
  }
  if (k == opt.max_iterations) res.gap = fw_gap(x);
  res.iterations = k;
  res.residual = std::sqrt(2.0 * fx);
  res.y_star = DensityMatrix(HermitianMatrix(unhvec_matrix(x, d)), 1e-8);
  return res;
}

/// Barrier method on t f(y) - log det Y over {Tr Y = 1}, Newton steps in the trace-zero subspace.
inline RecoveryResult recover_interior_point(const MeasurementScheme& scheme, const RVector& b,
                                             const RecoveryOptions& opt) {
  const int d = scheme.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  const RMatrix& m = scheme.map_matrix();
  const RMatrix gram = m.transpose() * m;
  auto objective = [&](const RVector& y) { return 0.5 * (m * y - b).squaredNorm(); };

  // Orthonormal basis of the directions that keep the trace fixed.
  RVector trace_dir = RVector::Zero(n);
  trace_dir.head(d).setOnes();
  const Eigen::HouseholderQR<RMatrix> qr{RMatrix(trace_dir)};
  const RMatrix z = RMatrix(qr.householderQ()).rightCols(n - 1);

  RVector y = hvec(CMatrix(CMatrix::Identity(d, d) / double(d)));
  double fy = objective(y);
  RecoveryResult res;
  res.residual_history.push_back(std::sqrt(2.0 * fy));
  double t = double(d) / std::max(fy, 1e-300);
  int steps = 0;

  auto barrier_value = [&](const RVector& v, double tt, double& out) {
    const Eigen::LLT<CMatrix> llt(unhvec_matrix(v, d));
    if (llt.info() != Eigen::Success) return false;
    double logdet = 0.0;
    for (int i = 0; i < d; ++i) {
      const double l = llt.matrixL()(i, i).real();
      if (!(l > 0.0)) return false;
      logdet += 2.0 * std::log(l);
    }
    out = tt * objective(v) - logdet;
    return std::isfinite(out);
  };

  while (steps < opt.max_iterations) {
    // Centering by damped Newton; stops once the Newton decrement is negligible.
    bool centered = false;
    double last_decrement = std::numeric_limits<double>::infinity();
    for (int inner = 0; inner < 50 && steps < opt.max_iterations; ++inner, ++steps) {
      const CMatrix yinv = unhvec_matrix(y, d).inverse();
      const CMatrix yinv_h = (yinv + yinv.adjoint()) * 0.5;
      // M^T (M y - b) keeps far more accuracy along weakly measured directions than gram * y - M^T b.
      const RVector grad = t * (m.transpose() * (m * y - b)) - hvec(yinv_h);
      RMatrix hess = t * gram;
      RVector e = RVector::Zero(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        e(k) = 1.0;
        const CMatrix col = yinv_h * unhvec_matrix(e, d) * yinv_h;
        hess.col(k) += hvec(CMatrix((col + col.adjoint()) * 0.5));
        e(k) = 0.0;
      }
      const RVector rg = z.transpose() * grad;
      const Eigen::LDLT<RMatrix> ldlt(RMatrix(z.transpose() * hess * z));
      const RVector step_u = ldlt.solve(-rg);
      if (!step_u.allFinite()) break;
      const double decrement = -rg.dot(step_u);
      last_decrement = decrement;
      if (decrement <= 1e-10) {
        centered = true;
        break;
      }
      const RVector step = z * step_u;
      double phi = 0.0, phi_new = 0.0;
      if (decrement < 0.1) {
        // Self-concordance keeps the full step inside the cone here; barrier values are
        // too noisy at large t for a sufficient-decrease test.
        if (!barrier_value(y + step, t, phi_new)) break;
        y += step;
        continue;
      }
      barrier_value(y, t, phi);
      bool moved = false;
      double s = 1.0;
      for (int ls = 0; ls < 60 && !moved; ++ls, s *= 0.5) {
        const RVector trial = y + s * step;
        if (barrier_value(trial, t, phi_new) && phi_new <= phi - 0.25 * s * decrement) {
          y = trial;
          moved = true;
        }
      }
      if (!moved) break;
    }
    // Rounding can leave the decrement on a plateau; close enough still yields a certificate.
    if (!centered && last_decrement <= 1e-6) centered = true;
    fy = objective(y);
    res.residual_history.push_back(std::sqrt(2.0 * fy));
    if (!centered) break;
    // With Newton decrement lambda < 1, (Y^-1 - Y^-1 dY Y^-1) / t is dual feasible and
    // f(y) - min f <= (d + sqrt(d) lambda) / t.
    res.gap = (double(d) + std::sqrt(double(d) * std::max(last_decrement, 0.0))) / t;
    if (res.gap <= std::max(opt.gap_absolute, opt.gap_relative * fy)) {
      res.converged = true;
      break;
    }
    t *= 8.0;
  }
  res.iterations = steps;
  res.residual = std::sqrt(2.0 * fy);
  const CMatrix ym = unhvec_matrix(y, d);
  res.y_star = DensityMatrix(HermitianMatrix((ym + ym.adjoint()) * 0.5), 1e-8);
  return res;
}

inline RecoveryResult recover_rank1(const MeasurementScheme& scheme, const RVector& b,
                                    const RecoveryOptions& opt) {
  const int d = scheme.dim();
  const RMatrix& m = scheme.map_matrix();
  auto state_of = [d](const RVector& x) {
    CVector v(d);
    for (int i = 0; i < d; ++i) v(i) = Complex(x(i), x(d + i));
    return v;
  };
  // F(v) = |M(v v^dagger / |v|^2) - b|^2 and its gradient 2 (G v / n - (v^dagger G v / n^2) v).
  auto objective = [&](const RVector& x, RVector& grad) {
    const CVector v = state_of(x);
    const double n = v.squaredNorm();
    const RVector r = m * hvec(CMatrix(v * v.adjoint() / n)) - b;
    const CMatrix g = unhvec_matrix(2.0 * m.transpose() * r, d);
    const CVector gv = g * v;
    const double vgv = v.dot(gv).real();
    const CVector w = 2.0 * (gv / n - (vgv / (n * n)) * v);
    grad.resize(2 * d);
    grad.head(d) = w.real();
    grad.tail(d) = w.imag();
    return r.squaredNorm();
  };

  optim::LbfgsOptions lopt;
  lopt.max_iterations = opt.restart_iterations;
  lopt.gradient_tolerance = 1e-14;
  RecoveryResult res;
  double best = std::numeric_limits<double>::infinity();
  RVector best_x;
  for (int r = 0; r < opt.restarts; ++r) {
    Rng rng(derive_seed(opt.seed, {0x7a41ULL, std::uint64_t(r)}));
    RVector x = standard_normal_vector(2 * d, rng);
    const optim::LbfgsResult out = optim::minimize_lbfgs(objective, x, lopt);
    const double residual = std::sqrt(std::max(out.value, 0.0));
    res.restart_residuals.push_back(residual);
    res.iterations += out.iterations;
    if (residual < best) {
      best = residual;
      best_x = x;
    }
  }
  const auto [lo, hi] = std::minmax_element(res.restart_residuals.begin(), res.restart_residuals.end());
  res.restart_spread = *hi - *lo;
  const auto agreeing = std::count_if(res.restart_residuals.begin(), res.restart_residuals.end(),
                                      [&](double v) { return v - best <= opt.agreement_tolerance; });
  res.converged = opt.restarts == 1 || agreeing >= 2;
  const CVector v = state_of(best_x);
  res.y_star = DensityMatrix(PureState::normalized(v).projector());
  res.residual = (m * hvec(res.y_star.hermitian()) - b).norm();
  return res;
}

}  // namespace detail

/// Solves min |M_A(Y) - b|_2 over density matrices, or over pure states in rank-1 mode.
inline RecoveryResult recover(const RecoveryProblem& problem) {
  problem.validate();
  if (problem.options.mode == RecoveryMode::udp_rank1)
    return detail::recover_rank1(*problem.scheme, problem.b.values(), problem.options);
  if (problem.options.solver == ConvexSolver::projected_gradient)
    return detail::recover_projected_gradient(*problem.scheme, problem.b.values(), problem.options);
  return detail::recover_interior_point(*problem.scheme, problem.b.values(), problem.options);
}

inline RecoveryResult recover(const MeasurementScheme& scheme, const MeasurementVector& b,
                              const RecoveryOptions& options = {}) {
  return recover(RecoveryProblem{&scheme, b, options});
}

}  // namespace udcert
