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
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "udcert/core/hermitian.hpp"

namespace udcert {

/// UDP: unique among pure states. UDA: unique among all states.
enum class Mode { udp, uda };

inline const char* to_string(Mode m) { return m == Mode::udp ? "udp" : "uda"; }

inline Mode parse_mode(const std::string& s) {
  if (s == "udp" || s == "UDP") return Mode::udp;
  if (s == "uda" || s == "UDA") return Mode::uda;
  throw ContractError("unknown mode \"" + s + "\" (expected udp or uda)");
}

/// Number of eigenvalue parameters: 2 for UDP, d for UDA.
inline int lambda_count(Mode mode, int dim) { return mode == Mode::udp ? 2 : dim; }

/// Raw parameters (theta_lambda, theta_psi) of the variational kernel candidate.
struct VariationalParams {
  Mode mode = Mode::uda;
  RVector theta_lambda;
  RMatrix theta_psi;

  int dim() const { return static_cast<int>(theta_psi.rows()); }

  void validate() const {
    detail::require(theta_psi.rows() == theta_psi.cols() && theta_psi.rows() >= 2,
                    "theta_psi must be a square matrix of size >= 2");
    detail::require(theta_lambda.size() == lambda_count(mode, dim()),
                    "theta_lambda length does not match the mode");
    detail::require(theta_lambda.allFinite() && theta_psi.allFinite(),
                    "variational parameters must be finite");
  }

  /// Layout: [theta_lambda, theta_psi column-major].
  RVector flatten() const {
    RVector x(theta_lambda.size() + theta_psi.size());
    x.head(theta_lambda.size()) = theta_lambda;
    x.tail(theta_psi.size()) = theta_psi.reshaped();
    return x;
  }

  static VariationalParams unflatten(Mode mode, int dim, const RVector& x) {
    const int k = lambda_count(mode, dim);
    detail::require(x.size() == k + dim * dim, "flat parameter vector has wrong length");
    VariationalParams p;
    p.mode = mode;
    p.theta_lambda = x.head(k);
    p.theta_psi = x.tail(dim * dim).reshaped(dim, dim);
    return p;
  }

  static std::size_t flat_size(Mode mode, int dim) {
    return static_cast<std::size_t>(lambda_count(mode, dim) + dim * dim);
  }
};

/// Anti-Hermitian generator (theta - theta^T) + i (theta + theta^T).
inline CMatrix unitary_generator(const RMatrix& theta) {
  const RMatrix re = theta - theta.transpose();
  const RMatrix im = theta + theta.transpose();
  CMatrix g(theta.rows(), theta.cols());
  g.real() = re;
  g.imag() = im;
  return g;
}

/// exp of the anti-Hermitian generator; column i is |psi_i>.
inline CMatrix unitary_from_params(const RMatrix& theta_psi) {
  detail::require(theta_psi.rows() == theta_psi.cols(), "theta_psi must be square");
  detail::require(theta_psi.allFinite(), "theta_psi must be finite");
  return unitary_generator(theta_psi).exp();
}

/// Fréchet derivative of exp at `a` in direction `e`, read off the top-right
/// block of exp([[a, e], [0, a]]).
inline CMatrix expm_frechet(const CMatrix& a, const CMatrix& e) {
  const Eigen::Index n = a.rows();
  CMatrix block = CMatrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = a;
  block.bottomRightCorner(n, n) = a;
  block.topRightCorner(n, n) = e;
  const CMatrix eb = block.exp();
  return eb.topRightCorner(n, n);
}

inline constexpr double kSoftplusFloor = -300.0;

inline double softplus(double t) {
  t = std::max(t, kSoftplusFloor);
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

/// d softplus / dt, zero below the clamp.
inline double softplus_derivative(double t) {
  if (t < kSoftplusFloor) return 0.0;
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

/// Softplus magnitudes rescaled to unit Euclidean norm.
inline RVector eigvals_from_params(const RVector& theta_lambda) {
  detail::require(theta_lambda.size() > 0, "theta_lambda must be non-empty");
  detail::require(theta_lambda.allFinite(), "theta_lambda must be finite");
  RVector u = theta_lambda.unaryExpr([](double t) { return softplus(t); });
  const double n = u.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw DegenerateParameterError("softplus eigenvalues collapsed to zero");
  return u / n;
}

/// Signed spectrum (-l1, l2, ..., 0...) matching the mode's eigenvalue pattern.
inline RVector signed_spectrum(Mode mode, int dim, const RVector& lambda) {
  RVector s = RVector::Zero(dim);
  s(0) = -lambda(0);
  const int k = lambda_count(mode, dim);
  for (int i = 1; i < k; ++i) s(i) = lambda(i);
  return s;
}

/// Delta = U diag(s) U^dagger with one negative eigenvalue and one (UDP) or
/// up to d-1 (UDA) positive ones; ||Delta||_F = 1.
inline HermitianMatrix build_delta(const VariationalParams& params) {
  params.validate();
  const int d = params.dim();
  const CMatrix u = unitary_from_params(params.theta_psi);
  const RVector s = signed_spectrum(params.mode, d, eigvals_from_params(params.theta_lambda));
  const int k = lambda_count(params.mode, d);
  const CMatrix uk = u.leftCols(k);
  return HermitianMatrix(uk * s.head(k).asDiagonal() * uk.adjoint());
}

/// Counts of eigenvalues below -tol and above tol.
struct EigenSignature {
  int negative = 0;
  int positive = 0;
};

inline EigenSignature eigen_signature(const HermitianMatrix& m, double tol = 1e-9) {
  EigenSignature sig;
  const RVector ev = m.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol) ++sig.negative;
    if (ev(i) > tol) ++sig.positive;
  }
  return sig;
}

}  // namespace udcert
