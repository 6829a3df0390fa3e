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

#include "udcert/certify/params.hpp"
#include "udcert/core/scheme.hpp"

namespace udcert {

/// L_A(theta) = || M_A(Delta(theta)) ||_2^2 and its exact gradient over the
/// flat parameter layout of VariationalParams::flatten.
///
/// For G = 2 sum_i a_i A_i (a the measurement vector of Delta) the
/// differential is dL = Tr[G dDelta]. The eigenvalue part is read from the
/// diagonal of U^dagger G U. The unitary part goes through the adjoint of the
/// exponential's Fréchet derivative, L(A^dagger, 2 G U S), evaluated with the
/// 2d x 2d block exponential.
class LossFunction {
 public:
  LossFunction(const MeasurementScheme& scheme, Mode mode)
      : map_(scheme.map_matrix()), dim_(scheme.dim()), mode_(mode) {
    detail::require(dim_ >= 2, "loss: dimension must be >= 2");
  }

  int dim() const { return dim_; }
  Mode mode() const { return mode_; }
  std::size_t parameter_count() const { return VariationalParams::flat_size(mode_, dim_); }

  double value(const VariationalParams& params) const {
    check(params);
    const RVector a = map_ * hvec(build_delta(params));
    return a.squaredNorm();
  }

  double value(const RVector& flat) const {
    return value(VariationalParams::unflatten(mode_, dim_, flat));
  }

  /// Value and gradient at `flat`; `grad` is resized as needed.
  double operator()(const RVector& flat, RVector& grad) const {
    const VariationalParams params = VariationalParams::unflatten(mode_, dim_, flat);
    detail::require(flat.allFinite(), "variational parameters must be finite");
    const int d = dim_;
    const int k = lambda_count(mode_, d);

    const RVector u = params.theta_lambda.unaryExpr([](double t) { return softplus(t); });
    const double unorm = u.norm();
    if (!(unorm > 0.0)) throw DegenerateParameterError("softplus eigenvalues collapsed to zero");
    const RVector lambda = u / unorm;
    RVector s(k);
    s(0) = -lambda(0);
    s.tail(k - 1) = lambda.tail(k - 1);

    const CMatrix gen = unitary_generator(params.theta_psi);
    const CMatrix unitary = gen.exp();
    const CMatrix uk = unitary.leftCols(k);
    const CMatrix delta = uk * s.asDiagonal() * uk.adjoint();

    const RVector a = map_ * hvec(delta);
    const double loss = a.squaredNorm();

    const CMatrix g_mat = unhvec_matrix(2.0 * (map_.transpose() * a), d);
    const CMatrix gu = g_mat * uk;

    grad.resize(static_cast<Eigen::Index>(parameter_count()));
    RVector dl_dlambda(k);
    for (int i = 0; i < k; ++i) {
      const double w = uk.col(i).dot(gu.col(i)).real();
      dl_dlambda(i) = (i == 0 ? -w : w);
    }
    const RVector dl_du = (dl_dlambda - lambda * lambda.dot(dl_dlambda)) / unorm;
    for (int i = 0; i < k; ++i)
      grad(i) = dl_du(i) * softplus_derivative(params.theta_lambda(i));

    CMatrix b = CMatrix::Zero(d, d);
    b.leftCols(k) = 2.0 * gu * s.asDiagonal();
    const CMatrix z = expm_frechet(gen.adjoint(), b);
    const RMatrix gtheta = z.real() + z.imag() - z.real().transpose() + z.imag().transpose();
    grad.tail(d * d) = gtheta.reshaped();
    return loss;
  }

  RVector gradient(const RVector& flat) const {
    RVector g;
    (*this)(flat, g);
    return g;
  }

 private:
  void check(const VariationalParams& p) const {
    detail::require(p.mode == mode_ && p.dim() == dim_,
                    "loss: parameters do not match the scheme dimension or mode");
  }

  RMatrix map_;
  int dim_;
  Mode mode_;
};

inline double loss(const MeasurementScheme& scheme, const VariationalParams& params) {
  return LossFunction(scheme, params.mode).value(params);
}

/// Gradient over [theta_lambda, theta_psi (column-major)].
inline RVector loss_gradient(const MeasurementScheme& scheme, const VariationalParams& params) {
  params.validate();
  detail::require(params.dim() == scheme.dim(), "loss_gradient: dimension mismatch");
  return LossFunction(scheme, params.mode).gradient(params.flatten());
}

}  // namespace udcert
