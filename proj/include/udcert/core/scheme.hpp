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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "udcert/core/hermitian.hpp"
#include "udcert/core/pauli.hpp"

namespace udcert {

/// Relative singular-value cutoff for rank and kernel decisions.
inline constexpr double kRankTolerance = 1e-10;

/// Real vector (Tr[A_0 x], ..., Tr[A_m x]).
class MeasurementVector {
 public:
  MeasurementVector() = default;
  explicit MeasurementVector(RVector values) : values_(std::move(values)) {}

  const RVector& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_(i); }
  double squared_norm() const { return values_.squaredNorm(); }
  double norm() const { return values_.norm(); }

 private:
  RVector values_;
};

/// Ordered observable list {A_0 = I, A_1, ..., A_m} on C^d.
///
/// Besides the dense observables the scheme keeps the real (m+1) x d^2 matrix
/// whose rows are hvec(A_i). Measuring x is then a matrix-vector product with
/// hvec(x), and Ker(A) is the nullspace of that matrix.
class MeasurementScheme {
 public:
  MeasurementScheme() = default;

  /// `labels` may be empty; otherwise it must have one entry per observable.
  MeasurementScheme(std::vector<HermitianMatrix> observables,
                    std::vector<std::string> labels = {})
      : observables_(std::move(observables)), labels_(std::move(labels)) {
    detail::require(!observables_.empty(), "scheme must contain at least the identity");
    dim_ = observables_.front().dim();
    for (std::size_t i = 0; i < observables_.size(); ++i) {
      detail::require(observables_[i].dim() == dim_,
                      "observable " + std::to_string(i) + " has dimension " +
                          std::to_string(observables_[i].dim()) + ", expected " +
                          std::to_string(dim_));
    }
    detail::require(observables_.front().is_identity(),
                    "observable 0 of a scheme must be the identity");
    if (labels_.empty()) {
      labels_.reserve(observables_.size());
      labels_.emplace_back("I");
      for (std::size_t i = 1; i < observables_.size(); ++i)
        labels_.push_back("A" + std::to_string(i));
    }
    detail::require(labels_.size() == observables_.size(),
                    "scheme labels must match observables");
    map_.resize(static_cast<Eigen::Index>(observables_.size()),
                static_cast<Eigen::Index>(dim_) * dim_);
    for (std::size_t i = 0; i < observables_.size(); ++i)
      map_.row(static_cast<Eigen::Index>(i)) = hvec(observables_[i]).transpose();
  }

  /// Scheme made of Pauli operators. The identity string must be first.
  static MeasurementScheme from_paulis(const std::vector<PauliString>& paulis) {
    detail::require(!paulis.empty(), "empty Pauli list");
    std::vector<HermitianMatrix> obs;
    std::vector<std::string> labels;
    obs.reserve(paulis.size());
    for (const auto& p : paulis) {
      detail::require(p.num_qubits() == paulis.front().num_qubits(),
                      "Pauli labels have different lengths");
      obs.push_back(pauli_to_matrix(p));
      labels.push_back(p.label());
    }
    MeasurementScheme s(std::move(obs), std::move(labels));
    s.pauli_ = true;
    return s;
  }

  static MeasurementScheme from_pauli_labels(const std::vector<std::string>& labels) {
    std::vector<PauliString> paulis;
    for (const auto& l : labels) paulis.emplace_back(l);
    return from_paulis(paulis);
  }

  int dim() const { return dim_; }
  std::size_t size() const { return observables_.size(); }
  const std::vector<HermitianMatrix>& observables() const { return observables_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool is_pauli() const { return pauli_; }

  /// Rows are hvec(A_i); maps hvec(x) to the measurement vector of x.
  const RMatrix& map_matrix() const { return map_; }

  /// Copy with observable `index` (>= 1) removed.
  MeasurementScheme without(std::size_t index) const {
    detail::require(index >= 1 && index < size(), "cannot remove observable " +
                                                      std::to_string(index));
    std::vector<HermitianMatrix> obs = observables_;
    std::vector<std::string> labels = labels_;
    obs.erase(obs.begin() + static_cast<long>(index));
    labels.erase(labels.begin() + static_cast<long>(index));
    MeasurementScheme s(std::move(obs), std::move(labels));
    s.pauli_ = pauli_;
    return s;
  }

  /// Copy keeping only the listed observable indices (0 is always kept first).
  MeasurementScheme subset(const std::vector<std::size_t>& indices) const {
    std::vector<HermitianMatrix> obs{observables_.front()};
    std::vector<std::string> labels{labels_.front()};
    for (std::size_t i : indices) {
      detail::require(i < size(), "subset index out of range");
      if (i == 0) continue;
      obs.push_back(observables_[i]);
      labels.push_back(labels_[i]);
    }
    MeasurementScheme s(std::move(obs), std::move(labels));
    s.pauli_ = pauli_;
    return s;
  }

 private:
  int dim_ = 0;
  std::vector<HermitianMatrix> observables_;
  std::vector<std::string> labels_;
  RMatrix map_;
  bool pauli_ = false;
};

/// values[i] = Tr[A_i x].
inline MeasurementVector measure(const MeasurementScheme& scheme, const HermitianMatrix& x) {
  detail::require(scheme.dim() == x.dim(), "measure: scheme has dimension " +
                                               std::to_string(scheme.dim()) +
                                               " but matrix has " + std::to_string(x.dim()));
  return MeasurementVector(scheme.map_matrix() * hvec(x));
}

inline MeasurementVector measure(const MeasurementScheme& scheme, const DensityMatrix& rho) {
  return measure(scheme, rho.hermitian());
}

namespace detail {

struct MapDecomposition {
  RVector singular_values;
  RMatrix right_vectors;  // full d^2 x d^2
  int rank = 0;
};

inline MapDecomposition decompose_map(const MeasurementScheme& scheme) {
  const RMatrix& m = scheme.map_matrix();
  const Eigen::Index n = m.cols();
  // Pad with zero rows so a full V is available even when m has fewer rows.
  RMatrix padded = RMatrix::Zero(std::max(m.rows(), n), n);
  padded.topRows(m.rows()) = m;
  Eigen::JacobiSVD<RMatrix> svd(padded, Eigen::ComputeFullV);
  MapDecomposition out;
  out.singular_values = svd.singularValues();
  out.right_vectors = svd.matrixV();
  const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i)
    if (out.singular_values(i) > kRankTolerance * smax) ++out.rank;
  return out;
}

}  // namespace detail

/// Rank of the measurement map on the d^2-dimensional real space of Hermitian
/// matrices.
inline int measurement_rank(const MeasurementScheme& scheme) {
  return detail::decompose_map(scheme).rank;
}

/// Frobenius-orthonormal basis of Ker(A). Empty iff the map is injective.
inline std::vector<HermitianMatrix> kernel_basis(const MeasurementScheme& scheme) {
  const auto dec = detail::decompose_map(scheme);
  const int d = scheme.dim();
  std::vector<HermitianMatrix> out;
  for (Eigen::Index k = dec.rank; k < dec.right_vectors.cols(); ++k)
    out.push_back(unhvec(dec.right_vectors.col(k), d));
  return out;
}

inline bool has_trivial_kernel(const MeasurementScheme& scheme) {
  return measurement_rank(scheme) == scheme.dim() * scheme.dim();
}

}  // namespace udcert
