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
#include <vector>

#include "udcert/core/errors.hpp"

namespace udcert {

/// Orthonormal first-kind Chebyshev polynomial p_j on [-1, 1] with weight
/// (1 - x^2)^(-1/2): p_0 = 1/sqrt(pi), p_j = sqrt(2/pi) cos(j arccos x).
inline double chebyshev_orthonormal(int degree, double x) {
  detail::require(degree >= 0, "chebyshev_orthonormal: degree must be >= 0");
  if (!(std::abs(x) <= 1.0)) throw DomainError("chebyshev_orthonormal: |x| > 1");
  if (degree == 0) return 1.0 / std::sqrt(M_PI);
  return std::sqrt(2.0 / M_PI) * std::cos(degree * std::acos(x));
}

/// Roots cos((2k - 1) pi / (2d)), k = 1..d, in descending order.
inline std::vector<double> chebyshev_roots(int order) {
  detail::require(order >= 1, "chebyshev_roots: order must be >= 1");
  std::vector<double> roots(static_cast<std::size_t>(order));
  for (int k = 1; k <= order; ++k) {
    double r = std::cos((2.0 * k - 1.0) * M_PI / (2.0 * order));
    // The middle root of an odd order is exactly zero.
    if (2 * k - 1 == order) r = 0.0;
    roots[static_cast<std::size_t>(k - 1)] = r;
  }
  return roots;
}

}  // namespace udcert
