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
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "udcert/certify/certifier.hpp"
#include "udcert/core/parallel.hpp"
#include "udcert/recovery/recover.hpp"

namespace udcert {

/// Gaussian direction rescaled to Euclidean norm `rate`; every component, the trace datum too.
inline RVector sample_noise(Eigen::Index length, double rate, std::uint64_t seed) {
  detail::require(length >= 1, "sample_noise: length must be >= 1");
  detail::require(rate >= 0.0 && std::isfinite(rate), "sample_noise: rate must be >= 0");
  if (rate == 0.0) return RVector::Zero(length);
  Rng rng(seed);
  RVector f = standard_normal_vector(length, rng);
  return f * (rate / f.norm());
}

/// alpha = |Y* - sigma|_F / (|M(Y*) - b|_2 + |f|_2).
inline double stability_coefficient(const PureState& sigma, const RVector& f,
                                    const RecoveryResult& result) {
  detail::require(sigma.dim() == result.y_star.dim(), "stability_coefficient: dimension mismatch");
  const double denom = result.residual + f.norm();
  if (!(denom > 0.0)) {
    throw UndefinedAlphaError("stability coefficient undefined: zero residual and zero noise");
  }
  return (result.y_star.matrix() - sigma.projector().matrix()).norm() / denom;
}

/// Eigenvector of the unique negative eigenvalue of the certified Delta*.
inline PureState worst_case_state(const CertificationResult& cert) {
  if (!cert.delta_star) {
    throw NoDeltaError("worst_case_state: certification produced no Delta (kernel shortcut)");
  }
  return negative_eigenvector(*cert.delta_star);
}

struct StabilityRow {
  std::string scheme_id;
  std::string state_id;
  double noise_rate = 0.0;
  int sample = 0;
  double residual = 0.0;
  double recovery_error = 0.0;
  /// NaN when undefined (exact recovery of noiseless data).
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double fidelity = 0.0;
  bool converged = true;
};

struct Envelope {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct StabilityAggregate {
  std::string state_id;
  double noise_rate = 0.0;
  int samples = 0;
  Envelope residual;
  Envelope recovery_error;
  /// Over rows with a defined alpha; `alpha_defined` counts them.
  Envelope alpha;
  int alpha_defined = 0;
  Envelope fidelity;
};

struct StabilityReport {
  std::vector<StabilityRow> rows;
  std::vector<StabilityAggregate> aggregates;
  int non_converged = 0;
};

struct LabeledState {
  std::string id;
  PureState state;
};

struct StabilityConfig {
  std::string scheme_id = "scheme";
  int samples = 50;
  std::uint64_t seed = 0;
  int threads = 1;
  RecoveryOptions recovery;
};

namespace detail {

template <class Get>
Envelope envelope(const std::vector<const StabilityRow*>& rows, Get get) {
  Envelope e{0.0, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  int n = 0;
  for (const StabilityRow* r : rows) {
    const double v = get(*r);
    if (std::isnan(v)) continue;
    e.mean += v;
    e.min = std::min(e.min, v);
    e.max = std::max(e.max, v);
    ++n;
  }
  if (n == 0) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN()};
  e.mean /= n;
  return e;
}

}  // namespace detail

/// Noisy recovery of every state at every rate, `samples` noise draws each.
inline StabilityReport stability_experiment(const MeasurementScheme& scheme,
                                            const std::vector<LabeledState>& states,
                                            const std::vector<double>& noise_rates,
                                            const StabilityConfig& config) {
  detail::require(config.samples >= 1, "stability: sample count must be >= 1");
  for (const auto& s : states)
    detail::require(s.state.dim() == scheme.dim(), "stability: state dimension mismatch");
  for (double r : noise_rates) detail::require(r >= 0.0, "stability: noise rates must be >= 0");

  const std::size_t per_state = noise_rates.size() * static_cast<std::size_t>(config.samples);
  StabilityReport report;
  report.rows.resize(states.size() * per_state);
  parallel_for(report.rows.size(), config.threads, [&](std::size_t cell) {
    const std::size_t si = cell / per_state;
    const std::size_t ri = (cell % per_state) / static_cast<std::size_t>(config.samples);
    const int sample = static_cast<int>(cell % static_cast<std::size_t>(config.samples));
    const PureState& sigma = states[si].state;
    const double rate = noise_rates[ri];
    const RVector f = sample_noise(static_cast<Eigen::Index>(scheme.size()), rate,
                                   derive_seed(config.seed, {si, ri, std::uint64_t(sample)}));
    const RVector b = measure(scheme, sigma.projector()).values() + f;
    const RecoveryResult res = recover(scheme, MeasurementVector(b), config.recovery);

    StabilityRow& row = report.rows[cell];
    row.scheme_id = config.scheme_id;
    row.state_id = states[si].id;
    row.noise_rate = rate;
    row.sample = sample;
    row.residual = res.residual;
    row.recovery_error = (res.y_star.matrix() - sigma.projector().matrix()).norm();
    if (res.residual + f.norm() > 0.0) row.alpha = stability_coefficient(sigma, f, res);
    row.fidelity = fidelity(sigma, res.y_star);
    row.converged = res.converged;
  });

  for (const auto& row : report.rows) report.non_converged += row.converged ? 0 : 1;
  for (std::size_t si = 0; si < states.size(); ++si) {
    for (std::size_t ri = 0; ri < noise_rates.size(); ++ri) {
      std::vector<const StabilityRow*> group;
      for (int s = 0; s < config.samples; ++s)
        group.push_back(&report.rows[si * per_state + ri * config.samples + s]);
      StabilityAggregate a;
      a.state_id = states[si].id;
      a.noise_rate = noise_rates[ri];
      a.samples = config.samples;
      a.residual = detail::envelope(group, [](const StabilityRow& r) { return r.residual; });
      a.recovery_error = detail::envelope(group, [](const StabilityRow& r) { return r.recovery_error; });
      a.alpha = detail::envelope(group, [](const StabilityRow& r) { return r.alpha; });
      a.alpha_defined = static_cast<int>(std::count_if(
          group.begin(), group.end(), [](const StabilityRow* r) { return !std::isnan(r->alpha); }));
      a.fidelity = detail::envelope(group, [](const StabilityRow& r) { return r.fidelity; });
      report.aggregates.push_back(a);
    }
  }
  return report;
}

}  // namespace udcert
