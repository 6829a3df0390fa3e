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
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "udcert/certify/certifier.hpp"

namespace udcert {

/// Fraction of the n-qubit Pauli group used as the starting set of a search.
inline double default_initial_fraction(int num_qubits) {
  if (num_qubits <= 2) return 1.0;
  if (num_qubits == 3) return 0.85;
  if (num_qubits == 4) return 0.70;
  return 0.55;
}

struct SearchConfig {
  Mode mode = Mode::uda;
  int trials = 10;
  double delta = kDefaultDelta;
  std::uint64_t seed = 0;
  /// NaN selects default_initial_fraction(n).
  double initial_fraction = std::numeric_limits<double>::quiet_NaN();
  /// Attempts at drawing a UD starting subset before giving up.
  int retry_cap = 10;
  /// Search in UDP mode, then certify the result once in UDA mode.
  bool udp_first = false;
  int threads = 1;
  MinimizeOptions minimize;

  void validate() const {
    detail::require(trials >= 1, "search: trial count must be >= 1");
    detail::require(delta > 0.0, "search: threshold delta must be > 0");
    detail::require(std::isnan(initial_fraction) ||
                        (initial_fraction > 0.0 && initial_fraction <= 1.0),
                    "search: initial fraction must lie in (0, 1]");
    detail::require(retry_cap >= 1, "search: retry cap must be >= 1");
    detail::require(threads >= 1, "search: thread count must be >= 1");
  }

  Mode search_mode() const { return udp_first ? Mode::udp : mode; }

  CertifyConfig certify_config(Mode m) const {
    CertifyConfig c;
    c.mode = m;
    c.trials = trials;
    c.delta = delta;
    c.seed = seed;
    c.threads = threads;
    c.stop_at_threshold = true;
    c.minimize = minimize;
    return c;
  }
};

struct RemovalStep {
  std::string label;
  bool removed = false;
  /// +inf when the kernel shortcut decided the probe.
  double min_loss = std::numeric_limits<double>::infinity();
};

struct SearchResult {
  MeasurementScheme scheme;
  std::vector<RemovalStep> removal_log;
  int certifications_run = 0;
  /// Certification of the returned scheme in the search mode.
  CertificationResult final_certification;
  /// UDA check of the final scheme when the search ran in UDP mode.
  std::optional<CertificationResult> uda_verification;
};

/// Algorithm 1: drop random operators while the reduced set still certifies.
inline SearchResult search_minimal(const MeasurementScheme& initial, const SearchConfig& config) {
  config.validate();
  const Mode mode = config.search_mode();
  const CertifyConfig cc = config.certify_config(mode);
  CertificationResult current = certify(initial, cc);
  if (!current.is_ud) {
    throw SearchPreconditionError("search: initial scheme of size " +
                                  std::to_string(initial.size()) + " does not certify as " +
                                  to_string(mode));
  }

  SearchResult res{initial, {}, 0, current, std::nullopt};
  // Indices into res.scheme of operators not yet frozen; the identity is frozen from the start.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i < initial.size(); ++i) candidates.push_back(i);
  Rng rng(derive_seed(config.seed, {0x5ea4c4ULL}));

  while (!candidates.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const std::size_t slot = pick(rng);
    const std::size_t index = candidates[slot];
    candidates.erase(candidates.begin() + static_cast<long>(slot));

    MeasurementScheme reduced = res.scheme.without(index);
    CertificationResult cert = certify(reduced, cc);
    ++res.certifications_run;
    RemovalStep step{res.scheme.labels()[index], cert.is_ud, cert.min_loss};
    res.removal_log.push_back(step);
    if (cert.is_ud) {
      res.scheme = std::move(reduced);
      res.final_certification = std::move(cert);
      for (auto& c : candidates) {
        if (c > index) --c;
      }
    }
  }

  if (config.udp_first) {
    res.uda_verification = certify(res.scheme, config.certify_config(Mode::uda));
  }
  return res;
}

/// Identity plus size - 1 distinct non-identity Pauli strings, drawn uniformly.
inline MeasurementScheme sample_subset(int num_qubits, std::size_t size, std::uint64_t seed) {
  detail::require(num_qubits >= 1 && num_qubits <= 8, "sample_subset: qubit count out of range");
  const std::size_t total = std::size_t{1} << (2 * num_qubits);
  detail::require(size >= 1 && size <= total, "sample_subset: size must lie in [1, 4^n]");
  std::vector<PauliString> all = all_pauli_strings(num_qubits);
  Rng rng(seed);
  // Partial Fisher-Yates over the non-identity strings.
  for (std::size_t i = 1; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.erase(all.begin() + static_cast<long>(size), all.end());
  return MeasurementScheme::from_paulis(all);
}

/// Draws UD starting subsets for an n-qubit search, retrying up to the cap.
inline MeasurementScheme initial_search_subset(int num_qubits, const SearchConfig& config) {
  config.validate();
  const double fraction = std::isnan(config.initial_fraction)
                              ? default_initial_fraction(num_qubits)
                              : config.initial_fraction;
  const std::size_t total = std::size_t{1} << (2 * num_qubits);
  const auto size = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total))));
  const CertifyConfig cc = config.certify_config(config.search_mode());
  for (int attempt = 0; attempt < config.retry_cap; ++attempt) {
    MeasurementScheme s =
        sample_subset(num_qubits, size, derive_seed(config.seed, {0x1a17ULL, std::uint64_t(attempt)}));
    if (certify(s, cc).is_ud) return s;
  }
  throw SearchPreconditionError("search: no UD starting subset of size " + std::to_string(size) +
                                " after " + std::to_string(config.retry_cap) + " draws");
}

/// Full search on the n-qubit Pauli group starting from a sampled subset.
inline SearchResult search_pauli(int num_qubits, const SearchConfig& config) {
  return search_minimal(initial_search_subset(num_qubits, config), config);
}

struct LocalOptimality {
  CertificationResult full;
  std::vector<CertificationResult> removals;

  bool locally_optimal() const {
    if (!full.is_ud) return false;
    for (const auto& r : removals) {
      if (r.is_ud) return false;
    }
    return true;
  }
};

/// Certifies the scheme and every single-operator removal under one configuration.
inline LocalOptimality check_local_optimality(const MeasurementScheme& scheme,
                                              const CertifyConfig& config) {
  LocalOptimality out;
  out.full = certify(scheme, config);
  for (std::size_t i = 1; i < scheme.size(); ++i)
    out.removals.push_back(certify(scheme.without(i), config));
  return out;
}

struct ProportionInterval {
  double p = 0.0;
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval at the given normal quantile (1.96 for 95%).
inline ProportionInterval wilson_interval(int successes, int n, double z = 1.959963984540054) {
  detail::require(n >= 1 && successes >= 0 && successes <= n, "wilson_interval: bad counts");
  const double nn = n;
  const double p = successes / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct SubsetProbability {
  int num_qubits = 0;
  std::size_t size = 0;
  int samples = 0;
  int successes = 0;
  ProportionInterval estimate;
};

/// Fraction of random Pauli subsets of the given size that certify under `config`.
inline SubsetProbability subset_ud_probability(int num_qubits, std::size_t size, int samples,
                                               const CertifyConfig& config) {
  detail::require(samples >= 1, "subset_ud_probability: sample count must be >= 1");
  CertifyConfig cc = config;
  cc.threads = 1;
  cc.stop_at_threshold = true;
  std::vector<char> ud(static_cast<std::size_t>(samples), 0);
  parallel_for(ud.size(), config.threads, [&](std::size_t k) {
    const MeasurementScheme s =
        sample_subset(num_qubits, size, derive_seed(config.seed, {std::uint64_t(num_qubits), size, k}));
    ud[k] = certify(s, cc).is_ud ? 1 : 0;
  });
  SubsetProbability out;
  out.num_qubits = num_qubits;
  out.size = size;
  out.samples = samples;
  for (char c : ud) out.successes += c;
  out.estimate = wilson_interval(out.successes, samples);
  return out;
}

}  // namespace udcert
