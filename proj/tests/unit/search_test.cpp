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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "udcert/search/search.hpp"

using namespace udcert;

namespace {

const std::vector<std::string> kEleven = {"II", "IX", "IY", "IZ", "XI", "YX",
                                          "YY", "YZ", "ZX", "ZY", "ZZ"};

SearchConfig search_config(std::uint64_t seed, Mode mode = Mode::uda) {
  SearchConfig cfg;
  cfg.mode = mode;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(sample_subset, keeps_identity_and_has_distinct_labels) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_subset(3, 20, seed);
    ASSERT_EQ(s.size(), 20u);
    EXPECT_EQ(s.labels().front(), "III");
    const std::set<std::string> unique(s.labels().begin(), s.labels().end());
    EXPECT_EQ(unique.size(), 20u);
    EXPECT_TRUE(s.is_pauli());
  }
  EXPECT_EQ(sample_subset(2, 7, 5).labels(), sample_subset(2, 7, 5).labels());
  EXPECT_EQ(sample_subset(2, 16, 5).size(), 16u);
  EXPECT_EQ(sample_subset(2, 1, 5).labels(), std::vector<std::string>{"II"});
  EXPECT_THROW(sample_subset(2, 17, 1), ContractError);
  EXPECT_THROW(sample_subset(2, 0, 1), ContractError);
}

TEST(sample_subset, uniform_over_non_identity_strings) {
  std::vector<int> counts(16, 0);
  const int draws = 4000;
  for (int k = 0; k < draws; ++k) {
    const auto sample = sample_subset(2, 4, std::uint64_t(k));
    for (const auto& l : sample.labels()) {
      int code = 0;
      for (char c : l) code = 4 * code + int(std::string("IXYZ").find(c));
      counts[std::size_t(code)]++;
    }
  }
  EXPECT_EQ(counts[0], draws);
  // Each non-identity string has inclusion probability 3/15.
  const double expected = draws * 3.0 / 15.0;
  for (int i = 1; i < 16; ++i) EXPECT_NEAR(counts[std::size_t(i)], expected, 5 * std::sqrt(expected));
}

TEST(wilson, reference_values) {
  const auto a = wilson_interval(7, 20);
  EXPECT_NEAR(a.p, 0.35, 1e-15);
  EXPECT_NEAR(a.low, 0.18119182410108203, 1e-12);
  EXPECT_NEAR(a.high, 0.5671457233147638, 1e-12);
  const auto b = wilson_interval(0, 40);
  EXPECT_NEAR(b.low, 0.0, 1e-15);
  EXPECT_NEAR(b.high, 0.08762160119728668, 1e-12);
  const auto c = wilson_interval(40, 40);
  EXPECT_NEAR(c.low, 0.9123783988027134, 1e-12);
  EXPECT_LE(c.high, 1.0);
  const auto d = wilson_interval(13, 80);
  EXPECT_NEAR(d.low, 0.09749819402950369, 1e-12);
  EXPECT_NEAR(d.high, 0.25842904340697714, 1e-12);
  EXPECT_THROW(wilson_interval(1, 0), ContractError);
  EXPECT_THROW(wilson_interval(5, 4), ContractError);
}

TEST(wilson, interval_contains_estimate) {
  for (int n = 1; n <= 60; n += 7)
    for (int k = 0; k <= n; ++k) {
      const auto w = wilson_interval(k, n);
      EXPECT_LE(w.low, w.p + 1e-15);
      EXPECT_GE(w.high, w.p - 1e-15);
      EXPECT_GE(w.low, 0.0);
      EXPECT_LE(w.high, 1.0);
    }
}

TEST(search, two_qubit_search_from_full_group) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto res = search_pauli(2, search_config(seed));
    const std::size_t size = res.scheme.size();
    EXPECT_TRUE(size == 11 || size == 13) << "seed " << seed << " size " << size;
    EXPECT_EQ(res.scheme.labels().front(), "II");
    EXPECT_TRUE(res.final_certification.is_ud);
    EXPECT_LE(res.certifications_run, 15);
    EXPECT_EQ(static_cast<int>(res.removal_log.size()), res.certifications_run);
    const auto removed = std::count_if(res.removal_log.begin(), res.removal_log.end(),
                                       [](const RemovalStep& s) { return s.removed; });
    EXPECT_EQ(static_cast<std::size_t>(removed), 16 - size);

    const auto again = search_pauli(2, search_config(seed));
    EXPECT_EQ(again.scheme.labels(), res.scheme.labels());
    ASSERT_EQ(again.removal_log.size(), res.removal_log.size());
    for (std::size_t i = 0; i < res.removal_log.size(); ++i) {
      EXPECT_EQ(again.removal_log[i].label, res.removal_log[i].label);
      EXPECT_EQ(again.removal_log[i].removed, res.removal_log[i].removed);
    }
  }
}

TEST(search, result_is_locally_optimal) {
  const auto res = search_pauli(2, search_config(4));
  const auto check = check_local_optimality(res.scheme, search_config(4).certify_config(Mode::uda));
  EXPECT_TRUE(check.locally_optimal());
  EXPECT_EQ(check.removals.size(), res.scheme.size() - 1);
}

TEST(search, minimal_scheme_is_a_fixed_point) {
  const auto s = MeasurementScheme::from_pauli_labels(kEleven);
  const auto res = search_minimal(s, search_config(9));
  EXPECT_EQ(res.scheme.labels(), s.labels());
  EXPECT_EQ(res.certifications_run, 10);
  for (const auto& step : res.removal_log) EXPECT_FALSE(step.removed);
}

TEST(search, rejects_non_ud_start) {
  const auto s = MeasurementScheme::from_pauli_labels(kEleven).without(2);
  EXPECT_THROW(search_minimal(s, search_config(1)), SearchPreconditionError);
  SearchConfig bad = search_config(1);
  bad.trials = 0;
  EXPECT_THROW(search_minimal(MeasurementScheme::from_pauli_labels(kEleven), bad), ContractError);
}

TEST(search, udp_first_is_verified_against_uda) {
  SearchConfig cfg = search_config(5);
  cfg.udp_first = true;
  const auto res = search_pauli(2, cfg);
  EXPECT_EQ(res.final_certification.mode, Mode::udp);
  ASSERT_TRUE(res.uda_verification.has_value());
  EXPECT_EQ(res.uda_verification->mode, Mode::uda);
  EXPECT_TRUE(res.uda_verification->is_ud);
}

TEST(search, default_fraction_schedule) {
  EXPECT_DOUBLE_EQ(default_initial_fraction(2), 1.0);
  EXPECT_DOUBLE_EQ(default_initial_fraction(3), 0.85);
  EXPECT_DOUBLE_EQ(default_initial_fraction(4), 0.70);
  SearchConfig cfg = search_config(1);
  cfg.initial_fraction = 1.0;
  EXPECT_EQ(initial_search_subset(2, cfg).size(), 16u);
  cfg.initial_fraction = 0.25;
  cfg.retry_cap = 2;
  EXPECT_THROW(initial_search_subset(2, cfg), SearchPreconditionError);
}

TEST(subset_probability, complete_sets_are_always_ud) {
  CertifyConfig cc;
  cc.trials = 4;
  cc.seed = 3;
  for (auto [n, size] : {std::pair{2, 16}, std::pair{3, 64}}) {
    const auto p = subset_ud_probability(n, std::size_t(size), 5, cc);
    EXPECT_EQ(p.successes, 5);
    EXPECT_DOUBLE_EQ(p.estimate.p, 1.0);
  }
  // Three observables are far too few for a two-qubit state.
  const auto small = subset_ud_probability(2, 3, 5, cc);
  EXPECT_EQ(small.successes, 0);
}
