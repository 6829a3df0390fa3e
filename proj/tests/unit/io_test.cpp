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

#include <filesystem>

#include "udcert/io/reports.hpp"
#include "udcert/io/scheme_io.hpp"
#include "udcert/io/stable_json.hpp"
#include "udcert/polybases/pb_scheme.hpp"

using namespace udcert;
using io::Json;

namespace {

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "udcert_io_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

io::LoadedScheme parse(const std::string& text) { return io::scheme_from_json(Json::parse(text)); }

std::string load_error(const std::string& text) {
  try {
    parse(text);
  } catch (const LoadError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(scheme_io, pauli_labels) {
  const auto a = parse(R"({"observables": ["II", "IX"]})");
  EXPECT_EQ(a.scheme.size(), 2u);
  EXPECT_EQ(a.scheme.dim(), 4);
  EXPECT_TRUE(a.scheme.is_pauli());
  EXPECT_TRUE(a.warnings.empty());
  const auto b = parse(R"({"observables": [{"pauli": "II"}, {"pauli": "ZY"}]})");
  EXPECT_EQ(b.scheme.labels()[1], "ZY");
}

TEST(scheme_io, identity_is_inserted_or_moved) {
  const auto a = parse(R"({"observables": ["IX", "ZZ"]})");
  ASSERT_EQ(a.scheme.size(), 3u);
  EXPECT_EQ(a.scheme.labels()[0], "II");
  ASSERT_EQ(a.warnings.size(), 1u);
  EXPECT_NE(a.warnings[0].find("inserted"), std::string::npos);

  const auto b = parse(R"({"observables": ["IX", "II", "ZZ"]})");
  EXPECT_EQ(b.scheme.labels(), (std::vector<std::string>{"II", "IX", "ZZ"}));
  ASSERT_EQ(b.warnings.size(), 1u);
}

TEST(scheme_io, dense_observables) {
  const auto s = parse(R"({"observables": [
      {"re": [[1, 0], [0, 1]]},
      {"label": "Y", "re": [[0, 0], [0, 0]], "im": [[0, -1], [1, 0]]}]})");
  EXPECT_FALSE(s.scheme.is_pauli());
  EXPECT_EQ(s.scheme.labels()[1], "Y");
  EXPECT_EQ(s.scheme.observables()[1].matrix()(1, 0), Complex(0, 1));
}

TEST(scheme_io, errors_name_the_observable) {
  EXPECT_NE(load_error(R"({"observables": [{"re": [[1, 0], [0, 1]]}, {"re": [[1, 0, 0], [0, 1, 0]]}]})")
                .find("observable 1"),
            std::string::npos);
  EXPECT_NE(load_error(R"({"observables": [{"re": [[1, 0], [0, 1]]}, {"re": [[0, 1], [0, 0]]}]})")
                .find("observable 1"),
            std::string::npos);
  EXPECT_NE(load_error(R"({"observables": ["II", "X"]})").find("observable 1"), std::string::npos);
  EXPECT_NE(load_error(R"({"observables": ["II", "IQ"]})").find("observable 1"), std::string::npos);
  EXPECT_NE(load_error(R"({"observables": []})"), "");
  EXPECT_NE(load_error(R"([1, 2])"), "");
  EXPECT_NE(load_error(R"({"dim": 2, "observables": ["II"]})"), "");
}

TEST(scheme_io, file_round_trip) {
  const auto pb = build_pb(3, 4).scheme;
  const std::string path = temp_path("pb.json");
  io::save_scheme(pb, path);
  const auto back = io::load_scheme(path).scheme;
  ASSERT_EQ(back.size(), pb.size());
  EXPECT_EQ(back.labels(), pb.labels());
  for (std::size_t i = 0; i < pb.size(); ++i)
    EXPECT_EQ(back.observables()[i].matrix(), pb.observables()[i].matrix());
  const std::string first = io::read_text_file(path);
  io::save_scheme(back, path);
  EXPECT_EQ(io::read_text_file(path), first);
  EXPECT_THROW(io::load_scheme(temp_path("missing.json")), LoadError);
  EXPECT_THROW(io::read_text_file(temp_path("missing.json")), IoError);
}

TEST(stable_json, number_formatting) {
  EXPECT_EQ(io::format_double(1.0), "1.0");
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(1e-300), "1e-300");
  EXPECT_EQ(io::format_double(-0.0), "0.0");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "null");
  EXPECT_EQ(io::format_double(std::nan("")), "null");
  const double x = 0.123456789012345678;
  EXPECT_EQ(std::stod(io::format_double(x)), x);
}

TEST(stable_json, sorted_keys_and_stable_bytes) {
  Json a;
  a["zeta"] = 1;
  a["alpha"] = Json::array({1.5, 2.0});
  a["mid"] = {{"b", true}, {"a", nullptr}};
  const std::string text = io::to_stable_json(a);
  EXPECT_LT(text.find("alpha"), text.find("mid"));
  EXPECT_LT(text.find("mid"), text.find("zeta"));
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(io::to_stable_json(Json::parse(text)), text);
  EXPECT_NE(text.find("[1.5, 2.0]"), std::string::npos);
}

TEST(reports, certification_round_trip) {
  CertifyConfig cfg;
  cfg.trials = 3;
  cfg.seed = 4;
  const auto s = MeasurementScheme::from_pauli_labels({"II", "IX", "IY", "IZ", "XI", "YX", "YY", "YZ", "ZX", "ZY"});
  const auto r = certify(s, cfg);
  const Json j = io::certification_to_json(r);
  for (const char* key : {"mode", "min_loss", "is_ud", "delta", "N", "seed", "psi_minus", "delta_star"})
    EXPECT_TRUE(j.contains(key)) << key;
  const std::string text = io::to_stable_json(j);
  const auto back = io::certification_from_json(Json::parse(text));
  EXPECT_EQ(back.min_loss, r.min_loss);
  EXPECT_EQ(back.trial_losses, r.trial_losses);
  EXPECT_EQ(back.is_ud, r.is_ud);
  EXPECT_EQ(back.best_trial, r.best_trial);
  EXPECT_EQ(back.delta_star->matrix(), r.delta_star->matrix());
  EXPECT_EQ(io::to_stable_json(io::certification_to_json(back)), text);

  const auto shortcut = certify(MeasurementScheme::from_paulis(all_pauli_strings(1)), cfg);
  const Json sj = io::certification_to_json(shortcut);
  EXPECT_EQ(io::to_stable_json(sj).find("inf"), std::string::npos);
  EXPECT_TRUE(std::isinf(io::certification_from_json(Json::parse(io::to_stable_json(sj))).min_loss));
  EXPECT_THROW(io::certification_from_json(Json::parse("{}")), FormatError);
}

TEST(reports, csv_headers) {
  StabilityReport rep;
  StabilityRow row;
  row.scheme_id = "pb";
  row.state_id = "worst";
  row.noise_rate = 1e-4;
  rep.rows.push_back(row);
  const std::string csv = io::stability_csv(rep, Json{{"seed", 3}});
  EXPECT_EQ(csv.rfind("# config ", 0), 0u);
  const auto header_start = csv.find('\n') + 1;
  EXPECT_EQ(csv.substr(header_start, csv.find('\n', header_start) - header_start),
            "scheme_id,state_id,noise_rate,sample,residual,recovery_error,alpha,fidelity");
  EXPECT_NE(csv.find(",nan,"), std::string::npos);
  EXPECT_EQ(io::subset_csv({}), "n_qubits,size,n_samples,p,ci_low,ci_high\n");
}
