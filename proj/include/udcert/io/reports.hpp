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

#include <cstdio>
#include <sstream>
#include <string>

#include "udcert/certify/certifier.hpp"
#include "udcert/io/stable_json.hpp"
#include "udcert/io/scheme_io.hpp"
#include "udcert/recovery/stability.hpp"
#include "udcert/search/search.hpp"

namespace udcert::io {

inline Json complex_matrix_to_json(const CMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ir = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return Json{{"re", re}, {"im", im}};
}

inline Json state_to_json(const PureState& psi) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i)
    out.push_back(Json::array({psi.amplitudes()(i).real(), psi.amplitudes()(i).imag()}));
  return out;
}

inline PureState state_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("state must be a non-empty array of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != 2) throw FormatError("state entries must be [re, im] pairs");
    v(Eigen::Index(i)) = Complex(j[i][0].get<double>(), j[i][1].get<double>());
  }
  if (std::abs(v.norm() - 1.0) <= 1e-12) return PureState(v);
  return PureState::normalized(v);
}

inline Json certification_to_json(const CertificationResult& r) {
  Json j;
  j["mode"] = to_string(r.mode);
  j["min_loss"] = r.min_loss;
  j["is_ud"] = r.is_ud;
  j["delta"] = r.delta;
  j["N"] = r.trials;
  j["seed"] = r.seed;
  j["via_kernel_shortcut"] = r.via_kernel_shortcut;
  j["trial_losses"] = r.trial_losses;
  j["psi_minus"] = r.psi_minus ? state_to_json(*r.psi_minus) : Json::array();
  j["delta_star"] = r.delta_star ? complex_matrix_to_json(r.delta_star->matrix()) : Json(nullptr);
  return j;
}

inline CertificationResult certification_from_json(const Json& j) {
  try {
    CertificationResult r;
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.min_loss = read_double(j.at("min_loss"), std::numeric_limits<double>::infinity());
    r.is_ud = j.at("is_ud").get<bool>();
    r.delta = j.at("delta").get<double>();
    r.trials = j.at("N").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.via_kernel_shortcut = j.at("via_kernel_shortcut").get<bool>();
    for (const auto& v : j.at("trial_losses")) r.trial_losses.push_back(read_double(v, std::numeric_limits<double>::infinity()));
    for (std::size_t t = 0; t < r.trial_losses.size(); ++t) {
      if (r.best_trial < 0 || r.trial_losses[t] < r.trial_losses[std::size_t(r.best_trial)])
        r.best_trial = static_cast<int>(t);
    }
    if (!j.at("psi_minus").empty()) r.psi_minus = state_from_json(j.at("psi_minus"));
    const Json& ds = j.at("delta_star");
    if (!ds.is_null()) {
      const std::size_t d = ds.at("re").size();
      CMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          m(Eigen::Index(a), Eigen::Index(b)) = Complex(ds["re"][a][b].get<double>(), ds["im"][a][b].get<double>());
      r.delta_star = HermitianMatrix(m);
    }
    return r;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed certification result: ") + e.what());
  }
}

inline Json search_to_json(const SearchResult& r) {
  Json log = Json::array();
  for (const auto& s : r.removal_log)
    log.push_back(Json{{"label", s.label}, {"removed", s.removed}, {"min_loss", s.min_loss}});
  Json j;
  j["scheme"] = scheme_to_json(r.scheme);
  j["size"] = r.scheme.size();
  j["labels"] = r.scheme.labels();
  j["removal_log"] = log;
  j["certifications_run"] = r.certifications_run;
  j["certification"] = certification_to_json(r.final_certification);
  j["uda_verification"] = r.uda_verification ? certification_to_json(*r.uda_verification) : Json(nullptr);
  return j;
}

inline std::string csv_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

inline constexpr const char* kStabilityColumns =
    "scheme_id,state_id,noise_rate,sample,residual,recovery_error,alpha,fidelity";

inline constexpr const char* kSubsetColumns = "n_qubits,size,n_samples,p,ci_low,ci_high";

/// Optional first line of a CSV report carrying the resolved run configuration.
inline std::string csv_config_line(const Json& config) {
  return config.is_null() ? std::string() : "# config " + to_stable_json(config, 0);
}

inline std::string stability_csv(const StabilityReport& report, const Json& config = nullptr) {
  std::ostringstream out;
  out << csv_config_line(config) << kStabilityColumns << "\n";
  for (const auto& r : report.rows) {
    out << r.scheme_id << ',' << r.state_id << ',' << csv_double(r.noise_rate) << ',' << r.sample << ','
        << csv_double(r.residual) << ',' << csv_double(r.recovery_error) << ',' << csv_double(r.alpha) << ','
        << csv_double(r.fidelity) << "\n";
  }
  return out.str();
}

inline Json envelope_to_json(const Envelope& e) {
  return Json{{"mean", e.mean}, {"min", e.min}, {"max", e.max}};
}

inline Json stability_summary_json(const StabilityReport& report) {
  Json groups = Json::array();
  for (const auto& a : report.aggregates) {
    groups.push_back(Json{{"state_id", a.state_id},
                          {"noise_rate", a.noise_rate},
                          {"samples", a.samples},
                          {"residual", envelope_to_json(a.residual)},
                          {"recovery_error", envelope_to_json(a.recovery_error)},
                          {"alpha", envelope_to_json(a.alpha)},
                          {"alpha_defined", a.alpha_defined},
                          {"fidelity", envelope_to_json(a.fidelity)}});
  }
  return Json{{"aggregates", groups}, {"non_converged", report.non_converged}, {"rows", report.rows.size()}};
}

inline std::string subset_csv(const std::vector<SubsetProbability>& rows, const Json& config = nullptr) {
  std::ostringstream out;
  out << csv_config_line(config) << kSubsetColumns << "\n";
  for (const auto& r : rows) {
    out << r.num_qubits << ',' << r.size << ',' << r.samples << ',' << csv_double(r.estimate.p) << ','
        << csv_double(r.estimate.low) << ',' << csv_double(r.estimate.high) << "\n";
  }
  return out.str();
}

inline Json subset_to_json(const SubsetProbability& r) {
  return Json{{"n_qubits", r.num_qubits}, {"size", r.size},       {"n_samples", r.samples},
              {"successes", r.successes}, {"p", r.estimate.p},    {"ci_low", r.estimate.low},
              {"ci_high", r.estimate.high}};
}

inline Json recovery_to_json(const RecoveryResult& r) {
  return Json{{"y_star", complex_matrix_to_json(r.y_star.matrix())},
              {"residual", r.residual},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"gap", r.gap},
              {"restart_residuals", r.restart_residuals},
              {"restart_spread", r.restart_spread}};
}

}  // namespace udcert::io
