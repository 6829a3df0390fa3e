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
#include <bit>
#include <optional>
#include <string>
#include <vector>

#include "udcert/core/pauli.hpp"
#include "udcert/core/scheme.hpp"
#include "udcert/io/stable_json.hpp"

namespace udcert::io {

struct LoadedScheme {
  MeasurementScheme scheme;
  std::vector<std::string> warnings;
};

namespace detail {

inline CMatrix dense_from_json(const Json& re, const Json* im, std::size_t index) {
  const std::string where = "observable " + std::to_string(index) + ": ";
  if (!re.is_array() || re.empty()) throw LoadError(where + "'re' must be a non-empty array of rows");
  const std::size_t d = re.size();
  auto read = [&](const Json& rows, const char* part, CMatrix& out, bool imag) {
    if (!rows.is_array() || rows.size() != d)
      throw LoadError(where + "'" + part + "' must have " + std::to_string(d) + " rows");
    for (std::size_t i = 0; i < d; ++i) {
      const Json& row = rows[i];
      if (!row.is_array() || row.size() != d)
        throw LoadError(where + "matrix is not square (row " + std::to_string(i) + " of '" + part +
                        "' has " + std::to_string(row.is_array() ? row.size() : 0) + " entries, expected " +
                        std::to_string(d) + ")");
      for (std::size_t j = 0; j < d; ++j) {
        if (!row[j].is_number()) throw LoadError(where + "non-numeric entry in '" + part + "'");
        const double v = row[j].get<double>();
        if (imag)
          out(Eigen::Index(i), Eigen::Index(j)) += Complex(0.0, v);
        else
          out(Eigen::Index(i), Eigen::Index(j)) += v;
      }
    }
  };
  CMatrix m = CMatrix::Zero(Eigen::Index(d), Eigen::Index(d));
  read(re, "re", m, false);
  if (im) read(*im, "im", m, true);
  return m;
}

}  // namespace detail

/// Parses {"dim": d, "observables": [...]}. Entries are Pauli labels ("IX" or {"pauli": "IX"})
/// or dense matrices {"re": [[...]], "im": [[...]], "label": "..."}. A missing or misplaced
/// identity is inserted or moved to the front and reported in `warnings`.
inline LoadedScheme scheme_from_json(const Json& j) {
  if (!j.is_object()) throw LoadError("scheme file must hold a JSON object");
  if (!j.contains("observables") || !j["observables"].is_array())
    throw LoadError("scheme file needs an 'observables' array");
  const Json& list = j["observables"];
  if (list.empty()) throw LoadError("scheme has no observables");
  std::optional<int> dim;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1) throw LoadError("'dim' must be a positive integer");
    dim = j["dim"].get<int>();
  }

  std::vector<HermitianMatrix> obs;
  std::vector<std::string> labels;
  bool all_pauli = true;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Json& e = list[i];
    const std::string where = "observable " + std::to_string(i) + ": ";
    try {
      std::optional<std::string> pauli;
      if (e.is_string()) pauli = e.get<std::string>();
      else if (e.is_object() && e.contains("pauli")) {
        if (!e["pauli"].is_string()) throw LoadError(where + "'pauli' must be a string");
        pauli = e["pauli"].get<std::string>();
      }
      if (pauli) {
        const PauliString p(*pauli);
        obs.push_back(pauli_to_matrix(p));
        labels.push_back(p.label());
      } else if (e.is_object() && e.contains("re")) {
        const Json* im = e.contains("im") ? &e["im"] : nullptr;
        obs.emplace_back(detail::dense_from_json(e["re"], im, i));
        labels.push_back(e.contains("label") && e["label"].is_string() ? e["label"].get<std::string>()
                                                                      : "A" + std::to_string(i));
        all_pauli = false;
      } else {
        throw LoadError(where + "expected a Pauli label or an object with 're'/'im'");
      }
    } catch (const LoadError&) {
      throw;
    } catch (const Error& err) {
      throw LoadError(where + err.what());
    }
    if (!dim) dim = obs.back().dim();
    if (obs.back().dim() != *dim)
      throw LoadError(where + "dimension " + std::to_string(obs.back().dim()) + " does not match " +
                      std::to_string(*dim));
  }

  LoadedScheme out;
  std::size_t id = obs.size();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (obs[i].is_identity()) {
      id = i;
      break;
    }
  }
  if (id == obs.size()) {
    obs.insert(obs.begin(), HermitianMatrix::identity(*dim));
    labels.insert(labels.begin(), all_pauli ? std::string(static_cast<std::size_t>(std::countr_zero(unsigned(*dim))), 'I') : "I");
    out.warnings.push_back("identity missing; inserted as observable 0");
  } else if (id != 0) {
    std::rotate(obs.begin(), obs.begin() + long(id), obs.begin() + long(id) + 1);
    std::rotate(labels.begin(), labels.begin() + long(id), labels.begin() + long(id) + 1);
    out.warnings.push_back("identity found at index " + std::to_string(id) + "; moved to the front");
  }
  if (all_pauli) {
    std::vector<PauliString> ps;
    for (const auto& l : labels) ps.emplace_back(l);
    out.scheme = MeasurementScheme::from_paulis(ps);
  } else {
    out.scheme = MeasurementScheme(std::move(obs), std::move(labels));
  }
  return out;
}

inline LoadedScheme load_scheme(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw LoadError("'" + path + "' is not valid JSON: " + e.what());
  } catch (const IoError& e) {
    throw LoadError(e.what());
  }
  return scheme_from_json(j);
}

/// Pauli schemes serialize as labels, anything else as dense matrices.
inline Json scheme_to_json(const MeasurementScheme& scheme) {
  Json list = Json::array();
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    if (scheme.is_pauli()) {
      list.push_back(scheme.labels()[i]);
      continue;
    }
    const CMatrix& m = scheme.observables()[i].matrix();
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
    list.push_back(Json{{"label", scheme.labels()[i]}, {"re", re}, {"im", im}});
  }
  return Json{{"dim", scheme.dim()}, {"observables", list}};
}

inline void save_scheme(const MeasurementScheme& scheme, const std::string& path) {
  write_text_file(path, to_stable_json(scheme_to_json(scheme)));
}

}  // namespace udcert::io
