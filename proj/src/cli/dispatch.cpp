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

#include "udcert/cli/dispatch.hpp"

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "udcert/io/reports.hpp"
#include "udcert/polybases/pb_scheme.hpp"

namespace udcert::cli {

/// Everything a command needs, after parsing and defaulting.
struct RunConfig {
  std::string command;
  std::string scheme_path;
  std::vector<std::string> pauli_labels;
  std::vector<int> pb;
  std::string mode = "uda";
  int trials = 10;
  double delta = kDefaultDelta;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  int threads = 1;
  std::string optimizer = "lm";
  int max_iterations = 500;

  // search
  int qubits = 0;
  bool udp_first = false;
  double initial_fraction = std::numeric_limits<double>::quiet_NaN();
  int retry_cap = 10;
  int repeats = 1;
  std::string labels_out;

  // subset-prob
  std::vector<std::size_t> sizes;
  int samples = 50;

  // pb-build
  double alpha = std::numeric_limits<double>::quiet_NaN();
  bool dedup = false;

  // recover / stability
  std::string data_file;
  std::string recovery_mode = "convex";
  std::string solver = "interior-point";
  double rate = 0.0;
  std::vector<double> rates;
  std::vector<std::string> states;
  std::string summary_out;
};

namespace detail {

struct Output {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> log;
};

void emit(const RunConfig& cfg, Output& o, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    o.out << text;
  } else {
    io::write_text_file(cfg.out, text);
  }
}

std::string scheme_source(const RunConfig& cfg) {
  if (!cfg.scheme_path.empty()) return "file:" + cfg.scheme_path;
  if (!cfg.pauli_labels.empty()) return "pauli-labels";
  if (!cfg.pb.empty()) return "pb:" + std::to_string(cfg.pb[0]) + "," + std::to_string(cfg.pb[1]);
  return "none";
}

int scheme_sources(const RunConfig& cfg) {
  return int(!cfg.scheme_path.empty()) + int(!cfg.pauli_labels.empty()) + int(!cfg.pb.empty());
}

MeasurementScheme resolve_scheme(const RunConfig& cfg, Output& o) {
  if (scheme_sources(cfg) != 1)
    throw ContractError("exactly one of --scheme, --pauli-labels, --pb is required");
  io::LoadedScheme loaded;
  if (!cfg.scheme_path.empty()) {
    loaded = io::load_scheme(cfg.scheme_path);
  } else if (!cfg.pauli_labels.empty()) {
    // Labels typed on the command line are a usage problem, not a file problem.
    try {
      loaded = io::scheme_from_json(io::Json{{"observables", cfg.pauli_labels}});
    } catch (const LoadError& e) {
      throw FormatError(std::string("--pauli-labels: ") + e.what());
    }
  } else {
    if (cfg.pb.size() != 2) throw ContractError("--pb expects d,k");
    PBOptions opt;
    opt.alpha = cfg.alpha;
    opt.dedup = cfg.dedup;
    loaded.scheme = build_pb(cfg.pb[0], cfg.pb[1], opt).scheme;
  }
  for (const auto& w : loaded.warnings) {
    o.err << "warning: " << w << "\n";
    o.log.push_back("warning: " + w);
  }
  return loaded.scheme;
}

io::Json base_config(const RunConfig& cfg) {
  return io::Json{{"command", cfg.command},   {"mode", cfg.mode},       {"trials", cfg.trials},
                  {"delta", cfg.delta},       {"seed", *cfg.seed},      {"threads", cfg.threads},
                  {"optimizer", cfg.optimizer}, {"max_iterations", cfg.max_iterations}};
}

io::Json with_scheme(io::Json j, const RunConfig& cfg) {
  j["scheme"] = scheme_source(cfg);
  if (!cfg.pauli_labels.empty()) j["pauli_labels"] = cfg.pauli_labels;
  if (!cfg.pb.empty()) j["pb"] = cfg.pb;
  return j;
}

CertifyConfig certify_config(const RunConfig& cfg, Mode mode) {
  CertifyConfig c;
  c.mode = mode;
  c.trials = cfg.trials;
  c.delta = cfg.delta;
  c.seed = *cfg.seed;
  c.threads = cfg.threads;
  c.minimize.method = parse_optimizer(cfg.optimizer);
  c.minimize.max_iterations = cfg.max_iterations;
  return c;
}

int run_certify(const RunConfig& cfg, Output& o) {
  const MeasurementScheme scheme = resolve_scheme(cfg, o);
  const CertificationResult r = certify(scheme, certify_config(cfg, parse_mode(cfg.mode)));
  io::Json j = io::certification_to_json(r);
  j["config"] = with_scheme(base_config(cfg), cfg);
  j["scheme_size"] = scheme.size();
  emit(cfg, o, io::to_stable_json(j));
  return r.is_ud ? kOk : kNotUd;
}

SearchConfig search_config(const RunConfig& cfg, std::uint64_t seed) {
  SearchConfig s;
  s.mode = parse_mode(cfg.mode);
  s.trials = cfg.trials;
  s.delta = cfg.delta;
  s.seed = seed;
  s.initial_fraction = cfg.initial_fraction;
  s.retry_cap = cfg.retry_cap;
  s.udp_first = cfg.udp_first;
  s.threads = cfg.threads;
  s.minimize.method = parse_optimizer(cfg.optimizer);
  s.minimize.max_iterations = cfg.max_iterations;
  return s;
}

int run_search(const RunConfig& cfg, Output& o) {
  udcert::detail::require(cfg.repeats >= 1, "--repeats must be >= 1");
  const bool from_group = scheme_sources(cfg) == 0;
  if (from_group) udcert::detail::require(cfg.qubits >= 1, "search needs a scheme source or --qubits");
  std::optional<MeasurementScheme> initial;
  if (!from_group) initial = resolve_scheme(cfg, o);

  io::Json runs = io::Json::array();
  std::vector<std::vector<std::string>> distinct;
  std::string labels_text;
  for (int rep = 0; rep < cfg.repeats; ++rep) {
    const std::uint64_t seed = cfg.repeats == 1 ? *cfg.seed : derive_seed(*cfg.seed, {std::uint64_t(rep)});
    const SearchConfig sc = search_config(cfg, seed);
    const SearchResult r = initial ? search_minimal(*initial, sc) : search_pauli(cfg.qubits, sc);
    io::Json j = io::search_to_json(r);
    j["seed"] = seed;
    runs.push_back(j);
    std::vector<std::string> sorted = r.scheme.labels();
    std::sort(sorted.begin(), sorted.end());
    if (std::find(distinct.begin(), distinct.end(), sorted) == distinct.end()) distinct.push_back(sorted);
    for (std::size_t i = 0; i < r.scheme.size(); ++i) labels_text += (i ? " " : "") + r.scheme.labels()[i];
    labels_text += "\n";
  }
  io::Json config = with_scheme(base_config(cfg), cfg);
  config["qubits"] = cfg.qubits;
  config["udp_first"] = cfg.udp_first;
  config["initial_fraction"] = cfg.initial_fraction;
  config["retry_cap"] = cfg.retry_cap;
  config["repeats"] = cfg.repeats;
  io::Json j{{"config", config}, {"runs", runs}, {"distinct_schemes", distinct.size()}};
  emit(cfg, o, io::to_stable_json(j));
  std::string labels_path = cfg.labels_out;
  if (labels_path.empty() && !cfg.out.empty() && cfg.out != "-") labels_path = cfg.out + ".labels.txt";
  if (!labels_path.empty()) io::write_text_file(labels_path, labels_text);
  return kOk;
}

int run_subset_prob(const RunConfig& cfg, Output& o) {
  udcert::detail::require(cfg.qubits >= 1, "subset-prob needs --qubits");
  udcert::detail::require(!cfg.sizes.empty(), "subset-prob needs --sizes");
  CertifyConfig cc = certify_config(cfg, Mode::uda);
  std::vector<SubsetProbability> rows;
  for (std::size_t size : cfg.sizes) rows.push_back(subset_ud_probability(cfg.qubits, size, cfg.samples, cc));
  io::Json config = base_config(cfg);
  config["mode"] = "uda";
  config["qubits"] = cfg.qubits;
  config["sizes"] = cfg.sizes;
  config["samples"] = cfg.samples;
  if (cfg.format == "csv") {
    emit(cfg, o, io::subset_csv(rows, config));
  } else {
    io::Json list = io::Json::array();
    for (const auto& r : rows) list.push_back(io::subset_to_json(r));
    emit(cfg, o, io::to_stable_json(io::Json{{"config", config}, {"rows", list}}));
  }
  return kOk;
}

int run_pb_build(const RunConfig& cfg, Output& o) {
  udcert::detail::require(cfg.pb.size() == 2, "pb-build needs --pb d,k");
  PBOptions opt;
  opt.alpha = cfg.alpha;
  opt.dedup = cfg.dedup;
  const PBScheme pb = build_pb(cfg.pb[0], cfg.pb[1], opt);
  io::Json j = io::scheme_to_json(pb.scheme);
  j["config"] = io::Json{{"command", cfg.command}, {"pb", cfg.pb}, {"alpha", pb.alpha}, {"dedup", cfg.dedup}};
  emit(cfg, o, io::to_stable_json(j));
  return kOk;
}

RecoveryOptions recovery_options(const RunConfig& cfg) {
  RecoveryOptions r;
  if (cfg.recovery_mode == "rank1")
    r.mode = RecoveryMode::udp_rank1;
  else if (cfg.recovery_mode != "convex")
    throw ContractError("--recovery-mode must be convex or rank1");
  if (cfg.solver == "projected-gradient")
    r.solver = ConvexSolver::projected_gradient;
  else if (cfg.solver != "interior-point")
    throw ContractError("--solver must be interior-point or projected-gradient");
  r.seed = *cfg.seed;
  return r;
}

int run_recover(const RunConfig& cfg, Output& o) {
  const MeasurementScheme scheme = resolve_scheme(cfg, o);
  io::Json config = with_scheme(base_config(cfg), cfg);
  config["recovery_mode"] = cfg.recovery_mode;
  config["solver"] = cfg.solver;
  RVector b;
  io::Json extra;
  if (!cfg.data_file.empty()) {
    const io::Json data = io::Json::parse(io::read_text_file(cfg.data_file));
    const io::Json& list = data.is_object() ? data.at("b") : data;
    b.resize(static_cast<Eigen::Index>(list.size()));
    for (std::size_t i = 0; i < list.size(); ++i) b(Eigen::Index(i)) = list[i].get<double>();
    config["data_file"] = cfg.data_file;
  } else {
    // Synthetic data: Haar-random pure state plus noise of norm --rate.
    const PureState sigma = random_pure_state(scheme.dim(), derive_seed(*cfg.seed, {1}));
    const RVector f = sample_noise(static_cast<Eigen::Index>(scheme.size()), cfg.rate, derive_seed(*cfg.seed, {2}));
    b = measure(scheme, sigma.projector()).values() + f;
    config["rate"] = cfg.rate;
    extra["sigma"] = io::state_to_json(sigma);
  }
  const RecoveryResult r = recover(scheme, MeasurementVector(b), recovery_options(cfg));
  io::Json j = io::recovery_to_json(r);
  j["config"] = config;
  j["b"] = std::vector<double>(b.data(), b.data() + b.size());
  if (extra.contains("sigma")) {
    const PureState sigma = io::state_from_json(extra["sigma"]);
    j["sigma"] = extra["sigma"];
    j["fidelity"] = fidelity(sigma, r.y_star);
    j["recovery_error"] = (r.y_star.matrix() - sigma.projector().matrix()).norm();
  }
  emit(cfg, o, io::to_stable_json(j));
  return kOk;
}

int run_stability(const RunConfig& cfg, Output& o) {
  const MeasurementScheme scheme = resolve_scheme(cfg, o);
  udcert::detail::require(!cfg.rates.empty(), "stability needs --rates");
  std::vector<LabeledState> states;
  std::optional<CertificationResult> cert;
  int random_index = 0;
  for (const auto& s : cfg.states) {
    if (s == "worst") {
      if (!cert) cert = certify(scheme, certify_config(cfg, Mode::uda));
      states.push_back({"psi_minus", worst_case_state(*cert)});
    } else if (s == "random") {
      const auto k = static_cast<std::uint64_t>(random_index++);
      states.push_back({"random" + std::to_string(k), random_pure_state(scheme.dim(), derive_seed(*cfg.seed, {7, k}))});
    } else {
      throw ContractError("--states entries must be 'worst' or 'random', got '" + s + "'");
    }
  }
  StabilityConfig sc;
  sc.scheme_id = scheme_source(cfg);
  sc.samples = cfg.samples;
  sc.seed = *cfg.seed;
  sc.threads = cfg.threads;
  sc.recovery = recovery_options(cfg);
  const StabilityReport report = stability_experiment(scheme, states, cfg.rates, sc);

  io::Json config = with_scheme(base_config(cfg), cfg);
  config["rates"] = cfg.rates;
  config["samples"] = cfg.samples;
  config["states"] = cfg.states;
  config["recovery_mode"] = cfg.recovery_mode;
  config["solver"] = cfg.solver;
  io::Json summary = io::stability_summary_json(report);
  summary["config"] = config;
  if (cert) summary["min_loss"] = cert->min_loss;
  if (cert) summary["alpha_bound"] = 1.0 / std::sqrt(cert->min_loss);
  if (cfg.format == "csv") {
    emit(cfg, o, io::stability_csv(report, config));
    std::string path = cfg.summary_out;
    if (path.empty() && !cfg.out.empty() && cfg.out != "-") path = cfg.out + ".summary.json";
    if (!path.empty()) io::write_text_file(path, io::to_stable_json(summary));
  } else {
    emit(cfg, o, io::to_stable_json(summary));
  }
  if (report.non_converged > 0) o.err << "warning: " << report.non_converged << " recoveries did not converge\n";
  return kOk;
}

template <class T>
std::vector<T> split_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if constexpr (std::is_same_v<T, std::string>) {
      out.push_back(item);
    } else {
      std::istringstream is(item);
      T v{};
      if (!(is >> v) || !is.eof()) throw CLI::ValidationError("bad list entry '" + item + "'");
      out.push_back(v);
    }
  }
  return out;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace detail

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certify unique determinedness of quantum measurement schemes"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  RunConfig cfg;
  std::string pauli_labels, pb, sizes, rates, states = "worst,random,random";
  std::uint64_t seed_value = 0;

  auto add_scheme = [&](CLI::App* c) {
    auto* g1 = c->add_option("--scheme", cfg.scheme_path, "Scheme JSON file");
    auto* g2 = c->add_option("--pauli-labels", pauli_labels, "Comma separated Pauli labels");
    auto* g3 = c->add_option("--pb", pb, "Polynomial-basis scheme d,k");
    g1->excludes(g2)->excludes(g3);
    g2->excludes(g3);
  };
  auto add_common = [&](CLI::App* c) {
    c->add_option("--mode", cfg.mode, "udp or uda")->check(CLI::IsMember({"udp", "uda"}))->capture_default_str();
    c->add_option("--trials", cfg.trials, "Descents per certification")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--delta", cfg.delta, "Threshold on the minimum loss")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--seed", seed_value, "Master seed (generated and logged when absent)");
    c->add_option("--out", cfg.out, "Output path (stdout when absent)");
    c->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    c->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--optimizer", cfg.optimizer, "lm or lbfgs")->check(CLI::IsMember({"lm", "lbfgs"}))->capture_default_str();
    c->add_option("--max-iterations", cfg.max_iterations, "Iteration cap per descent")->check(CLI::PositiveNumber)->capture_default_str();
  };

  auto* certify_cmd = app.add_subcommand("certify", "Certify a scheme as UDP or UDA");
  add_scheme(certify_cmd);
  add_common(certify_cmd);

  auto* search_cmd = app.add_subcommand("search", "Search for a minimal UD scheme");
  add_scheme(search_cmd);
  add_common(search_cmd);
  search_cmd->add_option("--qubits", cfg.qubits, "Start from a random subset of the n-qubit Pauli group");
  search_cmd->add_flag("--udp-first", cfg.udp_first, "Search with UDP, then verify with UDA");
  search_cmd->add_option("--initial-fraction", cfg.initial_fraction, "Fraction of 4^n in the starting subset");
  search_cmd->add_option("--retry-cap", cfg.retry_cap, "Draws of a UD starting subset")->capture_default_str();
  search_cmd->add_option("--repeats", cfg.repeats, "Independent searches")->capture_default_str();
  search_cmd->add_option("--labels-out", cfg.labels_out, "Flat label list, one scheme per line");

  auto* subset_cmd = app.add_subcommand("subset-prob", "Probability that random Pauli subsets are UDA");
  add_common(subset_cmd);
  subset_cmd->add_option("--qubits", cfg.qubits, "Qubit count")->required();
  subset_cmd->add_option("--sizes", sizes, "Comma separated subset sizes")->required();
  subset_cmd->add_option("--samples", cfg.samples, "Subsets per size")->capture_default_str();

  auto* pb_cmd = app.add_subcommand("pb-build", "Write a polynomial-basis scheme");
  pb_cmd->add_option("--pb", pb, "d,k")->required();
  pb_cmd->add_option("--alpha", cfg.alpha, "Phase parameter (pi/d when absent)");
  pb_cmd->add_flag("--dedup", cfg.dedup, "Drop repeated projectors");
  pb_cmd->add_option("--out", cfg.out, "Output path (stdout when absent)");

  auto* recover_cmd = app.add_subcommand("recover", "Recover a state from measurement data");
  add_scheme(recover_cmd);
  add_common(recover_cmd);
  recover_cmd->add_option("--data-file", cfg.data_file, "JSON array (or {\"b\": [...]}) of measured values");
  recover_cmd->add_option("--rate", cfg.rate, "Noise norm for synthetic data")->capture_default_str();
  recover_cmd->add_option("--recovery-mode", cfg.recovery_mode, "convex or rank1")->capture_default_str();
  recover_cmd->add_option("--solver", cfg.solver, "interior-point or projected-gradient")->capture_default_str();

  auto* stability_cmd = app.add_subcommand("stability", "Noisy-recovery stability experiment");
  add_scheme(stability_cmd);
  add_common(stability_cmd);
  stability_cmd->add_option("--rates", rates, "Comma separated noise norms")->required();
  stability_cmd->add_option("--states", states, "Comma separated: worst, random")->capture_default_str();
  stability_cmd->add_option("--samples", cfg.samples, "Noise draws per (state, rate)")->capture_default_str();
  stability_cmd->add_option("--recovery-mode", cfg.recovery_mode, "convex or rank1")->capture_default_str();
  stability_cmd->add_option("--solver", cfg.solver, "interior-point or projected-gradient")->capture_default_str();
  stability_cmd->add_option("--summary-out", cfg.summary_out, "Aggregate JSON path for CSV runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  detail::Output o{out, err, {}};
  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    const CLI::App* sub = app.get_subcommands().front();
    if (!pauli_labels.empty()) cfg.pauli_labels = detail::split_list<std::string>(pauli_labels);
    if (!pb.empty()) {
      cfg.pb = detail::split_list<int>(pb);
      udcert::detail::require(cfg.pb.size() == 2, "--pb expects d,k");
    }
    if (!sizes.empty()) cfg.sizes = detail::split_list<std::size_t>(sizes);
    if (!rates.empty()) cfg.rates = detail::split_list<double>(rates);
    cfg.states = detail::split_list<std::string>(states);
    const CLI::Option* seed_opt = sub->get_option_no_throw("--seed");
    if (seed_opt == nullptr) {
      cfg.seed = 0;
    } else if (seed_opt->count() > 0) {
      cfg.seed = seed_value;
    } else {
      cfg.seed = (std::uint64_t(std::random_device{}()) << 32) ^ std::random_device{}();
      err << "seed: " << *cfg.seed << " (generated)\n";
      o.log.push_back("seed " + std::to_string(*cfg.seed) + " generated");
    }
    if (cfg.command == "certify") code = detail::run_certify(cfg, o);
    else if (cfg.command == "search") code = detail::run_search(cfg, o);
    else if (cfg.command == "subset-prob") code = detail::run_subset_prob(cfg, o);
    else if (cfg.command == "pb-build") code = detail::run_pb_build(cfg, o);
    else if (cfg.command == "recover") code = detail::run_recover(cfg, o);
    else code = detail::run_stability(cfg, o);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }

  if (!cfg.out.empty() && cfg.out != "-") {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string text = "finished " + detail::timestamp() + "\nwall_seconds " + io::format_double(secs) +
                       "\nexit_code " + std::to_string(code) + "\n";
    for (const auto& line : o.log) text += line + "\n";
    try {
      io::write_text_file(cfg.out + ".log", text);
    } catch (const IoError& e) {
      err << "warning: " << e.what() << "\n";
    }
  }
  return code;
}

}  // namespace udcert::cli
