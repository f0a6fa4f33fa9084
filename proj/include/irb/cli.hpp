// Copyright 2026 The irb Authors
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

// Command implementations behind the irb executable. Each command is a plain
// function so it can be driven from tests without a process boundary.

#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "irb/clifford.hpp"
#include "irb/clifford_group.hpp"
#include "irb/config.hpp"
#include "irb/dataset_io.hpp"
#include "irb/error.hpp"
#include "irb/estimation.hpp"
#include "irb/fitting.hpp"
#include "irb/protocol.hpp"

namespace irb::cli {

inline constexpr std::string_view kToolName = "irb";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int { kSuccess = 0, kInputError = 2, kRuntimeError = 3 };

inline int exit_code_for(const Error& e) { return is_input_error(e.kind()) ? kInputError : kRuntimeError; }

inline unsigned default_threads() { return std::max(1U, std::thread::hardware_concurrency()); }

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Flag beats RB_SEED beats the config file.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t config_seed) {
  if (flag) return *flag;
  if (auto env = seed_from_environment()) return *env;
  return config_seed;
}

inline std::string file_label(std::string_view label) {
  std::string out;
  for (char ch : label) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_';
    out += keep ? ch : '_';
  }
  return out.empty() ? std::string("target") : out;
}

inline RunConfig load_run_config(const std::string& path, std::optional<std::uint64_t> seed_flag) {
  RunConfig cfg = parse_run_config_text(read_text_file(path));
  cfg.seed = resolve_seed(seed_flag, cfg.seed);
  return cfg;
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kInvalidConfig, "cannot create output directory '" + dir.string() + "': " + ec.message());
}

/// Fits the requested model and, when possible, the other one alongside.
struct FitPair {
  FitResult primary;
  std::optional<FitResult> secondary;
  std::string secondary_error;
};

inline FitPair fit_both(const DecayDataset& data, DecayModel model) {
  FitPair out{fit_decay(data, model), std::nullopt, {}};
  const auto other = model == DecayModel::kZeroth ? DecayModel::kFirst : DecayModel::kZeroth;
  try {
    out.secondary = fit_decay(data, other);
  } catch (const Error& e) {
    out.secondary_error = e.what();
  }
  return out;
}

inline json fits_to_json(const FitPair& fits) {
  json j = {{"primary", fit_to_json(fits.primary)}};
  if (fits.secondary) j["alongside"] = fit_to_json(*fits.secondary);
  else j["alongside"] = {{"error", fits.secondary_error}};
  return j;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string config_path;
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  DecayModel model = DecayModel::kZeroth;
  std::size_t bootstrap = 0;
};

struct SimulateResult {
  json manifest;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, DecayDataset>> datasets;
};

inline SimulateResult cmd_simulate(const SimulateOptions& opts, std::ostream& out) {
  const RunConfig cfg = load_run_config(opts.config_path, opts.seed);
  const std::filesystem::path dir(opts.output_dir);
  ensure_directory(dir);
  const json echo = config_echo(cfg);
  SimulateResult result;
  const std::string started = utc_timestamp();

  auto emit = [&](const std::string& stem, const ExperimentConfig& experiment, const json& extra) {
    DecayDataset data = run_experiment(experiment, opts.threads);
    json doc = dataset_to_json(data, echo);
    for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
    try {
      const auto fits = fit_both(data, opts.model);
      doc["fit"] = fits_to_json(fits);
      if (opts.bootstrap > 0 && data.has_raw()) {
        doc["bootstrap"] = bootstrap_to_json(bootstrap_uncertainty(data, opts.model, opts.bootstrap, cfg.seed, opts.threads));
      }
      const auto csv_fit = (dir / (stem + "_fit.csv")).string();
      write_text_file(csv_fit, fitted_curve_csv(fits.primary, data.points.front().m, data.points.back().m));
      result.outputs.push_back(csv_fit);
      out << stem << ": p = " << fits.primary.p << " +/- " << fits.primary.p_err << " (" << model_name(opts.model)
          << " order)\n";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInsufficientData) throw;
      doc["fit"] = {{"error", e.what()}};
      out << stem << ": not fitted (" << e.what() << ")\n";
    }
    const auto csv_path = (dir / (stem + ".csv")).string();
    const auto json_path = (dir / (stem + ".json")).string();
    write_text_file(csv_path, dataset_to_csv(data));
    write_text_file(json_path, doc.dump(2) + "\n");
    result.outputs.push_back(csv_path);
    result.outputs.push_back(json_path);
    result.datasets.emplace_back(stem, std::move(data));
  };

  emit("standard", cfg.standard_experiment(), json::object());
  for (std::size_t i = 0; i < cfg.interleaved.size(); ++i) {
    const auto& spec = cfg.interleaved[i];
    emit("interleaved_" + file_label(spec.label), cfg.interleaved_experiment(i),
         {{"label", spec.label}, {"target", spec.target.to_text()}});
  }

  const auto manifest_path = (dir / "manifest.json").string();
  result.manifest = {
      {"tool", kToolName},       {"version", kToolVersion}, {"seed", cfg.seed}, {"threads", opts.threads},
      {"started", started},      {"finished", utc_timestamp()},
      {"config", echo},          {"outputs", result.outputs},
  };
  write_text_file(manifest_path, result.manifest.dump(2) + "\n");
  result.outputs.push_back(manifest_path);
  out << "wrote " << result.outputs.size() << " files to " << dir.string() << "\n";
  return result;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::string standard_csv;
  std::string interleaved_csv;
  int num_qubits = 1;
  DecayModel model = DecayModel::kZeroth;
  NoiseClass noise_class = NoiseClass::kGeneral;
  std::string output;
  std::string label;
};

struct AnalyzeResult {
  FitPair standard;
  FitPair interleaved;
  GateErrorReport report;
  json document;
};

inline AnalyzeResult analyze_datasets(const DecayDataset& standard, const DecayDataset& interleaved, int num_qubits,
                                      DecayModel model, NoiseClass noise_class) {
  if (num_qubits < 1 || num_qubits > 30) throw Error(ErrorKind::kInvalidConfig, "qubit count out of range");
  AnalyzeResult r{fit_both(standard, model), fit_both(interleaved, model), {}, {}};
  const std::size_t d = std::size_t{1} << num_qubits;
  const auto& fs = r.standard.primary;
  const auto& fi = r.interleaved.primary;
  r.report = make_report(fs.p, fs.p_err, fi.p, fi.p_err, d, noise_class);
  r.document = {
      {"report", report_to_json(r.report)},
      {"standard_fit", fits_to_json(r.standard)},
      {"interleaved_fit", fits_to_json(r.interleaved)},
  };
  return r;
}

inline AnalyzeResult cmd_analyze(const AnalyzeOptions& opts, std::ostream& out) {
  const auto standard = load_dataset_csv(opts.standard_csv);
  const auto interleaved = load_dataset_csv(opts.interleaved_csv);
  auto result = analyze_datasets(standard, interleaved, opts.num_qubits, opts.model, opts.noise_class);
  const std::string label =
      opts.label.empty() ? std::filesystem::path(opts.interleaved_csv).stem().string() : opts.label;
  out << format_summary_table({{label, std::nullopt, result.report}});
  if (!opts.output.empty()) {
    write_text_file(opts.output, result.document.dump(2) + "\n");
  } else {
    out << result.document.dump(2) << "\n";
  }
  return result;
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
  double p = 1.0, p_err = 0.0;
  double p_interleaved = 1.0, p_interleaved_err = 0.0;
  std::size_t d = 2;
  NoiseClass noise_class = NoiseClass::kGeneral;
  std::string output;
};

inline GateErrorReport cmd_estimate(const EstimateOptions& opts, std::ostream& out) {
  try {
    const auto report = make_report(opts.p, opts.p_err, opts.p_interleaved, opts.p_interleaved_err, opts.d, opts.noise_class);
    out << format_summary_table({{"estimate", std::nullopt, report}});
    const auto doc = report_to_json(report);
    if (!opts.output.empty()) write_text_file(opts.output, doc.dump(2) + "\n");
    else out << doc.dump(2) << "\n";
    return report;
  } catch (const Error& e) {
    // Out-of-range numbers typed on the command line are input errors.
    if (e.kind() == ErrorKind::kOutOfRange || e.kind() == ErrorKind::kDivisionByZero) {
      throw Error(ErrorKind::kInvalidConfig, e.message());
    }
    throw;
  }
}

// ---------------------------------------------------------- miscalibration

struct MiscalibrationOptions {
  std::string config_path;
  std::string output_dir;
  std::vector<double> epsilons;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  DecayModel model = DecayModel::kZeroth;
  NoiseClass noise_class = NoiseClass::kGeneral;
};

struct MiscalibrationRow {
  double epsilon = 0.0;
  double r_theory = 0.0;
  double r_true = 0.0;
  GateErrorReport report;
};

struct MiscalibrationResult {
  FitResult standard_fit;
  std::vector<MiscalibrationRow> rows;
  json document;
};

inline std::vector<double> default_epsilons() {
  return {0.0, std::numbers::pi / 20.0, std::numbers::pi / 10.0};
}

/// Runs one standard experiment and one interleaved experiment per epsilon
/// with Lambda_C = R_axis(epsilon) after the configured base error.
inline MiscalibrationResult run_miscalibration(const RunConfig& cfg, std::vector<double> epsilons, unsigned threads,
                                               DecayModel model, NoiseClass noise_class,
                                               std::vector<std::pair<std::string, DecayDataset>>* datasets = nullptr) {
  const MiscalibrationSpec spec = cfg.miscalibration.value_or(MiscalibrationSpec{});
  if (epsilons.empty()) epsilons = spec.epsilons.empty() ? default_epsilons() : spec.epsilons;
  const int n = cfg.num_qubits;
  const SuperOperator base = build_channel(spec.base_error, n, "miscalibration.base_error");
  const CliffordElement target = parse_target(spec.target, static_cast<std::size_t>(n));
  const std::size_t d = std::size_t{1} << n;

  MiscalibrationResult result;
  const auto standard = run_experiment(cfg.standard_experiment(), threads);
  result.standard_fit = fit_decay(standard, model);
  if (datasets) datasets->emplace_back("standard", standard);

  json rows = json::array();
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    const double eps = epsilons[i];
    const SuperOperator lambda_c = compose(embed(overrotation(spec.axis, eps), n, 0), base);
    ExperimentConfig experiment = cfg.standard_experiment();
    experiment.mode = RbMode::kInterleaved;
    experiment.target = target;
    experiment.noise = cfg.noise.with_interleaved_error(lambda_c);
    const auto data = run_experiment(experiment, threads);
    const auto fit = fit_decay(data, model);
    MiscalibrationRow row;
    row.epsilon = eps;
    row.r_theory = theoretical_overrotation_error(eps);
    row.r_true = average_fidelity(lambda_c).gate_error;
    row.report = make_report(result.standard_fit.p, result.standard_fit.p_err, fit.p, fit.p_err, d, noise_class);
    rows.push_back({{"epsilon", eps},
                    {"r_th", row.r_theory},
                    {"r_true", row.r_true},
                    {"interleaved_fit", fit_to_json(fit)},
                    {"report", report_to_json(row.report)}});
    result.rows.push_back(row);
    if (datasets) datasets->emplace_back("interleaved_eps" + std::to_string(i), data);
  }
  result.document = {{"target", spec.target}, {"standard_fit", fit_to_json(result.standard_fit)}, {"rows", rows}};
  return result;
}

inline std::string format_epsilon(double eps) {
  const double ratio = eps / std::numbers::pi;
  if (eps == 0.0) return "0";
  if (std::abs(ratio) > 1e-12 && std::abs(1.0 / ratio - std::round(1.0 / ratio)) < 1e-9) {
    return "pi/" + std::to_string(static_cast<long>(std::round(1.0 / ratio)));
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", eps);
  return buf;
}

inline MiscalibrationResult cmd_miscalibration(const MiscalibrationOptions& opts, std::ostream& out) {
  const RunConfig cfg = load_run_config(opts.config_path, opts.seed);
  std::vector<std::pair<std::string, DecayDataset>> datasets;
  auto result = run_miscalibration(cfg, opts.epsilons, opts.threads, opts.model, opts.noise_class, &datasets);
  std::vector<SummaryRow> table;
  for (const auto& row : result.rows) table.push_back({format_epsilon(row.epsilon), row.r_theory, row.report});
  out << format_summary_table(table);
  result.document["config"] = config_echo(cfg);
  if (!opts.output_dir.empty()) {
    const std::filesystem::path dir(opts.output_dir);
    ensure_directory(dir);
    for (const auto& [stem, data] : datasets) write_text_file((dir / (stem + ".csv")).string(), dataset_to_csv(data));
    write_text_file((dir / "miscalibration.json").string(), result.document.dump(2) + "\n");
  }
  return result;
}

// ---------------------------------------------------------------- clifford

/// Gate name or tableau text, as accepted in configs.
inline CliffordElement parse_clifford_argument(const std::string& text, std::size_t n) {
  try {
    return parse_target(text, n);
  } catch (const Error& e) {
    throw Error(ErrorKind::kInvalidConfig, e.message());
  }
}

inline void cmd_clifford(const std::string& action, const std::vector<std::string>& operands, std::size_t n,
                         std::ostream& out) {
  auto need = [&](std::size_t count) {
    if (operands.size() != count) {
      throw Error(ErrorKind::kInvalidConfig, action + " takes " + std::to_string(count) + " operand(s)");
    }
  };
  if (action == "compose") {
    // Operands in time order: the first acts first.
    if (operands.empty()) throw Error(ErrorKind::kInvalidConfig, "compose needs at least one operand");
    CliffordElement total = CliffordElement::identity(n);
    for (const auto& op : operands) total = compose(parse_clifford_argument(op, n), total);
    out << total.to_text() << "\n";
  } else if (action == "inverse") {
    need(1);
    out << inverse(parse_clifford_argument(operands[0], n)).to_text() << "\n";
  } else if (action == "decompose") {
    need(1);
    const auto c = parse_clifford_argument(operands[0], n);
    if (c.num_qubits() != 1) throw Error(ErrorKind::kInvalidConfig, "decompose is single-qubit only");
    for (const auto& word : minimal_decompositions(c)) out << word.str() << "\n";
  } else if (action == "show") {
    need(1);
    const auto c = parse_clifford_argument(operands[0], n);
    out << c.to_text() << "\n" << c.describe();
  } else {
    throw Error(ErrorKind::kInvalidConfig, "unknown clifford action '" + action + "'");
  }
}

// ------------------------------------------------------------------ driver

/// Parses argv-style arguments (without the program name) and runs the
/// command. Returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized benchmarking simulation and interleaved gate-error analysis", std::string(kToolName)};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::optional<std::uint64_t> seed;
  unsigned threads = default_threads();
  std::string model_text = "zeroth";
  std::string noise_class_text = "general";

  auto add_common = [&](CLI::App* sub, bool seeded) {
    if (seeded) {
      sub->add_option("--seed", seed, "Master seed (overrides RB_SEED and the config)");
      sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    }
    sub->add_option("--model", model_text, "Decay model")->check(CLI::IsMember({"zeroth", "first"}));
  };

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run standard and interleaved RB experiments from a config");
  simulate->add_option("config", sim.config_path, "Config JSON")->required();
  simulate->add_option("--output", sim.output_dir, "Output directory");
  simulate->add_option("--bootstrap", sim.bootstrap, "Bootstrap resamples for fit errors (0 = off)");
  add_common(simulate, true);

  AnalyzeOptions ana;
  auto* analyze = app.add_subcommand("analyze", "Fit measured datasets and bound the interleaved gate error");
  analyze->add_option("standard", ana.standard_csv, "Standard RB CSV")->required();
  analyze->add_option("interleaved", ana.interleaved_csv, "Interleaved RB CSV")->required();
  analyze->add_option("--qubits", ana.num_qubits, "Number of qubits")->default_val(1);
  analyze->add_option("--label", ana.label, "Row label for the summary table");
  analyze->add_option("--noise-class", noise_class_text, "Declared noise class")
      ->check(CLI::IsMember({"general", "pauli", "depolarizing"}));
  analyze->add_option("--output", ana.output, "Report JSON path (stdout if omitted)");
  add_common(analyze, false);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Gate-error estimate and bound from decay parameters");
  estimate->add_option("--p", est.p, "Standard decay parameter")->required();
  estimate->add_option("--p-err", est.p_err, "Uncertainty of p");
  estimate->add_option("--pc", est.p_interleaved, "Interleaved decay parameter")->required();
  estimate->add_option("--pc-err", est.p_interleaved_err, "Uncertainty of p_c");
  estimate->add_option("--d", est.d, "Hilbert-space dimension")->default_val(2);
  estimate->add_option("--noise-class", noise_class_text, "Declared noise class")
      ->check(CLI::IsMember({"general", "pauli", "depolarizing"}));
  estimate->add_option("--output", est.output, "Report JSON path (stdout if omitted)");

  MiscalibrationOptions mis;
  auto* miscal = app.add_subcommand("miscalibration", "Interleaved RB study over over-rotation angles");
  miscal->add_option("config", mis.config_path, "Base config JSON")->required();
  miscal->add_option("--epsilons", mis.epsilons, "Over-rotation angles in radians");
  miscal->add_option("--noise-class", noise_class_text, "Declared noise class")
      ->check(CLI::IsMember({"general", "pauli", "depolarizing"}));
  miscal->add_option("--output", mis.output_dir, "Output directory for datasets and JSON");
  add_common(miscal, true);

  std::string action;
  std::vector<std::string> operands;
  std::size_t clifford_qubits = 1;
  auto* clifford = app.add_subcommand("clifford", "Compose, invert, decompose or show Clifford elements");
  clifford->add_option("action", action, "compose | inverse | decompose | show")
      ->required()
      ->check(CLI::IsMember({"compose", "inverse", "decompose", "show"}));
  clifford->add_option("operands", operands, "Gate names or tableau text");
  clifford->add_option("--qubits", clifford_qubits, "Qubit count for gate names")->default_val(1);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    const auto model = parse_model(model_text);
    const auto noise_class = parse_noise_class(noise_class_text);
    if (*simulate) {
      sim.seed = seed;
      sim.threads = threads;
      sim.model = model;
      cmd_simulate(sim, out);
    } else if (*analyze) {
      ana.model = model;
      ana.noise_class = noise_class;
      cmd_analyze(ana, out);
    } else if (*estimate) {
      est.noise_class = noise_class;
      cmd_estimate(est, out);
    } else if (*miscal) {
      mis.seed = seed;
      mis.threads = threads;
      mis.model = model;
      mis.noise_class = noise_class;
      cmd_miscalibration(mis, out);
    } else if (*clifford) {
      cmd_clifford(action, operands, clifford_qubits, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kSuccess;
}

}  // namespace irb::cli
