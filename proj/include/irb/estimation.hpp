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

// Gate-error estimate and bounds from the standard and interleaved decay
// parameters.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irb/error.hpp"
#include "irb/noise.hpp"
#include "json.hpp"

namespace irb {

/// What the caller asserts about the average random-gate error. Only
/// kDepolarizing licenses E = 0.
enum class NoiseClass { kGeneral, kPauli, kDepolarizing };

inline std::string_view noise_class_name(NoiseClass c) {
  switch (c) {
    case NoiseClass::kGeneral: return "general";
    case NoiseClass::kPauli: return "pauli";
    case NoiseClass::kDepolarizing: return "depolarizing";
  }
  return "general";
}

inline NoiseClass parse_noise_class(std::string_view text) {
  if (text == "general") return NoiseClass::kGeneral;
  if (text == "pauli") return NoiseClass::kPauli;
  if (text == "depolarizing") return NoiseClass::kDepolarizing;
  throw Error(ErrorKind::kParseError, "unknown noise class '" + std::string(text) + "'");
}

inline constexpr double kDecayParameterFloor = 1e-6;

/// r = (d - 1)(1 - p) / d.
inline double average_clifford_error(double p, std::size_t d) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::kOutOfRange, "p must lie in [0, 1]");
  if (d < 2) throw Error(ErrorKind::kOutOfRange, "dimension must be >= 2");
  const double dd = static_cast<double>(d);
  return (dd - 1.0) * (1.0 - p) / dd;
}

/// r_est = (d - 1)(1 - p_c / p) / d. Raw value; may be negative.
inline double interleaved_gate_error(double p, double p_interleaved, std::size_t d) {
  if (!(p > kDecayParameterFloor)) throw Error(ErrorKind::kDivisionByZero, "p at or below the numerical floor 1e-6");
  if (d < 2) throw Error(ErrorKind::kOutOfRange, "dimension must be >= 2");
  const double dd = static_cast<double>(d);
  return (dd - 1.0) * (1.0 - p_interleaved / p) / dd;
}

/// Half-width E of the interval guaranteed to contain r_C.
inline double error_bound(double p, double p_interleaved, std::size_t d, NoiseClass noise_class) {
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorKind::kOutOfRange, "p must lie in (0, 1]");
  if (!(p_interleaved >= 0.0 && p_interleaved <= 1.0)) throw Error(ErrorKind::kOutOfRange, "p_c must lie in [0, 1]");
  if (d < 2) throw Error(ErrorKind::kOutOfRange, "dimension must be >= 2");
  if (noise_class == NoiseClass::kDepolarizing) return 0.0;
  const double dd = static_cast<double>(d);
  const double d2 = dd * dd;
  const double first = (dd - 1.0) * (std::abs(p - p_interleaved / p) + (1.0 - p)) / dd;
  double second = 2.0 * (d2 - 1.0) * (1.0 - p) / (p * d2);
  if (noise_class == NoiseClass::kGeneral) second += 4.0 * std::sqrt(1.0 - p) * std::sqrt(d2 - 1.0) / p;
  return std::min(first, second);
}

/// 2 (1 - cos^2(eps / 2)) / 3: average error of an over-rotation by eps.
inline double theoretical_overrotation_error(double epsilon) {
  const double c = std::cos(epsilon / 2.0);
  return 2.0 * (1.0 - c * c) / 3.0;
}

/// Delta-method standard error of r_est, treating p and p_c as independent.
inline double propagate_uncertainty(double p, double p_err, double p_interleaved, double p_interleaved_err,
                                    std::size_t d) {
  if (!(p > kDecayParameterFloor)) throw Error(ErrorKind::kDivisionByZero, "p at or below the numerical floor 1e-6");
  const double scale = (static_cast<double>(d) - 1.0) / static_cast<double>(d);
  const double d_dp = scale * p_interleaved / (p * p);
  const double d_dpc = -scale / p;
  return std::hypot(d_dp * p_err, d_dpc * p_interleaved_err);
}

struct GateErrorReport {
  double p = 1.0, p_err = 0.0;
  double p_interleaved = 1.0, p_interleaved_err = 0.0;
  std::size_t d = 2;
  double r = 0.0;
  double r_est = 0.0;
  double r_est_err = 0.0;
  double bound = 0.0;
  /// Clamped to [0, (d - 1)/d].
  double lower = 0.0, upper = 0.0;
  double raw_lower = 0.0, raw_upper = 0.0;
  NoiseClass noise_class = NoiseClass::kGeneral;
  std::optional<GammaDiagnostic> gamma;

  bool contains(double r_true) const { return r_true >= lower && r_true <= upper; }
};

inline GateErrorReport make_report(double p, double p_err, double p_interleaved, double p_interleaved_err,
                                   std::size_t d, NoiseClass noise_class = NoiseClass::kGeneral) {
  GateErrorReport rep;
  rep.p = p;
  rep.p_err = p_err;
  rep.p_interleaved = p_interleaved;
  rep.p_interleaved_err = p_interleaved_err;
  rep.d = d;
  rep.noise_class = noise_class;
  rep.r = average_clifford_error(std::clamp(p, 0.0, 1.0), d);
  rep.r_est = interleaved_gate_error(p, p_interleaved, d);
  rep.r_est_err = propagate_uncertainty(p, p_err, p_interleaved, p_interleaved_err, d);
  rep.bound = error_bound(p, std::clamp(p_interleaved, 0.0, 1.0), d, noise_class);
  rep.raw_lower = rep.r_est - rep.bound;
  rep.raw_upper = rep.r_est + rep.bound;
  const double ceiling = (static_cast<double>(d) - 1.0) / static_cast<double>(d);
  rep.lower = std::clamp(rep.raw_lower, 0.0, ceiling);
  rep.upper = std::clamp(rep.raw_upper, 0.0, ceiling);
  return rep;
}

inline nlohmann::json gamma_to_json(const GammaDiagnostic& g) {
  nlohmann::json j = {{"gamma", g.gamma}, {"advisory", true}};
  j["max_valid_m"] = g.max_valid_m ? nlohmann::json(*g.max_valid_m) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json report_to_json(const GateErrorReport& rep) {
  nlohmann::json j = {
      {"p", rep.p},
      {"p_err", rep.p_err},
      {"p_interleaved", rep.p_interleaved},
      {"p_interleaved_err", rep.p_interleaved_err},
      {"d", rep.d},
      {"r", rep.r},
      {"r_est", rep.r_est},
      {"r_est_err", rep.r_est_err},
      {"E", rep.bound},
      {"interval", {rep.lower, rep.upper}},
      {"raw_interval", {rep.raw_lower, rep.raw_upper}},
      {"noise_class", noise_class_name(rep.noise_class)},
  };
  j["gamma"] = rep.gamma ? gamma_to_json(*rep.gamma) : nlohmann::json(nullptr);
  return j;
}

/// One line of the miscalibration-style summary table.
struct SummaryRow {
  std::string label;
  std::optional<double> r_theory;
  GateErrorReport report;
};

inline std::string format_summary_table(const std::vector<SummaryRow>& rows) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %8s %20s %20s\n", "gate/eps", "r_th", "r_est", "bound");
  out += line;
  for (const auto& row : rows) {
    char theory[32] = "-";
    if (row.r_theory) std::snprintf(theory, sizeof theory, "%.3f", *row.r_theory);
    char est[48];
    std::snprintf(est, sizeof est, "%.3f +/- %.3f", row.report.r_est, row.report.r_est_err);
    char bound[48];
    std::snprintf(bound, sizeof bound, "[%.3f, %.3f]", row.report.lower, row.report.upper);
    std::snprintf(line, sizeof line, "%-14s %8s %20s %20s\n", row.label.c_str(), theory, est, bound);
    out += line;
  }
  return out;
}

}  // namespace irb
