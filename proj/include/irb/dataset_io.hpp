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

// CSV and JSON serialization for decay datasets and fit results.

#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "irb/error.hpp"
#include "irb/fitting.hpp"
#include "irb/protocol.hpp"
#include "json.hpp"

namespace irb {

inline constexpr std::string_view kCsvHeader = "m,mean,stderr,K,mode";

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] inline void csv_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::kParseError, "line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, const char* column) {
  field = trim(field);
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    csv_error(line, std::string("bad ") + column + " value '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace detail

inline std::string dataset_to_csv(const DecayDataset& data) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& pt : data.points) {
    out += std::to_string(pt.m) + ',' + detail::format_double(pt.mean) + ',' + detail::format_double(pt.std_error) +
           ',' + std::to_string(pt.sequences) + ',' + std::string(mode_name(data.mode)) + '\n';
  }
  return out;
}

/// Parses the m,mean,stderr,K,mode schema. Raw survivals are not part of the
/// CSV, so the result never has raw data.
inline DecayDataset dataset_from_csv(std::string_view text) {
  DecayDataset data;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool mode_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = detail::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (!header_seen) {
      std::string_view header = line;
      if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
      if (header != kCsvHeader) detail::csv_error(line_no, "expected header '" + std::string(kCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    const auto fields = detail::split_fields(line);
    if (fields.size() != 5) detail::csv_error(line_no, "expected 5 fields, got " + std::to_string(fields.size()));
    DecayPoint pt;
    pt.m = detail::parse_number<std::size_t>(fields[0], line_no, "m");
    pt.mean = detail::parse_number<double>(fields[1], line_no, "mean");
    pt.std_error = detail::parse_number<double>(fields[2], line_no, "stderr");
    pt.sequences = detail::parse_number<std::size_t>(fields[3], line_no, "K");
    if (pt.std_error < 0.0) detail::csv_error(line_no, "negative stderr");
    RbMode mode{};
    try {
      mode = parse_mode(detail::trim(fields[4]));
    } catch (const Error& e) {
      detail::csv_error(line_no, e.message());
    }
    if (mode_seen && mode != data.mode) detail::csv_error(line_no, "mixed modes in one file");
    data.mode = mode;
    mode_seen = true;
    data.points.push_back(pt);
    if (nl == text.size()) break;
  }
  if (!header_seen) throw Error(ErrorKind::kParseError, "line 1: empty CSV");
  return data;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidConfig, "cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::kInvalidConfig, "write failed for '" + path + "'");
}

inline DecayDataset load_dataset_csv(const std::string& path) {
  try {
    return dataset_from_csv(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.message());
  }
}

inline nlohmann::json dataset_to_json(const DecayDataset& data, const nlohmann::json& config_echo = nullptr) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& pt : data.points) {
    points.push_back({{"m", pt.m}, {"mean", pt.mean}, {"stderr", pt.std_error}, {"K", pt.sequences}});
  }
  nlohmann::json j = {{"mode", mode_name(data.mode)}, {"points", points}};
  if (!data.raw.empty()) j["raw"] = data.raw;
  if (!config_echo.is_null()) j["config"] = config_echo;
  return j;
}

inline DecayDataset dataset_from_json(const nlohmann::json& j) {
  try {
    DecayDataset data;
    data.mode = parse_mode(j.at("mode").get<std::string>());
    for (const auto& p : j.at("points")) {
      data.points.push_back(
          {p.at("m").get<std::size_t>(), p.at("mean").get<double>(), p.at("stderr").get<double>(), p.at("K").get<std::size_t>()});
    }
    if (j.contains("raw")) data.raw = j.at("raw").get<std::vector<std::vector<double>>>();
    return data;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("dataset JSON: ") + e.what());
  }
}

inline nlohmann::json fit_to_json(const FitResult& fit) {
  nlohmann::json j = {
      {"model", model_name(fit.model)},
      {"p", fit.p},
      {"p_err", fit.p_err},
      {"A", fit.a},
      {"A_err", fit.a_err},
      {"B", fit.b},
      {"B_err", fit.b_err},
      {"residual_norm", fit.residual_norm},
      {"chi_squared", fit.chi_squared},
      {"dof", fit.dof},
      {"weighted", fit.weighted},
      {"converged", fit.converged},
      {"degenerate", fit.degenerate},
      {"warnings", fit.warnings},
  };
  if (fit.model == DecayModel::kFirst) {
    j["C"] = fit.c;
    j["C_err"] = fit.c_err;
  }
  return j;
}

inline nlohmann::json bootstrap_to_json(const BootstrapResult& b) {
  return {{"resamples", b.resamples}, {"p_err", b.p_err}, {"A_err", b.a_err}, {"B_err", b.b_err}, {"C_err", b.c_err}};
}

/// Fitted curve sampled on an integer grid covering the data, as CSV m,fit.
inline std::string fitted_curve_csv(const FitResult& fit, std::size_t m_min, std::size_t m_max) {
  std::string out = "m,fit\n";
  for (std::size_t m = m_min; m <= m_max; ++m) {
    out += std::to_string(m) + ',' + detail::format_double(fit.evaluate(static_cast<double>(m))) + '\n';
  }
  return out;
}

}  // namespace irb
