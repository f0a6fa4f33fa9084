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

// JSON run configuration: channel descriptors, target names, and the echo
// written into every output for provenance.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irb/clifford.hpp"
#include "irb/clifford_group.hpp"
#include "irb/error.hpp"
#include "irb/noise.hpp"
#include "irb/protocol.hpp"
#include "json.hpp"

namespace irb {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void config_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::kInvalidConfig, where + ": " + what);
}

inline gates::Axis parse_axis(const json& j, const std::string& where) {
  const auto s = j.get<std::string>();
  if (s == "X" || s == "x") return gates::Axis::kX;
  if (s == "Y" || s == "y") return gates::Axis::kY;
  if (s == "Z" || s == "z") return gates::Axis::kZ;
  config_error(where, "unknown axis '" + s + "'");
}

inline std::vector<int> qubit_list(const json& spec, int n, const std::string& where) {
  std::vector<int> qubits;
  if (spec.contains("qubit")) {
    qubits.push_back(spec.at("qubit").get<int>());
  } else {
    for (int q = 0; q < n; ++q) qubits.push_back(q);
  }
  for (int q : qubits) {
    if (q < 0 || q >= n) config_error(where, "qubit " + std::to_string(q) + " out of range");
  }
  return qubits;
}

inline SuperOperator on_qubits(const SuperOperator& single, int n, const std::vector<int>& qubits) {
  SuperOperator out = SuperOperator::identity(n);
  for (int q : qubits) out = compose(embed(single, n, q), out);
  return out;
}

inline SuperOperator build_channel_impl(const json& spec, int n, const std::string& where) {
  if (!spec.is_object()) config_error(where, "channel must be an object");
  const auto type = spec.at("type").get<std::string>();
  if (type == "identity") return SuperOperator::identity(n);
  if (type == "depolarizing") {
    const double p = spec.at("p").get<double>();
    if (spec.contains("qubit")) return on_qubits(depolarizing(p, 1), n, qubit_list(spec, n, where));
    return depolarizing(p, n);
  }
  if (type == "pauli") {
    const auto probs = spec.at("probabilities").get<std::vector<double>>();
    const auto single = pauli_channel(probs);
    if (single.num_qubits() == n && !spec.contains("qubit")) return single;
    if (single.num_qubits() != 1) config_error(where, "pauli probabilities must cover 1 or n qubits");
    return on_qubits(single, n, qubit_list(spec, n, where));
  }
  if (type == "overrotation") {
    const auto single = overrotation(parse_axis(spec.at("axis"), where), spec.at("epsilon").get<double>());
    return on_qubits(single, n, qubit_list(spec, n, where));
  }
  if (type == "damping") {
    const auto single = damping(spec.at("T1").get<double>(), spec.at("T2").get<double>(), spec.at("t_gate").get<double>());
    return on_qubits(single, n, qubit_list(spec, n, where));
  }
  if (type == "compose") {
    // Listed in the order they act.
    SuperOperator out = SuperOperator::identity(n);
    const auto& list = spec.at("channels");
    for (std::size_t i = 0; i < list.size(); ++i) {
      out = compose(build_channel_impl(list[i], n, where + ".channels[" + std::to_string(i) + "]"), out);
    }
    return out;
  }
  if (type == "ptm") {
    auto s = superoperator_from_json(spec);
    if (s.num_qubits() != n) config_error(where, "ptm dimension does not match n");
    require_trace_preserving(s);
    return s;
  }
  config_error(where, "unknown channel type '" + type + "'");
}

}  // namespace detail

/// Builds an n-qubit channel from a descriptor such as
/// {"type": "depolarizing", "p": 0.984}. Single-qubit channel types act on
/// "qubit" when given and independently on every qubit otherwise.
inline SuperOperator build_channel(const json& spec, int n, const std::string& where = "channel") {
  try {
    return detail::build_channel_impl(spec, n, where);
  } catch (const json::exception& e) {
    detail::config_error(where, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInvalidConfig) throw;
    detail::config_error(where, e.message());
  }
}

/// Resolves a gate name (I, X90, X-90, X180, Y90, Y-90, Y180, Z90, Z-90, Z180,
/// X, Y, Z, H, S, CNOT, CZ) on the given qubits, or tableau text "n:rows:signs".
inline CliffordElement parse_target(std::string_view name, std::size_t n, std::vector<std::size_t> qubits = {}) {
  if (name.find(':') != std::string_view::npos) {
    auto c = CliffordElement::from_text(name);
    if (c.num_qubits() != n) throw Error(ErrorKind::kInvalidConfig, "target tableau has the wrong qubit count");
    return c;
  }
  const bool two_qubit = name == "CNOT" || name == "CX" || name == "CZ";
  if (qubits.empty()) {
    qubits = two_qubit ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{0};
  }
  if (qubits.size() != (two_qubit ? 2U : 1U)) throw Error(ErrorKind::kInvalidConfig, "wrong number of qubits for " + std::string(name));
  for (auto q : qubits) {
    if (q >= n) throw Error(ErrorKind::kInvalidConfig, "target qubit out of range");
  }
  if (two_qubit && qubits[0] == qubits[1]) throw Error(ErrorKind::kInvalidConfig, "two-qubit gate needs distinct qubits");
  const std::size_t q = qubits[0];
  if (name == "I") return CliffordElement::identity(n);
  if (name == "H") return gates::hadamard(n, q);
  if (name == "S") return gates::phase(n, q);
  if (name == "CNOT" || name == "CX") return gates::cnot(n, qubits[0], qubits[1]);
  if (name == "CZ") return gates::cz(n, qubits[0], qubits[1]);
  if (name.size() >= 1 && (name[0] == 'X' || name[0] == 'Y' || name[0] == 'Z')) {
    const auto axis = name[0] == 'X' ? gates::Axis::kX : name[0] == 'Y' ? gates::Axis::kY : gates::Axis::kZ;
    const auto rest = name.substr(1);
    int turns = 0;
    if (rest.empty() || rest == "180") turns = 2;
    else if (rest == "90") turns = 1;
    else if (rest == "-90" || rest == "m90") turns = -1;
    else throw Error(ErrorKind::kInvalidConfig, "unknown gate '" + std::string(name) + "'");
    return gates::rotation(n, q, axis, turns);
  }
  throw Error(ErrorKind::kInvalidConfig, "unknown gate '" + std::string(name) + "'");
}

struct InterleavedSpec {
  std::string label;
  CliffordElement target{1};
  SuperOperator error = SuperOperator::identity(1);
  json target_echo;
  json error_echo;
};

struct MiscalibrationSpec {
  std::string target = "X90";
  gates::Axis axis = gates::Axis::kX;
  std::vector<double> epsilons;
  json base_error = {{"type", "identity"}};
};

/// Parsed run configuration. One standard experiment plus one interleaved
/// experiment per `interleaved` entry share lengths, K, seed and noise.
struct RunConfig {
  int num_qubits = 1;
  std::vector<std::size_t> lengths;
  std::size_t sequences = 1;
  std::uint64_t seed = 0;
  bool retain_raw = true;
  NoiseModel noise{1};
  std::vector<InterleavedSpec> interleaved;
  std::optional<MiscalibrationSpec> miscalibration;
  json noise_echo = json::object();

  ExperimentConfig standard_experiment() const {
    ExperimentConfig c;
    c.num_qubits = num_qubits;
    c.lengths = lengths;
    c.sequences = sequences;
    c.mode = RbMode::kStandard;
    c.noise = noise;
    c.seed = seed;
    c.retain_raw = retain_raw;
    return c;
  }

  ExperimentConfig interleaved_experiment(std::size_t i) const {
    ExperimentConfig c = standard_experiment();
    c.mode = RbMode::kInterleaved;
    c.target = interleaved.at(i).target;
    c.noise = noise.with_interleaved_error(interleaved.at(i).error);
    return c;
  }
};

namespace detail {

inline std::vector<std::size_t> parse_lengths(const json& j) {
  if (j.is_array()) return j.get<std::vector<std::size_t>>();
  if (j.is_object()) {
    const auto step = j.value("step", std::size_t{1});
    if (step == 0) config_error("lengths", "step must be positive");
    return length_range(j.at("start").get<std::size_t>(), j.at("stop").get<std::size_t>(), step);
  }
  config_error("lengths", "expected an array or {start, stop, step}");
}

inline json target_echo(const json& entry) {
  json t = {{"target", entry.at("target")}};
  if (entry.contains("qubits")) t["qubits"] = entry.at("qubits");
  return t;
}

}  // namespace detail

/// RB_SEED parsed as an unsigned 64-bit integer, if set.
inline std::optional<std::uint64_t> seed_from_environment() {
  const char* env = std::getenv("RB_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used, 10);
    if (used != std::string_view(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kInvalidConfig, "RB_SEED must be an unsigned integer");
  }
}

inline RunConfig parse_run_config(const json& j) {
  try {
    if (!j.is_object()) detail::config_error("config", "top level must be an object");
    RunConfig cfg;
    cfg.num_qubits = j.value("n", 1);
    if (cfg.num_qubits < 1) detail::config_error("n", "must be >= 1");
    const int n = cfg.num_qubits;
    cfg.lengths = detail::parse_lengths(j.at("lengths"));
    cfg.sequences = j.at("K").get<std::size_t>();
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.retain_raw = j.value("retain_raw", true);

    const json noise = j.value("noise", json::object());
    json gate = noise.value("gate", json{{"type", "identity"}});
    NoiseModel model = NoiseModel::uniform(build_channel(gate, n, "noise.gate"));
    json echo = {{"gate", gate}};
    if (noise.contains("per_gate")) {
      const auto& list = noise.at("per_gate");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "noise.per_gate[" + std::to_string(i) + "]";
        const auto qubits = list[i].value("qubits", std::vector<std::size_t>{});
        const auto gate_c = parse_target(list[i].at("clifford").get<std::string>(), static_cast<std::size_t>(n), qubits);
        model = model.with_gate_error(gate_c, build_channel(list[i].at("channel"), n, where + ".channel"));
      }
      echo["per_gate"] = list;
    }
    if (noise.contains("spam")) {
      const auto& spam = noise.at("spam");
      const json prep = spam.value("prep", json{{"type", "identity"}});
      const json meas = spam.value("meas", json{{"type", "identity"}});
      const auto ideal = PauliVector::basis_state(n, 0);
      model = model.with_spam(
          spam_pair(build_channel(prep, n, "noise.spam.prep"), build_channel(meas, n, "noise.spam.meas"), ideal, ideal));
      echo["spam"] = {{"prep", prep}, {"meas", meas}};
    }
    cfg.noise = std::move(model);
    cfg.noise_echo = std::move(echo);

    if (j.contains("interleaved")) {
      const auto& list = j.at("interleaved");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "interleaved[" + std::to_string(i) + "]";
        InterleavedSpec spec;
        const auto name = list[i].at("target").get<std::string>();
        spec.label = list[i].value("label", name);
        spec.target = parse_target(name, static_cast<std::size_t>(n), list[i].value("qubits", std::vector<std::size_t>{}));
        spec.error_echo = list[i].value("error", json{{"type", "identity"}});
        spec.error = build_channel(spec.error_echo, n, where + ".error");
        spec.target_echo = detail::target_echo(list[i]);
        cfg.interleaved.push_back(std::move(spec));
      }
    }

    if (j.contains("miscalibration")) {
      const auto& m = j.at("miscalibration");
      MiscalibrationSpec spec;
      spec.target = m.value("target", std::string("X90"));
      spec.axis = detail::parse_axis(m.value("axis", json("X")), "miscalibration.axis");
      spec.epsilons = m.value("epsilons", std::vector<double>{});
      spec.base_error = m.value("base_error", json{{"type", "identity"}});
      build_channel(spec.base_error, n, "miscalibration.base_error");
      parse_target(spec.target, static_cast<std::size_t>(n));
      cfg.miscalibration = std::move(spec);
    }

    cfg.standard_experiment().validate();
    for (std::size_t i = 0; i < cfg.interleaved.size(); ++i) cfg.interleaved_experiment(i).validate();
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidConfig, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInvalidConfig) throw;
    throw Error(ErrorKind::kInvalidConfig, std::string("config: ") + e.message());
  }
}

inline RunConfig parse_run_config_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParseError, std::string("config JSON: ") + e.what());
  }
  return parse_run_config(j);
}

/// Normalized config: lengths expanded, seed resolved, defaults filled in.
/// Parsing the echo reproduces identical experiment configs.
inline json config_echo(const RunConfig& cfg) {
  json j = {
      {"n", cfg.num_qubits},
      {"lengths", cfg.lengths},
      {"K", cfg.sequences},
      {"seed", cfg.seed},
      {"retain_raw", cfg.retain_raw},
      {"noise", cfg.noise_echo},
  };
  json list = json::array();
  for (const auto& spec : cfg.interleaved) {
    json entry = spec.target_echo;
    entry["label"] = spec.label;
    entry["error"] = spec.error_echo;
    list.push_back(std::move(entry));
  }
  j["interleaved"] = std::move(list);
  if (cfg.miscalibration) {
    const auto& m = *cfg.miscalibration;
    const char* axis = m.axis == gates::Axis::kX ? "X" : m.axis == gates::Axis::kY ? "Y" : "Z";
    j["miscalibration"] = {{"target", m.target}, {"axis", axis}, {"epsilons", m.epsilons}, {"base_error", m.base_error}};
  }
  return j;
}

}  // namespace irb
