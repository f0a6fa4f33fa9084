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

// Sequence synthesis and noisy simulation for standard and interleaved
// randomized benchmarking.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irb/clifford.hpp"
#include "irb/clifford_group.hpp"
#include "irb/noise.hpp"
#include "irb/parallel.hpp"
#include "irb/pauli.hpp"

namespace irb {

using Rng = std::mt19937_64;

enum class RbMode { kStandard, kInterleaved };

inline std::string_view mode_name(RbMode mode) { return mode == RbMode::kStandard ? "standard" : "interleaved"; }

inline RbMode parse_mode(std::string_view text) {
  if (text == "standard") return RbMode::kStandard;
  if (text == "interleaved") return RbMode::kInterleaved;
  throw Error(ErrorKind::kParseError, "unknown mode '" + std::string(text) + "'");
}

struct ExperimentConfig {
  int num_qubits = 1;
  /// Sequence lengths m, counted in random gates only.
  std::vector<std::size_t> lengths;
  /// K, sequences per length.
  std::size_t sequences = 1;
  RbMode mode = RbMode::kStandard;
  std::optional<CliffordElement> target;
  NoiseModel noise{1};
  std::uint64_t seed = 0;
  bool retain_raw = true;

  void validate() const {
    if (num_qubits < 1) throw Error(ErrorKind::kInvalidConfig, "n must be >= 1");
    if (noise.num_qubits() != num_qubits) throw Error(ErrorKind::kInvalidConfig, "noise model qubit count differs from n");
    if (lengths.empty()) throw Error(ErrorKind::kInvalidConfig, "no sequence lengths");
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      if (lengths[i] < 1) throw Error(ErrorKind::kInvalidConfig, "sequence lengths must be >= 1");
      if (i > 0 && lengths[i] <= lengths[i - 1]) {
        throw Error(ErrorKind::kInvalidConfig, "sequence lengths must be strictly increasing");
      }
    }
    if (sequences < 1) throw Error(ErrorKind::kInvalidConfig, "K must be >= 1");
    if (mode == RbMode::kInterleaved) {
      if (!target) throw Error(ErrorKind::kInvalidConfig, "interleaved mode needs a target Clifford");
      if (static_cast<int>(target->num_qubits()) != num_qubits) {
        throw Error(ErrorKind::kInvalidConfig, "target Clifford qubit count differs from n");
      }
    }
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct DecayPoint {
  std::size_t m = 0;
  double mean = 0.0;
  /// Sample standard deviation over the K sequences divided by sqrt(K).
  double std_error = 0.0;
  std::size_t sequences = 0;

  friend bool operator==(const DecayPoint&, const DecayPoint&) = default;
};

struct DecayDataset {
  RbMode mode = RbMode::kStandard;
  std::vector<DecayPoint> points;
  /// Per-sequence survivals aligned with `points`; empty unless retained.
  std::vector<std::vector<double>> raw;

  bool has_raw() const {
    if (raw.size() != points.size() || points.empty()) return false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (raw[i].size() != points[i].sequences || raw[i].empty()) return false;
    }
    return true;
  }

  friend bool operator==(const DecayDataset&, const DecayDataset&) = default;
};

/// Mean and standard error of one length's survivals.
inline DecayPoint summarize(std::size_t m, std::span<const double> survivals) {
  DecayPoint point{m, 0.0, 0.0, survivals.size()};
  if (survivals.empty()) return point;
  const double k = static_cast<double>(survivals.size());
  point.mean = compensated_sum(survivals) / k;
  if (survivals.size() > 1) {
    std::vector<double> squares;
    squares.reserve(survivals.size());
    for (double s : survivals) squares.push_back((s - point.mean) * (s - point.mean));
    point.std_error = std::sqrt(compensated_sum(squares) / (k - 1.0) / k);
  }
  return point;
}

/// Per-sequence stream: independent of scheduling and thread count.
inline std::uint64_t sequence_seed(std::uint64_t master_seed, RbMode mode, std::size_t m, std::size_t k) {
  std::uint64_t h = mix_seed(master_seed, mode == RbMode::kStandard ? 0x5354ULL : 0x494eULL);
  h = mix_seed(h, m);
  return mix_seed(h, k);
}

/// m uniformly random Cliffords followed by the inverse of their product.
template <typename R>
std::vector<CliffordElement> generate_standard_sequence(std::size_t m, std::size_t n, R& rng) {
  if (m < 1) throw Error(ErrorKind::kOutOfRange, "sequence length must be >= 1");
  std::vector<CliffordElement> gates;
  gates.reserve(m + 1);
  CliffordElement total = CliffordElement::identity(n);
  for (std::size_t i = 0; i < m; ++i) {
    gates.push_back(sample_uniform(n, rng));
    total = compose(gates.back(), total);
  }
  gates.push_back(inverse(total));
  return gates;
}

/// Random gates at even positions, the target after each, and a final
/// inverse of all 2m preceding gates: length 2m + 1.
template <typename R>
std::vector<CliffordElement> generate_interleaved_sequence(std::size_t m, const CliffordElement& target, std::size_t n,
                                                           R& rng) {
  if (m < 1) throw Error(ErrorKind::kOutOfRange, "sequence length must be >= 1");
  if (target.num_qubits() != n) throw Error(ErrorKind::kDimensionMismatch, "target qubit count differs from n");
  std::vector<CliffordElement> gates;
  gates.reserve(2 * m + 1);
  CliffordElement total = CliffordElement::identity(n);
  for (std::size_t i = 0; i < m; ++i) {
    gates.push_back(sample_uniform(n, rng));
    total = compose(target, compose(gates.back(), total));
    gates.push_back(target);
  }
  gates.push_back(inverse(total));
  return gates;
}

namespace detail {

/// Signed permutation for a gate: shared table entry for n <= 2, computed
/// otherwise.
class PermutationLookup {
 public:
  explicit PermutationLookup(std::size_t n) : table_(n <= 2 ? &clifford_table(n) : nullptr) {}

  const PauliPermutation& operator()(const CliffordElement& gate) {
    if (table_ != nullptr) {
      if (auto index = table_->find(gate)) return table_->permutation(*index);
    }
    scratch_ = pauli_permutation(gate);
    return scratch_;
  }

 private:
  const CliffordGroupTable* table_;
  PauliPermutation scratch_;
};

}  // namespace detail

/// Survival probability Tr[E S(rho)] of one sequence. Standard mode applies
/// Lambda_i after every gate C_i. Interleaved mode expects
/// (c_1, C, c_2, C, ..., c_m, C, c_inv) and applies Lambda_C followed by the
/// ideal C at each target slot; the final inverse carries its own error.
inline double simulate_sequence(std::span<const CliffordElement> gates, const NoiseModel& noise, bool interleaved) {
  const int n = noise.num_qubits();
  if (n > kMaxDenseQubits) {
    throw Error(ErrorKind::kUnsupportedDimension, "channel simulation limited to " + std::to_string(kMaxDenseQubits) +
                                                      " qubits");
  }
  if (gates.empty()) throw Error(ErrorKind::kOutOfRange, "empty sequence");
  if (interleaved && gates.size() % 2 == 0) {
    throw Error(ErrorKind::kOutOfRange, "interleaved sequences have odd length 2m+1");
  }
  detail::PermutationLookup lookup(static_cast<std::size_t>(n));
  RealVector state = noise.spam().prep.coefficients();
  RealVector scratch(state.size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const CliffordElement& gate = gates[i];
    if (static_cast<int>(gate.num_qubits()) != n) throw Error(ErrorKind::kDimensionMismatch, "gate qubit count");
    const bool target_slot = interleaved && i % 2 == 1 && i + 1 < gates.size();
    if (target_slot) {
      scratch.noalias() = noise.interleaved_error().matrix() * state;
      lookup(gate).apply(scratch, state);
    } else {
      lookup(gate).apply(state, scratch);
      state.noalias() = noise.gate_error(gate).matrix() * scratch;
    }
  }
  return std::clamp(noise.spam().meas.coefficients().dot(state), 0.0, 1.0);
}

/// Exact sequence-averaged survival under gate-independent noise:
/// Tr[E Lambda W(Lambda')^m (rho)] with Lambda' = Lambda (standard) or
/// Lambda_C Lambda (interleaved) and W the Clifford twirl. n <= 2.
inline double gate_independent_prediction(const NoiseModel& noise, std::size_t m, RbMode mode) {
  if (!noise.gate_independent()) throw Error(ErrorKind::kInvalidConfig, "prediction needs gate-independent noise");
  const auto& table = clifford_table(static_cast<std::size_t>(noise.num_qubits()));
  const auto group = table.superoperators();
  const SuperOperator& lambda = noise.uniform_error();
  const SuperOperator step =
      twirl(mode == RbMode::kStandard ? lambda : compose(noise.interleaved_error(), lambda), std::span(group));
  RealVector state = noise.spam().prep.coefficients();
  for (std::size_t i = 0; i < m; ++i) state = step.matrix() * state;
  state = lambda.matrix() * state;
  return noise.spam().meas.coefficients().dot(state);
}

/// Runs K sequences per length and aggregates survivals in a fixed order, so
/// the result is bit-identical for any thread count.
inline DecayDataset run_experiment(const ExperimentConfig& config, unsigned threads = 1) {
  config.validate();
  if (config.num_qubits > kMaxDenseQubits) {
    throw Error(ErrorKind::kUnsupportedDimension, "channel simulation limited to " + std::to_string(kMaxDenseQubits) +
                                                      " qubits");
  }
  const std::size_t k_count = config.sequences;
  const std::size_t cells = config.lengths.size() * k_count;
  const auto n = static_cast<std::size_t>(config.num_qubits);
  const bool interleaved = config.mode == RbMode::kInterleaved;
  std::vector<double> survivals(cells);
  parallel_for(cells, threads, [&](std::size_t cell) {
    const std::size_t m = config.lengths[cell / k_count];
    Rng rng(sequence_seed(config.seed, config.mode, m, cell % k_count));
    const auto gates = interleaved ? generate_interleaved_sequence(m, *config.target, n, rng)
                                   : generate_standard_sequence(m, n, rng);
    survivals[cell] = simulate_sequence(gates, config.noise, interleaved);
  });

  DecayDataset data;
  data.mode = config.mode;
  for (std::size_t i = 0; i < config.lengths.size(); ++i) {
    std::span<const double> values(survivals.data() + i * k_count, k_count);
    data.points.push_back(summarize(config.lengths[i], values));
    if (config.retain_raw) data.raw.emplace_back(values.begin(), values.end());
  }
  return data;
}

/// Inclusive arithmetic range of lengths, e.g. (2, 96, 2).
inline std::vector<std::size_t> length_range(std::size_t start, std::size_t stop, std::size_t step) {
  if (step == 0 || start < 1 || stop < start) throw Error(ErrorKind::kInvalidConfig, "invalid length range");
  std::vector<std::size_t> out;
  for (std::size_t m = start; m <= stop; m += step) out.push_back(m);
  return out;
}

}  // namespace irb
