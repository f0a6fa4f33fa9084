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

#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "irb/clifford.hpp"
#include "irb/pauli.hpp"

namespace irb {

/// Exhaustive Clifford group for n <= 2 with index lookup and cached signed
/// permutations. Built by breadth-first closure from {H, S} (plus CNOT for
/// n = 2); element 0 is the identity and the order is deterministic.
class CliffordGroupTable {
 public:
  explicit CliffordGroupTable(std::size_t n) : num_qubits_(n) {
    if (n < 1 || n > 2) throw Error(ErrorKind::kUnsupportedDimension, "enumeration supports n = 1 or 2");
    std::vector<CliffordElement> generators;
    for (std::size_t q = 0; q < n; ++q) {
      generators.push_back(gates::hadamard(n, q));
      generators.push_back(gates::phase(n, q));
    }
    if (n == 2) generators.push_back(gates::cnot(2, 0, 1));

    add(CliffordElement::identity(n));
    for (std::size_t head = 0; head < elements_.size(); ++head) {
      for (const auto& g : generators) {
        CliffordElement next = compose(g, elements_[head]);
        if (!index_.contains(next)) add(std::move(next));
      }
    }
    permutations_.reserve(elements_.size());
    for (const auto& e : elements_) permutations_.push_back(pauli_permutation(e));
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<CliffordElement>& elements() const { return elements_; }
  const CliffordElement& operator[](std::size_t i) const { return elements_[i]; }
  const PauliPermutation& permutation(std::size_t i) const { return permutations_[i]; }

  std::optional<std::size_t> find(const CliffordElement& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<SuperOperator> superoperators() const {
    std::vector<SuperOperator> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) out.push_back(to_superoperator(e));
    return out;
  }

 private:
  void add(CliffordElement c) {
    index_.emplace(c, elements_.size());
    elements_.push_back(std::move(c));
  }

  std::size_t num_qubits_;
  std::vector<CliffordElement> elements_;
  std::unordered_map<CliffordElement, std::size_t> index_;
  std::vector<PauliPermutation> permutations_;
};

/// Shared read-only tables, built on first use.
inline const CliffordGroupTable& clifford_table(std::size_t n) {
  if (n == 1) {
    static const CliffordGroupTable table(1);
    return table;
  }
  if (n == 2) {
    static const CliffordGroupTable table(2);
    return table;
  }
  throw Error(ErrorKind::kUnsupportedDimension, "enumeration supports n = 1 or 2, got " + std::to_string(n));
}

inline std::vector<CliffordElement> enumerate_cliffords(std::size_t n) { return clifford_table(n).elements(); }

/// Uniform over Clif_n modulo phase: table lookup for n <= 2, the symplectic
/// construction otherwise.
template <typename Rng>
CliffordElement sample_uniform(std::size_t n, Rng& rng) {
  if (n == 0) throw Error(ErrorKind::kUnsupportedDimension, "n must be >= 1");
  if (n <= 2) {
    const auto& table = clifford_table(n);
    std::uniform_int_distribution<std::size_t> pick(0, table.size() - 1);
    return table[pick(rng)];
  }
  return random_clifford(n, rng);
}

/// Twirl over a list of Cliffords (normally the full group).
inline SuperOperator twirl(const SuperOperator& a, std::span<const CliffordElement> group) {
  std::vector<SuperOperator> channels;
  channels.reserve(group.size());
  for (const auto& c : group) channels.push_back(to_superoperator(c));
  return twirl(a, std::span<const SuperOperator>(channels));
}

// ---------------------------------------------------------------------------
// Single-qubit physical pulses.

enum class Pulse { kI, kX90, kXm90, kX180, kY90, kYm90, kY180 };

inline constexpr std::array<Pulse, 7> kPulseSet = {Pulse::kI,   Pulse::kX90,  Pulse::kXm90, Pulse::kX180,
                                                   Pulse::kY90, Pulse::kYm90, Pulse::kY180};

inline std::string_view pulse_name(Pulse p) {
  switch (p) {
    case Pulse::kI: return "I";
    case Pulse::kX90: return "X90";
    case Pulse::kXm90: return "X-90";
    case Pulse::kX180: return "X180";
    case Pulse::kY90: return "Y90";
    case Pulse::kYm90: return "Y-90";
    case Pulse::kY180: return "Y180";
  }
  return "?";
}

inline CliffordElement pulse_clifford(Pulse p) {
  using gates::Axis;
  switch (p) {
    case Pulse::kI: return CliffordElement::identity(1);
    case Pulse::kX90: return gates::rotation(1, 0, Axis::kX, 1);
    case Pulse::kXm90: return gates::rotation(1, 0, Axis::kX, -1);
    case Pulse::kX180: return gates::rotation(1, 0, Axis::kX, 2);
    case Pulse::kY90: return gates::rotation(1, 0, Axis::kY, 1);
    case Pulse::kYm90: return gates::rotation(1, 0, Axis::kY, -1);
    case Pulse::kY180: return gates::rotation(1, 0, Axis::kY, 2);
  }
  return CliffordElement::identity(1);
}

/// exp(-i theta sigma / 2) for the pulse's axis and angle.
inline ComplexMatrix pulse_unitary(Pulse p) {
  double angle = 0.0;
  int axis = 0;
  switch (p) {
    case Pulse::kI: break;
    case Pulse::kX90: axis = 1, angle = M_PI / 2; break;
    case Pulse::kXm90: axis = 1, angle = -M_PI / 2; break;
    case Pulse::kX180: axis = 1, angle = M_PI; break;
    case Pulse::kY90: axis = 2, angle = M_PI / 2; break;
    case Pulse::kYm90: axis = 2, angle = -M_PI / 2; break;
    case Pulse::kY180: axis = 2, angle = M_PI; break;
  }
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  return std::cos(angle / 2) * id - std::complex<double>(0, std::sin(angle / 2)) * detail::single_pauli(axis);
}

/// Pulses in time order; pulses.front() is applied first.
struct PulseSequence {
  std::vector<Pulse> pulses;

  std::size_t size() const { return pulses.size(); }

  CliffordElement clifford() const {
    CliffordElement c = CliffordElement::identity(1);
    for (Pulse p : pulses) c = compose(pulse_clifford(p), c);
    return c;
  }

  ComplexMatrix unitary() const {
    ComplexMatrix u = ComplexMatrix::Identity(2, 2);
    for (Pulse p : pulses) u = pulse_unitary(p) * u;
    return u;
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < pulses.size(); ++i) {
      if (i > 0) out += ' ';
      out += pulse_name(pulses[i]);
    }
    return out;
  }

  friend bool operator==(const PulseSequence&, const PulseSequence&) = default;
};

/// All minimal-length words over the pulse set for every single-qubit
/// Clifford, found by breadth-first search. Word length 1 includes the bare
/// identity pulse, so the identity decomposes as [I].
class MinimalWordTable {
 public:
  MinimalWordTable() {
    const auto& group = clifford_table(1);
    words_.resize(group.size());
    std::vector<PulseSequence> frontier = {PulseSequence{}};
    std::size_t found = 0;
    for (std::size_t length = 1; found < group.size(); ++length) {
      std::vector<PulseSequence> next;
      std::vector<std::size_t> newly;
      for (const auto& prefix : frontier) {
        for (Pulse p : kPulseSet) {
          PulseSequence word = prefix;
          word.pulses.push_back(p);
          const std::size_t index = *group.find(word.clifford());
          if (words_[index].empty() || words_[index].front().size() == length) {
            if (words_[index].empty()) newly.push_back(index);
            words_[index].push_back(word);
          }
          next.push_back(std::move(word));
        }
      }
      std::sort(newly.begin(), newly.end());
      found += static_cast<std::size_t>(std::unique(newly.begin(), newly.end()) - newly.begin());
      frontier = std::move(next);
    }
  }

  const std::vector<PulseSequence>& words(std::size_t index) const { return words_[index]; }
  std::size_t minimal_length(std::size_t index) const { return words_[index].front().size(); }

  /// Number of Cliffords per minimal length.
  std::map<std::size_t, std::size_t> histogram() const {
    std::map<std::size_t, std::size_t> h;
    for (const auto& w : words_) ++h[w.front().size()];
    return h;
  }

  double mean_length() const {
    double total = 0;
    for (const auto& w : words_) total += static_cast<double>(w.front().size());
    return total / static_cast<double>(words_.size());
  }

 private:
  std::vector<std::vector<PulseSequence>> words_;
};

inline const MinimalWordTable& minimal_word_table() {
  static const MinimalWordTable table;
  return table;
}

inline std::size_t single_qubit_index(const CliffordElement& c) {
  if (c.num_qubits() != 1) throw Error(ErrorKind::kUnsupportedDimension, "pulse decomposition is single-qubit only");
  return *clifford_table(1).find(c);
}

/// Every minimal-length pulse word for c.
inline const std::vector<PulseSequence>& minimal_decompositions(const CliffordElement& c) {
  return minimal_word_table().words(single_qubit_index(c));
}

/// One minimal word, chosen uniformly among the ties.
template <typename Rng>
PulseSequence decompose_minimal(const CliffordElement& c, Rng& rng) {
  const auto& options = minimal_decompositions(c);
  std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
  return options[pick(rng)];
}

}  // namespace irb
