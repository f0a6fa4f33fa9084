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

// Error channels and their assignment to gates.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>

#include "irb/clifford.hpp"
#include "irb/pauli.hpp"

namespace irb {

/// Lambda(rho) = p rho + (1 - p) I / d, i.e. diag(1, p, ..., p).
inline SuperOperator depolarizing(double p, int num_qubits) {
  const double d2 = static_cast<double>(pauli_basis_size(num_qubits));
  if (!(p >= -1.0 / (d2 - 1.0) - kExactTolerance && p <= 1.0 + kExactTolerance)) {
    throw Error(ErrorKind::kOutOfRange, "depolarizing parameter " + std::to_string(p) + " outside CP range");
  }
  RealVector diag = RealVector::Constant(static_cast<Eigen::Index>(d2), p);
  diag[0] = 1.0;
  return SuperOperator(num_qubits, diag.asDiagonal());
}

/// Channel rho -> sum_i q_i P_i rho P_i. Diagonal PTM with entry
/// sum_i q_i (+1 if P_i commutes with P_j else -1).
inline SuperOperator pauli_channel(std::span<const double> probabilities) {
  const int n = detail::qubits_for_basis_size(static_cast<Eigen::Index>(probabilities.size()));
  double total = 0.0;
  for (double q : probabilities) {
    if (q < 0.0) throw Error(ErrorKind::kInvalidDistribution, "negative Pauli probability");
    total += q;
  }
  if (std::abs(total - 1.0) > kExactTolerance) {
    throw Error(ErrorKind::kInvalidDistribution, "Pauli probabilities sum to " + std::to_string(total));
  }
  const std::size_t size = probabilities.size();
  RealVector diag(static_cast<Eigen::Index>(size));
  for (std::size_t j = 0; j < size; ++j) {
    double eigenvalue = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      eigenvalue += pauli_anticommute(n, i, j) ? -probabilities[i] : probabilities[i];
    }
    diag[static_cast<Eigen::Index>(j)] = eigenvalue;
  }
  diag[0] = 1.0;
  return SuperOperator(n, diag.asDiagonal());
}

/// Unitary channel of exp(-i epsilon sigma_axis / 2) on one qubit.
inline SuperOperator overrotation(gates::Axis axis, double epsilon) {
  const int code = axis == gates::Axis::kX ? 1 : axis == gates::Axis::kY ? 2 : 3;
  const ComplexMatrix u = std::cos(epsilon / 2) * ComplexMatrix::Identity(2, 2) -
                          std::complex<double>(0, std::sin(epsilon / 2)) * detail::single_pauli(code);
  return ptm_from_unitary(u);
}

/// Amplitude and phase damping over t_gate: X, Y decay as exp(-t/T2), Z as
/// exp(-t/T1), with the identity feeding Z toward the ground state.
inline SuperOperator damping(double t1, double t2, double t_gate) {
  if (!(t1 > 0.0) || !(t2 > 0.0) || t_gate < 0.0) {
    throw Error(ErrorKind::kUnphysicalParameters, "damping needs T1 > 0, T2 > 0, t_gate >= 0");
  }
  if (t2 > 2.0 * t1) throw Error(ErrorKind::kUnphysicalParameters, "T2 must not exceed 2 T1");
  const double transverse = std::exp(-t_gate / t2);
  const double longitudinal = std::exp(-t_gate / t1);
  RealMatrix m = RealMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = transverse;
  m(2, 2) = transverse;
  m(3, 3) = longitudinal;
  m(3, 0) = 1.0 - longitudinal;
  return SuperOperator(1, std::move(m));
}

/// Places a single-qubit channel on `qubit` of an n-qubit register.
inline SuperOperator embed(const SuperOperator& single, int num_qubits, int qubit) {
  if (single.num_qubits() != 1) throw Error(ErrorKind::kDimensionMismatch, "embed expects a single-qubit channel");
  if (qubit < 0 || qubit >= num_qubits) throw Error(ErrorKind::kOutOfRange, "qubit index out of range");
  RealMatrix m = RealMatrix::Identity(1, 1);
  for (int q = 0; q < num_qubits; ++q) {
    m = q == qubit ? RealMatrix(detail::kron(m, single.matrix())) : RealMatrix(detail::kron(m, RealMatrix::Identity(4, 4)));
  }
  return SuperOperator(num_qubits, std::move(m));
}

struct SpamPair {
  PauliVector prep;
  PauliVector meas;

  friend bool operator==(const SpamPair&, const SpamPair&) = default;
};

/// Ideal computational-basis preparation and projective readout of |0...0>.
inline SpamPair ideal_spam(int num_qubits) {
  return {PauliVector::basis_state(num_qubits, 0), PauliVector::basis_state(num_qubits, 0)};
}

/// rho_psi = prep_error(ideal_state); E_psi = meas_error^dagger(ideal_effect).
inline SpamPair spam_pair(const SuperOperator& prep_error, const SuperOperator& meas_error,
                          const PauliVector& ideal_state, const PauliVector& ideal_effect) {
  require_trace_preserving(prep_error);
  require_trace_preserving(meas_error);
  if (std::abs(ideal_state.trace() - 1.0) > kStructuralTolerance) {
    throw Error(ErrorKind::kInvalidState, "ideal state trace is not 1");
  }
  PauliVector prep = apply(prep_error, ideal_state);
  PauliVector meas = apply(meas_error.adjoint(), ideal_effect);
  const double effect_trace = meas.trace();
  if (effect_trace < -kStructuralTolerance ||
      effect_trace > static_cast<double>(meas.dimension()) + kStructuralTolerance) {
    throw Error(ErrorKind::kInvalidEffect, "effect trace outside [0, d]");
  }
  return {std::move(prep), std::move(meas)};
}

/// Error placement for one experiment: Lambda_i per Clifford (falling back to
/// a uniform default), the interleaved gate's Lambda_C, and the SPAM pair.
class NoiseModel {
 public:
  using PerGateMap = std::unordered_map<CliffordElement, SuperOperator>;

  explicit NoiseModel(int num_qubits)
      : NoiseModel(SuperOperator::identity(num_qubits), {}, SuperOperator::identity(num_qubits),
                   ideal_spam(num_qubits)) {}

  NoiseModel(SuperOperator uniform, PerGateMap per_gate, SuperOperator interleaved_error, SpamPair spam)
      : uniform_(std::move(uniform)),
        per_gate_(std::move(per_gate)),
        interleaved_error_(std::move(interleaved_error)),
        spam_(std::move(spam)) {
    const int n = uniform_.num_qubits();
    require_trace_preserving(uniform_);
    require_trace_preserving(interleaved_error_);
    if (interleaved_error_.num_qubits() != n || spam_.prep.num_qubits() != n || spam_.meas.num_qubits() != n) {
      throw Error(ErrorKind::kDimensionMismatch, "noise model components disagree on qubit count");
    }
    for (const auto& [gate, channel] : per_gate_) {
      if (static_cast<int>(gate.num_qubits()) != n || channel.num_qubits() != n) {
        throw Error(ErrorKind::kDimensionMismatch, "per-gate entry has the wrong qubit count");
      }
      require_trace_preserving(channel);
    }
    if (std::abs(spam_.prep.trace() - 1.0) > kStructuralTolerance) {
      throw Error(ErrorKind::kInvalidState, "prepared state trace is not 1");
    }
  }

  static NoiseModel uniform(const SuperOperator& gate_error) {
    const int n = gate_error.num_qubits();
    return NoiseModel(gate_error, {}, SuperOperator::identity(n), ideal_spam(n));
  }

  NoiseModel with_interleaved_error(SuperOperator error) const {
    return NoiseModel(uniform_, per_gate_, std::move(error), spam_);
  }
  NoiseModel with_spam(SpamPair spam) const { return NoiseModel(uniform_, per_gate_, interleaved_error_, std::move(spam)); }
  NoiseModel with_gate_error(const CliffordElement& gate, SuperOperator error) const {
    PerGateMap per_gate = per_gate_;
    per_gate.insert_or_assign(gate, std::move(error));
    return NoiseModel(uniform_, std::move(per_gate), interleaved_error_, spam_);
  }

  int num_qubits() const { return uniform_.num_qubits(); }
  const SuperOperator& uniform_error() const { return uniform_; }
  const PerGateMap& per_gate() const { return per_gate_; }
  const SuperOperator& interleaved_error() const { return interleaved_error_; }
  const SpamPair& spam() const { return spam_; }
  bool gate_independent() const { return per_gate_.empty(); }

  const SuperOperator& gate_error(const CliffordElement& gate) const {
    if (per_gate_.empty()) return uniform_;
    auto it = per_gate_.find(gate);
    return it == per_gate_.end() ? uniform_ : it->second;
  }

  friend bool operator==(const NoiseModel& a, const NoiseModel& b) {
    if (!(a.uniform_ == b.uniform_ && a.interleaved_error_ == b.interleaved_error_ && a.spam_ == b.spam_)) return false;
    if (a.per_gate_.size() != b.per_gate_.size()) return false;
    for (const auto& [gate, channel] : a.per_gate_) {
      auto it = b.per_gate_.find(gate);
      if (it == b.per_gate_.end() || !(it->second == channel)) return false;
    }
    return true;
  }

 private:
  SuperOperator uniform_;
  PerGateMap per_gate_;
  SuperOperator interleaved_error_;
  SpamPair spam_;
};

/// Advisory first-order validity check. gamma is the mean Frobenius distance
/// of each gate's error PTM from the group-averaged error (a computable
/// stand-in for the norm the analysis leaves open).
struct GammaDiagnostic {
  double gamma = 0.0;
  /// Largest m with gamma^2 < 2 / (m (m + 1)); empty when unbounded.
  std::optional<std::size_t> max_valid_m;

  static GammaDiagnostic from_gamma(double gamma) {
    GammaDiagnostic g{gamma, std::nullopt};
    if (gamma <= 0.0) return g;
    const double g2 = gamma * gamma;
    auto valid = [g2](double m) { return g2 < 2.0 / (m * (m + 1.0)); };
    // m(m+1) < 2/g2, starting from the real root and correcting by direct checks.
    double m = std::floor((-1.0 + std::sqrt(1.0 + 8.0 / g2)) / 2.0);
    if (!std::isfinite(m) || m > 1e15) return g;
    m = std::max(m, 0.0);
    while (m >= 1.0 && !valid(m)) m -= 1.0;
    while (valid(m + 1.0)) m += 1.0;
    g.max_valid_m = static_cast<std::size_t>(m);
    return g;
  }

  bool valid_for(std::size_t m) const { return !max_valid_m || m <= *max_valid_m; }
};

inline GammaDiagnostic gamma_variation(const NoiseModel& model, std::span<const CliffordElement> group) {
  if (group.empty()) throw Error(ErrorKind::kOutOfRange, "gamma needs a non-empty group");
  if (model.gate_independent()) return GammaDiagnostic{};
  const auto size = model.uniform_error().matrix().rows();
  RealMatrix mean = RealMatrix::Zero(size, size);
  for (const auto& c : group) mean += model.gate_error(c).matrix();
  mean /= static_cast<double>(group.size());
  double total = 0.0;
  for (const auto& c : group) total += (model.gate_error(c).matrix() - mean).norm();
  return GammaDiagnostic::from_gamma(total / static_cast<double>(group.size()));
}

}  // namespace irb
