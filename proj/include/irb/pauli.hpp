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

// Channel and state algebra in the normalized Pauli basis (Liouville
// representation). Basis operators are P_i / sqrt(d), ordered lexicographically
// over (I, X, Y, Z)^{\otimes n} with qubit 0 as the leftmost tensor factor, so
// the Hilbert-Schmidt inner product of two operators is the dot product of
// their coefficient vectors.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irb/error.hpp"
#include "json.hpp"

namespace irb {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kStructuralTolerance = 1e-10;
inline constexpr double kExactTolerance = 1e-12;
// Dense d^2 x d^2 channels are practical up to 64x64.
inline constexpr int kMaxDenseQubits = 3;

constexpr std::size_t hilbert_dimension(int num_qubits) { return std::size_t{1} << num_qubits; }
constexpr std::size_t pauli_basis_size(int num_qubits) { return std::size_t{1} << (2 * num_qubits); }

/// Label such as "IXZ" for a basis index.
inline std::string pauli_label(int num_qubits, std::size_t index) {
  static constexpr char kCodes[] = {'I', 'X', 'Y', 'Z'};
  std::string label(static_cast<std::size_t>(num_qubits), 'I');
  for (int q = num_qubits - 1; q >= 0; --q) {
    label[static_cast<std::size_t>(q)] = kCodes[index & 3];
    index >>= 2;
  }
  return label;
}

inline std::size_t pauli_index(std::string_view label) {
  std::size_t index = 0;
  for (char c : label) {
    index <<= 2;
    switch (c) {
      case 'I': break;
      case 'X': index |= 1; break;
      case 'Y': index |= 2; break;
      case 'Z': index |= 3; break;
      default: throw Error(ErrorKind::kOutOfRange, "invalid Pauli label '" + std::string(label) + "'");
    }
  }
  return index;
}

/// Per-qubit code (0..3) of qubit q inside a basis index.
constexpr int pauli_code(int num_qubits, std::size_t index, int qubit) {
  return static_cast<int>((index >> (2 * (num_qubits - 1 - qubit))) & 3);
}

/// True when basis elements a and b anticommute.
constexpr bool pauli_anticommute(int num_qubits, std::size_t a, std::size_t b) {
  int parity = 0;
  for (int q = 0; q < num_qubits; ++q) {
    int ca = pauli_code(num_qubits, a, q);
    int cb = pauli_code(num_qubits, b, q);
    parity ^= (ca != 0 && cb != 0 && ca != cb) ? 1 : 0;
  }
  return parity != 0;
}

namespace detail {

template <typename Derived1, typename Derived2>
auto kron(const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b) {
  using Scalar = typename Derived1::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexMatrix single_pauli(int code) {
  using C = std::complex<double>;
  ComplexMatrix m(2, 2);
  switch (code) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, C(0, -1), C(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline std::vector<ComplexMatrix> build_pauli_matrices(int num_qubits) {
  std::vector<ComplexMatrix> out;
  out.reserve(pauli_basis_size(num_qubits));
  for (std::size_t index = 0; index < pauli_basis_size(num_qubits); ++index) {
    ComplexMatrix m = ComplexMatrix::Identity(1, 1);
    for (int q = 0; q < num_qubits; ++q) {
      m = kron(m, single_pauli(pauli_code(num_qubits, index, q)));
    }
    out.push_back(std::move(m));
  }
  return out;
}

/// Unnormalized Pauli matrices for 1 <= n <= kMaxDenseQubits, built once.
inline const std::vector<ComplexMatrix>& pauli_matrices(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxDenseQubits) {
    throw Error(ErrorKind::kUnsupportedDimension,
                "dense Pauli algebra supports 1.." + std::to_string(kMaxDenseQubits) + " qubits, got " +
                    std::to_string(num_qubits));
  }
  static const std::vector<std::vector<ComplexMatrix>> tables = [] {
    std::vector<std::vector<ComplexMatrix>> t;
    for (int n = 1; n <= kMaxDenseQubits; ++n) t.push_back(build_pauli_matrices(n));
    return t;
  }();
  return tables[static_cast<std::size_t>(num_qubits - 1)];
}

inline int qubits_for_hilbert_dimension(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || n < 1) {
    throw Error(ErrorKind::kDimensionMismatch, "dimension " + std::to_string(dim) + " is not 2^n with n >= 1");
  }
  return n;
}

inline int qubits_for_basis_size(Eigen::Index size) {
  int n = 0;
  while ((Eigen::Index{1} << (2 * n)) < size) ++n;
  if ((Eigen::Index{1} << (2 * n)) != size || n < 1) {
    throw Error(ErrorKind::kDimensionMismatch, "size " + std::to_string(size) + " is not 4^n with n >= 1");
  }
  return n;
}

}  // namespace detail

/// Coefficients of a Hermitian operator in the normalized Pauli basis. States
/// have identity coefficient 1/sqrt(d).
class PauliVector {
 public:
  PauliVector(int num_qubits, RealVector coefficients)
      : num_qubits_(num_qubits), coefficients_(std::move(coefficients)) {
    if (num_qubits_ < 1 || static_cast<std::size_t>(coefficients_.size()) != pauli_basis_size(num_qubits_)) {
      throw Error(ErrorKind::kDimensionMismatch, "Pauli vector length does not match 4^n");
    }
  }

  static PauliVector from_matrix(const ComplexMatrix& op) {
    if (op.rows() != op.cols()) throw Error(ErrorKind::kDimensionMismatch, "operator must be square");
    const int n = detail::qubits_for_hilbert_dimension(op.rows());
    const auto& paulis = detail::pauli_matrices(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(op.rows()));
    RealVector c(static_cast<Eigen::Index>(paulis.size()));
    for (std::size_t i = 0; i < paulis.size(); ++i) {
      c[static_cast<Eigen::Index>(i)] = (paulis[i] * op).trace().real() * scale;
    }
    return PauliVector(n, std::move(c));
  }

  /// Projector |k><k| onto computational basis state k.
  static PauliVector basis_state(int num_qubits, std::size_t k = 0) {
    const auto d = static_cast<Eigen::Index>(hilbert_dimension(num_qubits));
    if (static_cast<Eigen::Index>(k) >= d) throw Error(ErrorKind::kOutOfRange, "basis index out of range");
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    return from_matrix(rho);
  }

  static PauliVector maximally_mixed(int num_qubits) {
    RealVector c = RealVector::Zero(static_cast<Eigen::Index>(pauli_basis_size(num_qubits)));
    c[0] = 1.0 / std::sqrt(static_cast<double>(hilbert_dimension(num_qubits)));
    return PauliVector(num_qubits, std::move(c));
  }

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return hilbert_dimension(num_qubits_); }
  const RealVector& coefficients() const { return coefficients_; }
  double operator[](std::size_t i) const { return coefficients_[static_cast<Eigen::Index>(i)]; }
  double trace() const { return coefficients_[0] * std::sqrt(static_cast<double>(dimension())); }

  ComplexMatrix to_matrix() const {
    const auto& paulis = detail::pauli_matrices(num_qubits_);
    const auto d = static_cast<Eigen::Index>(dimension());
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < paulis.size(); ++i) {
      m += (coefficients_[static_cast<Eigen::Index>(i)] * scale) * paulis[i];
    }
    return m;
  }

  friend bool operator==(const PauliVector& a, const PauliVector& b) {
    return a.num_qubits_ == b.num_qubits_ && a.coefficients_ == b.coefficients_;
  }

 private:
  int num_qubits_;
  RealVector coefficients_;
};

namespace detail {

inline Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace detail

/// Full positivity check of a density-matrix vector. Opt-in: not run in hot loops.
inline void validate_state(const PauliVector& v, double tol = kStructuralTolerance) {
  if (std::abs(v.trace() - 1.0) > tol) throw Error(ErrorKind::kInvalidState, "state trace is not 1");
  if (detail::hermitian_eigenvalues(v.to_matrix()).minCoeff() < -tol) {
    throw Error(ErrorKind::kInvalidState, "state is not positive semidefinite");
  }
}

/// Checks 0 <= E <= I.
inline void validate_effect(const PauliVector& v, double tol = kStructuralTolerance) {
  const RealVector ev = detail::hermitian_eigenvalues(v.to_matrix());
  if (ev.minCoeff() < -tol || ev.maxCoeff() > 1.0 + tol) {
    throw Error(ErrorKind::kInvalidEffect, "effect eigenvalues outside [0, 1]");
  }
}

/// Real d^2 x d^2 Pauli transfer matrix of a channel.
class SuperOperator {
 public:
  SuperOperator(int num_qubits, RealMatrix matrix) : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
    const auto size = static_cast<Eigen::Index>(pauli_basis_size(num_qubits_));
    if (num_qubits_ < 1 || matrix_.rows() != size || matrix_.cols() != size) {
      throw Error(ErrorKind::kDimensionMismatch, "superoperator matrix must be 4^n x 4^n");
    }
  }

  /// Infers the qubit count from the matrix size.
  explicit SuperOperator(RealMatrix matrix)
      : SuperOperator(detail::qubits_for_basis_size(matrix.rows()), std::move(matrix)) {}

  static SuperOperator identity(int num_qubits) {
    const auto size = static_cast<Eigen::Index>(pauli_basis_size(num_qubits));
    return SuperOperator(num_qubits, RealMatrix::Identity(size, size));
  }

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return hilbert_dimension(num_qubits_); }
  const RealMatrix& matrix() const { return matrix_; }
  double operator()(Eigen::Index row, Eigen::Index col) const { return matrix_(row, col); }

  /// Identity row equal to (1, 0, ..., 0).
  bool is_trace_preserving(double tol = kStructuralTolerance) const {
    if (std::abs(matrix_(0, 0) - 1.0) > tol) return false;
    return matrix_.row(0).tail(matrix_.cols() - 1).cwiseAbs().maxCoeff() <= tol;
  }

  /// Hilbert-Schmidt adjoint; the transpose in an orthonormal real basis.
  SuperOperator adjoint() const { return SuperOperator(num_qubits_, matrix_.transpose()); }

  friend bool operator==(const SuperOperator& a, const SuperOperator& b) {
    return a.num_qubits_ == b.num_qubits_ && a.matrix_ == b.matrix_;
  }

 private:
  int num_qubits_;
  RealMatrix matrix_;
};

inline void require_trace_preserving(const SuperOperator& s, double tol = kStructuralTolerance) {
  if (!s.is_trace_preserving(tol)) throw Error(ErrorKind::kNotTracePreserving, "channel is not trace preserving");
}

/// R[i][j] = Tr(P_i U P_j U^dagger) / d.
inline SuperOperator ptm_from_unitary(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw Error(ErrorKind::kDimensionMismatch, "unitary must be square");
  const int n = detail::qubits_for_hilbert_dimension(u.rows());
  const ComplexMatrix gram = u.adjoint() * u;
  const double deviation = (gram - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (deviation > kStructuralTolerance) {
    throw Error(ErrorKind::kNonUnitaryInput, "U^dagger U deviates from identity by " + std::to_string(deviation));
  }
  const auto& paulis = detail::pauli_matrices(n);
  const auto size = static_cast<Eigen::Index>(paulis.size());
  const double inv_d = 1.0 / static_cast<double>(u.rows());
  RealMatrix r(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    const ComplexMatrix conjugated = u * paulis[static_cast<std::size_t>(j)] * u.adjoint();
    for (Eigen::Index i = 0; i < size; ++i) {
      r(i, j) = (paulis[static_cast<std::size_t>(i)] * conjugated).trace().real() * inv_d;
    }
  }
  return SuperOperator(n, std::move(r));
}

/// a after b, i.e. the matrix product a * b.
inline SuperOperator compose(const SuperOperator& a, const SuperOperator& b) {
  if (a.num_qubits() != b.num_qubits()) throw Error(ErrorKind::kDimensionMismatch, "compose: qubit counts differ");
  return SuperOperator(a.num_qubits(), a.matrix() * b.matrix());
}

/// Channel on the joint system, a on the leading qubits.
inline SuperOperator tensor(const SuperOperator& a, const SuperOperator& b) {
  return SuperOperator(a.num_qubits() + b.num_qubits(), detail::kron(a.matrix(), b.matrix()));
}

inline PauliVector apply(const SuperOperator& a, const PauliVector& v) {
  if (a.num_qubits() != v.num_qubits()) throw Error(ErrorKind::kDimensionMismatch, "apply: qubit counts differ");
  return PauliVector(v.num_qubits(), a.matrix() * v.coefficients());
}

enum class Validation { kCheap, kFull };

/// Tr[E S(rho)] as a dot product. Cheap validation checks traces only; kFull
/// adds the positivity checks.
inline double survival_probability(const SuperOperator& s, const PauliVector& prep, const PauliVector& meas,
                                   Validation validation = Validation::kCheap) {
  if (s.num_qubits() != prep.num_qubits() || s.num_qubits() != meas.num_qubits()) {
    throw Error(ErrorKind::kDimensionMismatch, "survival_probability: qubit counts differ");
  }
  if (std::abs(prep.trace() - 1.0) > kStructuralTolerance) {
    throw Error(ErrorKind::kInvalidState, "prepared state trace is not 1");
  }
  const double effect_trace = meas.trace();
  if (effect_trace < -kStructuralTolerance || effect_trace > static_cast<double>(meas.dimension()) + kStructuralTolerance) {
    throw Error(ErrorKind::kInvalidEffect, "effect trace outside [0, d]");
  }
  if (validation == Validation::kFull) {
    validate_state(prep);
    validate_effect(meas);
  }
  return meas.coefficients().dot(s.matrix() * prep.coefficients());
}

struct FidelitySummary {
  double average_fidelity = 1.0;
  double depolarizing_parameter = 1.0;
  double gate_error = 0.0;
};

/// (F, p, r) triple for a depolarizing parameter in dimension d.
inline FidelitySummary fidelity_from_parameter(double p, std::size_t d) {
  const double dd = static_cast<double>(d);
  const double f = p + (1.0 - p) / dd;
  return {f, p, (dd - 1.0) * (1.0 - p) / dd};
}

/// Average gate fidelity over Haar-random pure inputs, via p = (Tr R - 1)/(d^2 - 1).
inline FidelitySummary average_fidelity(const SuperOperator& a) {
  require_trace_preserving(a);
  const double d2 = static_cast<double>(pauli_basis_size(a.num_qubits()));
  const double p = (a.matrix().trace() - 1.0) / (d2 - 1.0);
  return fidelity_from_parameter(p, a.dimension());
}

/// Group average of C o A o C^dagger over the supplied channels.
inline SuperOperator twirl(const SuperOperator& a, std::span<const SuperOperator> group) {
  if (group.empty()) throw Error(ErrorKind::kOutOfRange, "twirl over an empty group");
  RealMatrix sum = RealMatrix::Zero(a.matrix().rows(), a.matrix().cols());
  for (const auto& c : group) {
    if (c.num_qubits() != a.num_qubits()) throw Error(ErrorKind::kDimensionMismatch, "twirl: qubit counts differ");
    sum.noalias() += c.matrix() * a.matrix() * c.matrix().transpose();
  }
  return SuperOperator(a.num_qubits(), sum / static_cast<double>(group.size()));
}

inline nlohmann::json superoperator_to_json(const SuperOperator& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < s.matrix().rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < s.matrix().cols(); ++j) row.push_back(s(i, j));
    rows.push_back(std::move(row));
  }
  return {{"dimension", s.dimension()}, {"matrix", std::move(rows)}};
}

inline SuperOperator superoperator_from_json(const nlohmann::json& j) {
  try {
    const auto d = j.at("dimension").get<Eigen::Index>();
    const int n = detail::qubits_for_hilbert_dimension(d);
    const auto& rows = j.at("matrix");
    const auto size = static_cast<Eigen::Index>(pauli_basis_size(n));
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != size) {
      throw Error(ErrorKind::kParseError, "superoperator matrix must have d^2 rows");
    }
    RealMatrix m(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != size) {
        throw Error(ErrorKind::kParseError, "superoperator row " + std::to_string(i) + " must have d^2 entries");
      }
      for (Eigen::Index k = 0; k < size; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    return SuperOperator(n, std::move(m));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
}

}  // namespace irb
