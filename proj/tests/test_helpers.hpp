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

// Test-side oracles. Everything here is built from dense complex matrices
// and does not go through the library's PTM or tableau code.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "irb/pauli.hpp"

namespace irb::testing {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;

inline CMat oracle_pauli(int code) {
  CMat m(2, 2);
  switch (code) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

/// Unnormalized Pauli strings in (I,X,Y,Z)^n order, qubit 0 leftmost.
inline std::vector<CMat> oracle_paulis(int n) {
  std::vector<CMat> out = {CMat::Identity(1, 1)};
  for (int q = 0; q < n; ++q) {
    std::vector<CMat> next;
    for (const auto& a : out) {
      for (int c = 0; c < 4; ++c) next.push_back(kron(a, oracle_pauli(c)));
    }
    out = std::move(next);
  }
  return out;
}

/// R_ij = sum_k Tr(P_i K P_j K^dagger) / d.
inline RealMatrix ptm_from_kraus(const std::vector<CMat>& kraus, int n) {
  const auto paulis = oracle_paulis(n);
  const double d = static_cast<double>(paulis.front().rows());
  RealMatrix r(static_cast<Eigen::Index>(paulis.size()), static_cast<Eigen::Index>(paulis.size()));
  for (std::size_t i = 0; i < paulis.size(); ++i) {
    for (std::size_t j = 0; j < paulis.size(); ++j) {
      Complex acc = 0;
      for (const auto& k : kraus) acc += (paulis[i] * k * paulis[j] * k.adjoint()).trace();
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc.real() / d;
    }
  }
  return r;
}

inline CMat ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

/// Haar-random unitary via QR with the diagonal phase fix.
inline CMat haar_unitary(Eigen::Index d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMat> qr(ginibre(d, d, rng));
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
  return q;
}

/// Random CPTP map with `rank` Kraus operators cut from a Haar isometry.
inline std::vector<CMat> random_kraus(int n, int rank, std::mt19937_64& rng) {
  const Eigen::Index d = Eigen::Index{1} << n;
  const CMat v = haar_unitary(d * rank, rng).leftCols(d);
  std::vector<CMat> kraus;
  for (int k = 0; k < rank; ++k) kraus.push_back(v.block(k * d, 0, d, d));
  return kraus;
}

inline SuperOperator random_channel(int n, int rank, std::mt19937_64& rng) {
  return SuperOperator(n, ptm_from_kraus(random_kraus(n, rank, rng), n));
}

/// Monte Carlo estimate of the Haar-averaged <psi| Lambda(psi) |psi>.
struct FidelityEstimate {
  double mean;
  double std_error;
};

inline FidelityEstimate haar_fidelity(const std::vector<CMat>& kraus, std::size_t samples, std::mt19937_64& rng) {
  const Eigen::Index d = kraus.front().rows();
  double sum = 0, sum_sq = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    Eigen::VectorXcd psi = ginibre(d, 1, rng);
    psi.normalize();
    double f = 0;
    for (const auto& k : kraus) f += std::norm(psi.dot(k * psi));
    sum += f;
    sum_sq += f * f;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  return {mean, std::sqrt((sum_sq / n - mean * mean) / (n - 1))};
}

/// Unitaries of the 24 single-qubit Cliffords modulo phase, by closure of H, S.
inline std::vector<CMat> oracle_single_qubit_cliffords() {
  CMat h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  CMat s(2, 2);
  s << 1, 0, 0, Complex(0, 1);
  auto same_up_to_phase = [](const CMat& a, const CMat& b) {
    return std::abs(std::abs((a.adjoint() * b).trace()) - 2.0) < 1e-9;
  };
  std::vector<CMat> group = {CMat::Identity(2, 2)};
  for (std::size_t head = 0; head < group.size(); ++head) {
    for (const CMat* g : {&h, &s}) {
      CMat next = *g * group[head];
      bool seen = false;
      for (const auto& e : group) seen = seen || same_up_to_phase(e, next);
      if (!seen) group.push_back(next);
    }
  }
  return group;
}

inline CMat depolarize(const CMat& rho, double p) {
  const auto d = rho.rows();
  return p * rho + (1.0 - p) * rho.trace() * CMat::Identity(d, d) / static_cast<double>(d);
}

}  // namespace irb::testing
