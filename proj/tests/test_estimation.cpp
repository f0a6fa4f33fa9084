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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "irb/estimation.hpp"
#include "irb/fitting.hpp"
#include "irb/noise.hpp"
#include "irb/protocol.hpp"

namespace irb {
namespace {

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kParseError;
}

TEST(AverageCliffordError, Examples) {
  EXPECT_EQ(average_clifford_error(1.0, 2), 0.0);
  EXPECT_NEAR(average_clifford_error(0.984, 2), 0.008, 1e-15);
  EXPECT_NEAR(average_clifford_error(0.0, std::size_t{1} << 20), 1.0, 1e-6);
  EXPECT_EQ(kind_of([] { average_clifford_error(1.2, 2); }), ErrorKind::kOutOfRange);
  EXPECT_EQ(kind_of([] { average_clifford_error(-0.1, 2); }), ErrorKind::kOutOfRange);
}

TEST(InterleavedGateError, Examples) {
  EXPECT_NEAR(interleaved_gate_error(0.984, 0.978, 2), 0.003, 5e-4);
  EXPECT_EQ(interleaved_gate_error(0.97, 0.97, 2), 0.0);
  EXPECT_NEAR(interleaved_gate_error(1.0, 0.9, 2), 0.05, 1e-15);
  EXPECT_NEAR(interleaved_gate_error(1.0, 0.9, 2), average_clifford_error(0.9, 2), 1e-15);
  EXPECT_LT(interleaved_gate_error(0.9, 0.95, 2), 0.0);  // raw value kept
  EXPECT_EQ(kind_of([] { interleaved_gate_error(1e-6, 0.5, 2); }), ErrorKind::kDivisionByZero);
  EXPECT_EQ(kind_of([] { interleaved_gate_error(0.0, 0.0, 2); }), ErrorKind::kDivisionByZero);
}

double first_expression(double p, double pc, double d) { return (d - 1) * (std::abs(p - pc / p) + 1 - p) / d; }
double second_general(double p, double d) {
  return 2 * (d * d - 1) * (1 - p) / (p * d * d) + 4 * std::sqrt(1 - p) * std::sqrt(d * d - 1) / p;
}
double second_pauli(double p, double d) { return 2 * (d * d - 1) * (1 - p) / (p * d * d); }

TEST(ErrorBound, Examples) {
  const auto rep = make_report(0.984, 0.0, 0.978, 0.0, 2);
  EXPECT_NEAR(rep.upper, 0.016, 1e-3);
  EXPECT_EQ(rep.lower, 0.0);
  EXPECT_NEAR(error_bound(1.0, 0.8, 2, NoiseClass::kGeneral), 0.0, 1e-15);
  EXPECT_EQ(error_bound(1.0, 0.8, 4, NoiseClass::kPauli), 0.0);
  for (double p : {0.5, 0.9, 0.999}) {
    for (double pc : {0.0, 0.4, 0.9}) {
      EXPECT_EQ(error_bound(p, pc, 2, NoiseClass::kDepolarizing), 0.0);
    }
  }
}

TEST(ErrorBound, ClosedForms) {
  for (std::size_t d : {2u, 4u, 8u}) {
    const double dd = static_cast<double>(d);
    for (double p : {0.5, 0.9, 0.984, 0.999}) {
      for (double pc : {0.3, 0.8, 0.978, 0.999}) {
        EXPECT_NEAR(error_bound(p, pc, d, NoiseClass::kGeneral),
                    std::min(first_expression(p, pc, dd), second_general(p, dd)), 1e-15);
        EXPECT_NEAR(error_bound(p, pc, d, NoiseClass::kPauli), std::min(first_expression(p, pc, dd), second_pauli(p, dd)),
                    1e-15);
      }
    }
  }
}

TEST(ErrorBound, RejectsOutOfRange) {
  EXPECT_EQ(kind_of([] { error_bound(0.0, 0.5, 2, NoiseClass::kGeneral); }), ErrorKind::kOutOfRange);
  EXPECT_EQ(kind_of([] { error_bound(1.1, 0.5, 2, NoiseClass::kGeneral); }), ErrorKind::kOutOfRange);
  EXPECT_EQ(kind_of([] { error_bound(0.9, 1.5, 2, NoiseClass::kGeneral); }), ErrorKind::kOutOfRange);
  EXPECT_EQ(kind_of([] { error_bound(0.9, -0.1, 2, NoiseClass::kGeneral); }), ErrorKind::kOutOfRange);
}

TEST(ErrorBound, PauliNeverExceedsGeneral) {
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    for (double pc : {0.0, p * p, p, 1.0}) {
      EXPECT_LE(error_bound(p, pc, 2, NoiseClass::kPauli), error_bound(p, pc, 2, NoiseClass::kGeneral));
    }
    EXPECT_LT(second_pauli(p, 2), second_general(p, 2));
  }
}

TEST(ErrorBound, ShrinksMonotonicallyAsDecayApproachesOne) {
  double previous = std::numeric_limits<double>::infinity();
  double prev_first = previous, prev_second = previous;
  for (int i = 500; i <= 1000; ++i) {
    const double p = i / 1000.0;
    const double e = error_bound(p, p * p, 2, NoiseClass::kGeneral);
    EXPECT_LE(e, previous);
    EXPECT_LE(first_expression(p, p * p, 2), prev_first);
    EXPECT_LE(second_general(p, 2), prev_second);
    previous = e;
    prev_first = first_expression(p, p * p, 2);
    prev_second = second_general(p, 2);
  }
  EXPECT_EQ(previous, 0.0);
}

TEST(TheoreticalOverrotation, TableValues) {
  EXPECT_EQ(round3(theoretical_overrotation_error(0.0)), 0.000);
  EXPECT_EQ(round3(theoretical_overrotation_error(std::numbers::pi / 20)), 0.004);
  EXPECT_EQ(round3(theoretical_overrotation_error(std::numbers::pi / 10)), 0.016);
  for (double eps : {0.01, 0.3, 1.0, 3.0}) {
    EXPECT_NEAR(theoretical_overrotation_error(eps), average_fidelity(overrotation(gates::Axis::kX, eps)).gate_error,
                1e-12);
  }
}

TEST(PropagateUncertainty, Examples) {
  EXPECT_EQ(propagate_uncertainty(0.984, 0.0, 0.978, 0.0, 2), 0.0);
  const double sigma = propagate_uncertainty(0.984, 0.004, 0.978, 0.005, 2);
  EXPECT_NEAR(sigma, 0.003, 0.0015);
  EXPECT_NEAR(propagate_uncertainty(0.984, 0.04, 0.978, 0.05, 2), 10 * sigma, 1e-15);
}

TEST(PropagateUncertainty, MatchesFiniteDifferences) {
  const double p = 0.97, pc = 0.95, h = 1e-7;
  const double dp = (interleaved_gate_error(p + h, pc, 2) - interleaved_gate_error(p - h, pc, 2)) / (2 * h);
  const double dpc = (interleaved_gate_error(p, pc + h, 2) - interleaved_gate_error(p, pc - h, 2)) / (2 * h);
  EXPECT_NEAR(propagate_uncertainty(p, 0.01, pc, 0.02, 2), std::hypot(dp * 0.01, dpc * 0.02), 1e-9);
}

TEST(GateErrorReport, IntervalInvariants) {
  for (double p : {0.6, 0.9, 0.99, 1.0}) {
    for (double pc : {0.0, 0.5, 0.85, 0.99, 1.0}) {
      for (auto cls : {NoiseClass::kGeneral, NoiseClass::kPauli, NoiseClass::kDepolarizing}) {
        for (std::size_t d : {2u, 4u}) {
          const auto rep = make_report(p, 0.01, pc, 0.01, d, cls);
          const double ceiling = (static_cast<double>(d) - 1) / static_cast<double>(d);
          EXPECT_GE(rep.lower, 0.0);
          EXPECT_LE(rep.upper, ceiling);
          EXPECT_LE(rep.lower, rep.upper);
          if (rep.r_est >= 0 && rep.r_est <= ceiling) {
            EXPECT_LE(rep.lower, rep.r_est);
            EXPECT_GE(rep.upper, rep.r_est);
          }
          EXPECT_NEAR(rep.raw_lower, rep.r_est - rep.bound, 1e-15);
          EXPECT_NEAR(rep.raw_upper, rep.r_est + rep.bound, 1e-15);
          if (cls == NoiseClass::kDepolarizing) {
            EXPECT_EQ(rep.bound, 0.0);
          }
        }
      }
    }
  }
}

TEST(GateErrorReport, JsonAndTable) {
  auto rep = make_report(0.984, 0.004, 0.978, 0.005, 2, NoiseClass::kPauli);
  rep.gamma = GammaDiagnostic::from_gamma(0.01);
  const auto j = report_to_json(rep);
  EXPECT_EQ(j.at("noise_class"), "pauli");
  EXPECT_EQ(j.at("interval").size(), 2u);
  EXPECT_TRUE(j.at("gamma").at("advisory").get<bool>());
  EXPECT_NEAR(j.at("r_est").get<double>(), rep.r_est, 0);
  const auto table = format_summary_table({{"pi/20", 0.0038, rep}});
  EXPECT_NE(table.find("r_th"), std::string::npos);
  EXPECT_NE(table.find("pi/20"), std::string::npos);
  EXPECT_NE(table.find("0.004"), std::string::npos);
  EXPECT_EQ(parse_noise_class("depolarizing"), NoiseClass::kDepolarizing);
  EXPECT_THROW(parse_noise_class("other"), Error);
}

struct BatteryCase {
  const char* name;
  SuperOperator lambda;
  SuperOperator lambda_c;
};

class BoundContainment : public ::testing::TestWithParam<int> {};

TEST_P(BoundContainment, TrueErrorInsideWidenedInterval) {
  const std::vector<double> pauli_probs = {0.985, 0.008, 0.004, 0.003};
  const std::vector<double> pauli_c = {0.97, 0.02, 0.0, 0.01};
  const std::vector<BatteryCase> battery = {
      {"depolarizing", depolarizing(0.985, 1), depolarizing(0.98, 1)},
      {"pauli", pauli_channel(pauli_probs), pauli_channel(pauli_c)},
      {"overrotation", compose(overrotation(gates::Axis::kX, 0.1), depolarizing(0.99, 1)),
       overrotation(gates::Axis::kX, std::numbers::pi / 10)},
      {"damping", damping(5e-6, 3.2e-6, 37.5e-9), damping(5e-6, 3.2e-6, 120e-9)},
  };
  const auto& c = battery[static_cast<std::size_t>(GetParam())];
  ExperimentConfig config;
  config.lengths = length_range(1, 121, 6);
  config.sequences = 40;
  config.seed = 1000 + static_cast<std::uint64_t>(GetParam());
  config.noise = NoiseModel::uniform(c.lambda).with_interleaved_error(c.lambda_c);
  const auto standard = fit_zeroth(run_experiment(config));
  config.mode = RbMode::kInterleaved;
  config.target = gates::rotation(1, 0, gates::Axis::kX, 1);
  const auto interleaved = fit_zeroth(run_experiment(config));
  const auto rep = make_report(standard.p, standard.p_err, interleaved.p, interleaved.p_err, 2, NoiseClass::kGeneral);
  const double r_true = average_fidelity(c.lambda_c).gate_error;
  const double slack = 3 * rep.r_est_err + 1e-9;
  EXPECT_GE(r_true, rep.r_est - rep.bound - slack) << c.name;
  EXPECT_LE(r_true, rep.r_est + rep.bound + slack) << c.name;
}

INSTANTIATE_TEST_SUITE_P(Battery, BoundContainment, ::testing::Range(0, 4));

TEST(Exactness, DepolarizingPairRecoversGateError) {
  const double p = 0.985, q = 0.99;
  ExperimentConfig config;
  config.lengths = length_range(2, 64, 2);
  config.sequences = 20;
  config.noise = NoiseModel::uniform(depolarizing(p, 1)).with_interleaved_error(depolarizing(q, 1));
  const auto standard = fit_zeroth(run_experiment(config));
  config.mode = RbMode::kInterleaved;
  config.target = gates::hadamard(1, 0);
  const auto interleaved = fit_zeroth(run_experiment(config));
  const auto rep = make_report(standard.p, standard.p_err, interleaved.p, interleaved.p_err, 2, NoiseClass::kDepolarizing);
  EXPECT_NEAR(rep.r_est, average_fidelity(depolarizing(q, 1)).gate_error, 1e-9);
  EXPECT_EQ(rep.bound, 0.0);
}

}  // namespace
}  // namespace irb
