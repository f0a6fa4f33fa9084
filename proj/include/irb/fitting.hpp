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

// Weighted nonlinear least squares for the decay models
//   zeroth order:  F(m) = A p^m + B
//   first order:   F(m) = A p^m + C (m - 1) p^(m - 2) + B
// The models are linear in A, B, C at fixed p, so every start point gets its
// linear coefficients from an exact solve before Levenberg-Marquardt refines
// all parameters together.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "irb/error.hpp"
#include "irb/parallel.hpp"
#include "irb/protocol.hpp"

namespace irb {

enum class DecayModel { kZeroth, kFirst };

inline std::string_view model_name(DecayModel model) { return model == DecayModel::kZeroth ? "zeroth" : "first"; }

inline DecayModel parse_model(std::string_view text) {
  if (text == "zeroth" || text == "0") return DecayModel::kZeroth;
  if (text == "first" || text == "1") return DecayModel::kFirst;
  throw Error(ErrorKind::kParseError, "unknown decay model '" + std::string(text) + "'");
}

struct FitResult {
  DecayModel model = DecayModel::kZeroth;
  double p = 1.0, p_err = 0.0;
  double a = 0.0, a_err = 0.0;
  double b = 0.0, b_err = 0.0;
  double c = 0.0, c_err = 0.0;
  /// sqrt of the weighted residual sum of squares.
  double residual_norm = 0.0;
  double chi_squared = 0.0;
  std::size_t dof = 0;
  bool weighted = false;
  bool converged = false;
  bool degenerate = false;
  std::vector<std::string> warnings;

  double evaluate(double m) const {
    double value = a * std::pow(p, m) + b;
    if (model == DecayModel::kFirst && m != 1.0) value += c * (m - 1.0) * std::pow(p, m - 2.0);
    return value;
  }
};

struct FitOptions {
  std::array<double, 4> start_p = {0.5, 0.9, 0.99, 0.999};
  int max_iterations = 500;
  /// Lower projection bound for p; the feasible set is (0, 1].
  double p_floor = 1e-9;
};

namespace detail {

struct FitProblem {
  std::vector<double> m, y, w;
  bool weighted = false;
  DecayModel model = DecayModel::kZeroth;

  std::size_t num_params() const { return model == DecayModel::kZeroth ? 3 : 4; }

  // Parameter order: p, A, B, C.
  double value(const Eigen::VectorXd& t, double mi) const {
    double v = t[1] * std::pow(t[0], mi) + t[2];
    if (model == DecayModel::kFirst && mi != 1.0) v += t[3] * (mi - 1.0) * std::pow(t[0], mi - 2.0);
    return v;
  }

  double objective(const Eigen::VectorXd& t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double r = y[i] - value(t, m[i]);
      s += w[i] * r * r;
    }
    return s;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& t) const {
    Eigen::MatrixXd j(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(num_params()));
    const double p = t[0];
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const double mi = m[i];
      j(row, 0) = t[1] * mi * std::pow(p, mi - 1.0);
      j(row, 1) = std::pow(p, mi);
      j(row, 2) = 1.0;
      if (model == DecayModel::kFirst) {
        const double lin = mi == 1.0 ? 0.0 : (mi - 1.0) * std::pow(p, mi - 2.0);
        j(row, 3) = lin;
        if (mi > 2.0) j(row, 0) += t[3] * (mi - 1.0) * (mi - 2.0) * std::pow(p, mi - 3.0);
      }
    }
    return j;
  }

  /// Exact weighted solve for A, B (and C) at fixed p.
  Eigen::VectorXd linear_start(double p) const {
    const auto rows = static_cast<Eigen::Index>(m.size());
    const auto cols = static_cast<Eigen::Index>(num_params() - 1);
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double sw = std::sqrt(w[static_cast<std::size_t>(i)]);
      const double mi = m[static_cast<std::size_t>(i)];
      design(i, 0) = sw * std::pow(p, mi);
      design(i, 1) = sw;
      if (model == DecayModel::kFirst) design(i, 2) = sw * (mi == 1.0 ? 0.0 : (mi - 1.0) * std::pow(p, mi - 2.0));
      rhs[i] = sw * y[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd coef = design.completeOrthogonalDecomposition().solve(rhs);
    Eigen::VectorXd t(static_cast<Eigen::Index>(num_params()));
    t[0] = p;
    t.tail(cols) = coef;
    return t;
  }
};

struct LmOutcome {
  Eigen::VectorXd params;
  double objective;
  bool converged;
};

inline LmOutcome levenberg_marquardt(const FitProblem& problem, Eigen::VectorXd t, const FitOptions& options) {
  auto project = [&](Eigen::VectorXd& v) { v[0] = std::clamp(v[0], options.p_floor, 1.0); };
  project(t);
  double obj = problem.objective(t);
  double lambda = 1e-3;
  const auto np = static_cast<Eigen::Index>(problem.num_params());
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (obj <= 1e-300) return {t, obj, true};
    const Eigen::MatrixXd j = problem.jacobian(t);
    Eigen::VectorXd r(j.rows());
    for (Eigen::Index i = 0; i < j.rows(); ++i) r[i] = problem.y[static_cast<std::size_t>(i)] - problem.value(t, problem.m[static_cast<std::size_t>(i)]);
    const Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(problem.w.data(), j.rows());
    const Eigen::MatrixXd jtwj = j.transpose() * wv.asDiagonal() * j;
    const Eigen::VectorXd grad = j.transpose() * wv.asDiagonal() * r;
    bool accepted = false;
    while (lambda < 1e20) {
      Eigen::MatrixXd damped = jtwj;
      for (Eigen::Index k = 0; k < np; ++k) damped(k, k) += lambda * std::max(jtwj(k, k), 1e-30);
      Eigen::VectorXd trial = t + damped.ldlt().solve(grad);
      project(trial);
      const double trial_obj = problem.objective(trial);
      if (std::isfinite(trial_obj) && trial_obj < obj) {
        const double step = (trial - t).cwiseAbs().cwiseQuotient(t.cwiseAbs().cwiseMax(1e-12)).maxCoeff();
        const double gain = obj - trial_obj;
        t = trial;
        obj = trial_obj;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        if (step < 1e-14 || gain <= 1e-16 * obj) return {t, obj, true};
        break;
      }
      lambda *= 10.0;
    }
    // No descent direction left at machine precision.
    if (!accepted) return {t, obj, true};
  }
  return {t, obj, false};
}

inline FitProblem make_problem(const DecayDataset& data, DecayModel model) {
  std::vector<DecayPoint> points = data.points;
  std::sort(points.begin(), points.end(), [](const DecayPoint& x, const DecayPoint& y) {
    return std::tie(x.m, x.mean, x.std_error) < std::tie(y.m, y.mean, y.std_error);
  });
  FitProblem problem;
  problem.model = model;
  problem.weighted = !points.empty() && std::all_of(points.begin(), points.end(),
                                                    [](const DecayPoint& pt) { return pt.std_error > 1e-12; });
  for (const auto& pt : points) {
    if (!std::isfinite(pt.mean) || !std::isfinite(pt.std_error) || pt.std_error < 0.0) {
      throw Error(ErrorKind::kParseError, "non-finite or negative data point at m = " + std::to_string(pt.m));
    }
    problem.m.push_back(static_cast<double>(pt.m));
    problem.y.push_back(pt.mean);
    problem.w.push_back(problem.weighted ? 1.0 / (pt.std_error * pt.std_error) : 1.0);
  }
  return problem;
}

}  // namespace detail

/// Fits either model. Requires 3 (zeroth) or 4 (first) distinct lengths.
inline FitResult fit_decay(const DecayDataset& data, DecayModel model, const FitOptions& options = {}) {
  const detail::FitProblem problem = detail::make_problem(data, model);
  std::vector<double> distinct = problem.m;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const std::size_t needed = problem.num_params();
  if (distinct.size() < needed) {
    throw Error(ErrorKind::kInsufficientData, "the " + std::string(model_name(model)) + "-order model needs " +
                                                  std::to_string(needed) + " distinct lengths, got " +
                                                  std::to_string(distinct.size()));
  }

  FitResult result;
  result.model = model;
  result.weighted = problem.weighted;
  result.dof = problem.m.size() - needed;

  const auto [lo, hi] = std::minmax_element(problem.y.begin(), problem.y.end());
  if (*hi - *lo <= 1e-14 * std::max(1.0, std::abs(*hi))) {
    result.p = 1.0;
    result.a = 0.0;
    result.b = problem.y.front();
    result.converged = true;
    result.degenerate = true;
    result.warnings.push_back("degenerate: all means equal; reporting p = 1");
    return result;
  }

  std::optional<detail::LmOutcome> best;
  for (double p0 : options.start_p) {
    auto outcome = detail::levenberg_marquardt(problem, problem.linear_start(p0), options);
    if (!best || outcome.objective < best->objective) best = std::move(outcome);
  }
  const Eigen::VectorXd& t = best->params;
  result.p = t[0];
  result.a = t[1];
  result.b = t[2];
  if (model == DecayModel::kFirst) result.c = t[3];
  result.converged = best->converged;
  result.chi_squared = best->objective;
  result.residual_norm = std::sqrt(best->objective);
  if (!result.converged) result.warnings.push_back("non-convergence: iteration limit reached");

  // Covariance: absolute sigma for weighted data, RSS/dof scaling otherwise.
  const Eigen::MatrixXd j = problem.jacobian(t);
  const Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(problem.w.data(), j.rows());
  const Eigen::MatrixXd jtwj = j.transpose() * wv.asDiagonal() * j;
  const auto decomposition = jtwj.completeOrthogonalDecomposition();
  if (decomposition.rank() < jtwj.rows()) result.warnings.push_back("singular covariance: parameters not identifiable");
  Eigen::MatrixXd cov = decomposition.pseudoInverse();
  if (!problem.weighted) cov *= result.dof > 0 ? best->objective / static_cast<double>(result.dof) : 0.0;
  auto err = [&](Eigen::Index k) { return std::sqrt(std::max(0.0, cov(k, k))); };
  result.p_err = err(0);
  result.a_err = err(1);
  result.b_err = err(2);
  if (model == DecayModel::kFirst) {
    result.c_err = err(3);
    if (std::abs(result.c) < 2.0 * result.c_err) {
      result.warnings.push_back("ill-conditioned: C1 statistically indistinguishable from 0");
    }
  }
  return result;
}

inline FitResult fit_zeroth(const DecayDataset& data, const FitOptions& options = {}) {
  return fit_decay(data, DecayModel::kZeroth, options);
}

inline FitResult fit_first(const DecayDataset& data, const FitOptions& options = {}) {
  return fit_decay(data, DecayModel::kFirst, options);
}

struct BootstrapResult {
  std::size_t resamples = 0;
  double p_err = 0.0, a_err = 0.0, b_err = 0.0, c_err = 0.0;
  std::vector<double> p_samples;
};

namespace detail {

/// Half the central 68.27% percentile width.
inline double percentile_sigma(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(samples.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, samples.size() - 1);
    return samples[lo] + (pos - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
  };
  return 0.5 * (quantile(0.841344746) - quantile(0.158655254));
}

}  // namespace detail

/// Nonparametric bootstrap over the K sequences at each length.
inline BootstrapResult bootstrap_uncertainty(const DecayDataset& data, DecayModel model, std::size_t resamples = 1000,
                                             std::uint64_t seed = 0, unsigned threads = 1) {
  if (!data.has_raw()) throw Error(ErrorKind::kMissingRawData, "bootstrap needs per-sequence survivals");
  if (resamples < 100) throw Error(ErrorKind::kOutOfRange, "bootstrap needs at least 100 resamples");
  std::vector<FitResult> fits(resamples);
  parallel_for(resamples, threads, [&](std::size_t b) {
    Rng rng(mix_seed(seed, b));
    DecayDataset sample;
    sample.mode = data.mode;
    std::vector<double> drawn;
    for (std::size_t i = 0; i < data.points.size(); ++i) {
      const auto& raw = data.raw[i];
      std::uniform_int_distribution<std::size_t> pick(0, raw.size() - 1);
      drawn.clear();
      for (std::size_t k = 0; k < raw.size(); ++k) drawn.push_back(raw[pick(rng)]);
      sample.points.push_back(summarize(data.points[i].m, drawn));
    }
    fits[b] = fit_decay(sample, model);
  });
  BootstrapResult out;
  out.resamples = resamples;
  std::vector<double> a, bb, c;
  for (const auto& f : fits) {
    out.p_samples.push_back(f.p);
    a.push_back(f.a);
    bb.push_back(f.b);
    c.push_back(f.c);
  }
  out.p_err = detail::percentile_sigma(out.p_samples);
  out.a_err = detail::percentile_sigma(a);
  out.b_err = detail::percentile_sigma(bb);
  out.c_err = model == DecayModel::kFirst ? detail::percentile_sigma(c) : 0.0;
  return out;
}

}  // namespace irb
