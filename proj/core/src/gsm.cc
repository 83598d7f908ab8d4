/**
 * Copyright 2026 The fedprune Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fedprune/gsm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fedprune::gsm {
namespace {

constexpr double kMadToSigma = 1.4826;
constexpr double kVarianceFloor = 1e-12;

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (n % 2 == 1) {
    return upper;
  }
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("length mismatch between GSM factors and scores");
  }
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

void validate(const GsmConfig &cfg) {
  if (!(cfg.sigma_w_sq > 0.0) || !(cfg.epsilon > 0.0)) {
    throw std::invalid_argument("invalid GSM constants");
  }
  if (cfg.max_iters < 1 || !(cfg.rel_tol > 0.0)) {
    throw std::invalid_argument("invalid GSM iteration settings");
  }
}

double estimate_noise_variance(const ScoreVector &scores, const GsmConfig &cfg) {
  if (scores.values.empty()) {
    throw std::invalid_argument("empty scores");
  }
  if (cfg.sigma_estimation == SigmaEstimation::kFixed) {
    return cfg.sigma_w_sq;
  }
  const double center = median(scores.values);
  std::vector<double> deviations(scores.values.size());
  std::transform(scores.values.begin(), scores.values.end(), deviations.begin(),
                 [center](double v) { return std::abs(v - center); });
  const double sigma = kMadToSigma * median(std::move(deviations));
  return std::max(sigma * sigma, kVarianceFloor);
}

double theta_scalar_objective(double a, double b, double c, double epsilon, double theta) {
  return a * theta * theta + b * theta + c * std::log(theta + epsilon);
}

double solve_theta_scalar(double a, double b, double c, double epsilon) {
  if (!(c > 0.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("invalid GSM constants");
  }
  if (a < 0.0) {
    throw std::invalid_argument("quadratic coefficient must be nonnegative");
  }
  if (a == 0.0) {
    return 0.0;
  }
  const double center = -b / (4.0 * a);
  const double delta = b * b / (16.0 * a * a) - c / (2.0 * a);
  if (delta < 0.0) {
    return 0.0;
  }
  const double root = std::sqrt(delta);

  double best = 0.0;
  double best_value = theta_scalar_objective(a, b, c, epsilon, 0.0);
  for (double candidate : {center + root, center - root}) {
    if (candidate < 0.0) {
      continue;
    }
    const double value = theta_scalar_objective(a, b, c, epsilon, candidate);
    if (value < best_value) {
      best = candidate;
      best_value = value;
    }
  }
  return best;
}

std::vector<double> solve_theta(std::span<const double> alpha, std::span<const double> noisy,
                                double sigma_w_sq, double epsilon) {
  check_lengths(alpha.size(), noisy.size());
  const double c = 4.0 * sigma_w_sq;
  std::vector<double> theta(alpha.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    theta[j] = solve_theta_scalar(alpha[j] * alpha[j], -2.0 * alpha[j] * noisy[j], c, epsilon);
  }
  return theta;
}

std::vector<double> solve_theta(std::span<const double> alpha, const ScoreVector &scores,
                                const GsmConfig &cfg) {
  return solve_theta(alpha, scores.values, cfg.sigma_w_sq, cfg.epsilon);
}

std::vector<double> solve_alpha(std::span<const double> theta, std::span<const double> noisy,
                                double sigma_w_sq) {
  check_lengths(theta.size(), noisy.size());
  if (!(sigma_w_sq > 0.0)) {
    throw std::invalid_argument("invalid GSM constants");
  }
  std::vector<double> alpha(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    alpha[j] = theta[j] * noisy[j] / (theta[j] * theta[j] + sigma_w_sq);
  }
  return alpha;
}

std::vector<double> solve_alpha(std::span<const double> theta, const ScoreVector &scores,
                                const GsmConfig &cfg) {
  return solve_alpha(theta, scores.values, cfg.sigma_w_sq);
}

double joint_objective(std::span<const double> noisy, std::span<const double> theta,
                       std::span<const double> alpha, double sigma_w_sq, double epsilon) {
  check_lengths(theta.size(), noisy.size());
  check_lengths(alpha.size(), noisy.size());
  double fit = 0.0;
  double ridge = 0.0;
  double barrier = 0.0;
  for (std::size_t j = 0; j < noisy.size(); ++j) {
    const double r = noisy[j] - theta[j] * alpha[j];
    fit += r * r;
    ridge += alpha[j] * alpha[j];
    barrier += std::log(theta[j] + epsilon);
  }
  return fit + sigma_w_sq * ridge + 4.0 * sigma_w_sq * barrier;
}

DenoiseResult denoise_scores(const ScoreVector &scores, const GsmConfig &cfg) {
  validate(scores);
  validate(cfg);

  const std::vector<double> &noisy = scores.values;
  const std::size_t n = noisy.size();
  const double sigma_w_sq = estimate_noise_variance(scores, cfg);

  GsmState state;
  state.sigma_w_sq = sigma_w_sq;
  state.theta.resize(n);
  state.alpha.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    state.theta[j] = std::abs(noisy[j]);
    state.alpha[j] = sign(noisy[j]);
  }
  state.objective = joint_objective(noisy, state.theta, state.alpha, sigma_w_sq, cfg.epsilon);
  state.history.push_back(state.objective);

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    state.theta = solve_theta(state.alpha, noisy, sigma_w_sq, cfg.epsilon);
    state.alpha = solve_alpha(state.theta, noisy, sigma_w_sq);
    const double previous = state.objective;
    state.objective = joint_objective(noisy, state.theta, state.alpha, sigma_w_sq, cfg.epsilon);
    state.history.push_back(state.objective);
    state.iterations = iter + 1;

    const double scale = std::max(std::abs(previous), std::numeric_limits<double>::min());
    if (std::abs(previous - state.objective) / scale < cfg.rel_tol) {
      break;
    }
  }

  DenoiseResult result;
  result.clean.client_ids = scores.client_ids;
  result.clean.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    result.clean.values[j] = state.theta[j] * state.alpha[j];
  }
  result.state = std::move(state);
  return result;
}

}  // namespace fedprune::gsm
