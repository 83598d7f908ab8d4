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

#ifndef FEDPRUNE_GSM_H_
#define FEDPRUNE_GSM_H_

#include <span>
#include <vector>

#include "fedprune/types.h"

namespace fedprune::gsm {

enum class SigmaEstimation { kFixed, kRobustMad };

struct GsmConfig {
  double sigma_w_sq = 1.0;  // used as-is in kFixed mode
  double epsilon = 1e-6;    // offset inside log(theta + epsilon)
  int max_iters = 1000;
  double rel_tol = 1e-12;
  SigmaEstimation sigma_estimation = SigmaEstimation::kRobustMad;
};

void validate(const GsmConfig &cfg);

struct GsmState {
  std::vector<double> theta;  // scale multipliers, >= 0
  std::vector<double> alpha;  // Gaussian factors
  double objective = 0.0;
  double sigma_w_sq = 0.0;    // noise variance actually used
  int iterations = 0;
  // objective[0] is the initial point, then one entry per alternating iteration.
  std::vector<double> history;
};

struct DenoiseResult {
  ScoreVector clean;
  GsmState state;
};

/// Noise variance for the denoiser. kFixed passes cfg.sigma_w_sq through;
/// kRobustMad returns (1.4826 * MAD)^2 floored at 1e-12.
double estimate_noise_variance(const ScoreVector &scores, const GsmConfig &cfg);

/// Minimizes f(t) = a t^2 + b t + c log(t + epsilon) over t >= 0 by comparing f at
/// zero and at the nonnegative roots of 2 a t^2 + b t + c = 0.
double solve_theta_scalar(double a, double b, double c, double epsilon);

/// Scalar objective minimized by solve_theta_scalar.
double theta_scalar_objective(double a, double b, double c, double epsilon, double theta);

std::vector<double> solve_theta(std::span<const double> alpha, std::span<const double> noisy,
                                double sigma_w_sq, double epsilon);
std::vector<double> solve_theta(std::span<const double> alpha, const ScoreVector &scores,
                                const GsmConfig &cfg);

// alpha_j = theta_j * s_j / (theta_j^2 + sigma_w_sq)
std::vector<double> solve_alpha(std::span<const double> theta, std::span<const double> noisy,
                                double sigma_w_sq);
std::vector<double> solve_alpha(std::span<const double> theta, const ScoreVector &scores,
                                const GsmConfig &cfg);

/// Joint objective
///   ||s - theta*alpha||^2 + sigma^2 ||alpha||^2 + 4 sigma^2 sum log(theta + epsilon).
double joint_objective(std::span<const double> noisy, std::span<const double> theta,
                       std::span<const double> alpha, double sigma_w_sq, double epsilon);

/// MAP estimate of the clean scores under a Gaussian-scale-mixture prior with a
/// Jeffreys hyperprior, by alternating exact minimization over theta and alpha.
/// Starts from theta = |s|, alpha = sign(s). Output keeps the input client order.
DenoiseResult denoise_scores(const ScoreVector &scores, const GsmConfig &cfg);

}  // namespace fedprune::gsm

#endif  // FEDPRUNE_GSM_H_
