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

#include "fedprune/oracle.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace fedprune::oracle {

GridMinimum grid_minimize(const std::function<double(double)> &f, double lo, double hi, double step) {
  GridMinimum best{lo, f(lo)};
  const long steps = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 1; i <= steps; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    const double v = f(x);
    if (v < best.value) best = {x, v};
  }
  return best;
}

ScalarOracleReport check_theta_scalar(int draws, std::uint64_t seed, double epsilon, double grid_step,
                                      double tolerance) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(0.0, 10.0);
  std::uniform_real_distribution<double> ub(-10.0, 10.0);
  std::uniform_real_distribution<double> uc(0.0, 10.0);

  ScalarOracleReport report;
  report.draws = draws;
  report.max_gap = -INFINITY;
  for (int i = 0; i < draws; ++i) {
    const double a = ua(rng);
    const double b = ub(rng);
    double c = uc(rng);
    while (c <= 0.0) c = uc(rng);
    const auto f = [&](double t) { return a * t * t + b * t + c * std::log(t + epsilon); };
    const GridMinimum grid = grid_minimize(f, 0.0, 20.0, grid_step);
    const double solved = gsm::solve_theta_scalar(a, b, c, epsilon);
    const double gap = f(solved) - grid.value;
    if (gap > report.max_gap) {
      report.max_gap = gap;
      report.worst_a = a;
      report.worst_b = b;
      report.worst_c = c;
    }
  }
  report.passed = report.max_gap <= tolerance;
  return report;
}

AlternatingOracleReport check_alternating(int vectors, int length, std::uint64_t seed,
                                          const gsm::GsmConfig &cfg, double slack, double tolerance,
                                          double grid_step) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> log_mag(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  AlternatingOracleReport report;
  report.vectors = vectors;
  for (int v = 0; v < vectors; ++v) {
    ScoreVector scores;
    for (int j = 0; j < length; ++j) {
      double s = std::exp(log_mag(rng));
      if (unit(rng) < 0.2) s *= 1e-2;
      scores.values.push_back(s);
      scores.client_ids.push_back(j);
    }

    const gsm::DenoiseResult res = gsm::denoise_scores(scores, cfg);
    const auto &hist = res.state.history;
    for (std::size_t i = 1; i < hist.size(); ++i) {
      report.max_increase = std::max(report.max_increase, hist[i] - hist[i - 1]);
    }

    const double sigma2 = res.state.sigma_w_sq;
    const double eps = cfg.epsilon;
    for (int j = 0; j < length; ++j) {
      const double s = scores.values[j];
      const double th = res.state.theta[j];
      const double al = res.state.alpha[j];

      // Terms of the joint objective that depend on coordinate j.
      const auto in_theta = [&](double t) {
        const double r = s - t * al;
        return r * r + 4.0 * sigma2 * std::log(t + eps);
      };
      const auto in_alpha = [&](double a) {
        const double r = s - th * a;
        return r * r + sigma2 * a * a;
      };

      const double theta_hi = std::max({2.0 * th, 4.0 * std::abs(s) / std::max(std::abs(al), 1e-3), 1.0});
      const GridMinimum gt = grid_minimize(in_theta, 0.0, theta_hi, grid_step * std::max(1.0, theta_hi / 20.0));
      report.max_theta_gap = std::max(report.max_theta_gap, in_theta(th) - gt.value);

      const double alpha_span = std::max(2.0 * std::abs(al), 2.0) + std::abs(s) / std::sqrt(sigma2);
      const GridMinimum ga = grid_minimize(in_alpha, -alpha_span, alpha_span,
                                           grid_step * std::max(1.0, alpha_span / 20.0));
      report.max_alpha_gap = std::max(report.max_alpha_gap, in_alpha(al) - ga.value);
    }
  }
  report.monotone = report.max_increase <= slack;
  report.coordinate_optimal = report.max_theta_gap <= tolerance && report.max_alpha_gap <= tolerance;
  return report;
}

}  // namespace fedprune::oracle
