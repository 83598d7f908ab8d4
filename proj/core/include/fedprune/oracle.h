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

#ifndef FEDPRUNE_ORACLE_H_
#define FEDPRUNE_ORACLE_H_

#include <cstdint>
#include <functional>

#include "fedprune/gsm.h"

// Brute-force reference checks for the GSM denoiser. Everything here minimizes
// by exhaustive grid evaluation and never calls the closed-form solvers.
namespace fedprune::oracle {

struct GridMinimum {
  double argmin = 0.0;
  double value = 0.0;
};

// Evaluates f at lo, lo + step, ... up to and including hi.
GridMinimum grid_minimize(const std::function<double(double)> &f, double lo, double hi, double step);

struct ScalarOracleReport {
  int draws = 0;
  double max_gap = 0.0;  // max over draws of f(solver) - grid minimum (positive = solver worse)
  double worst_a = 0.0, worst_b = 0.0, worst_c = 0.0;
  bool passed = false;
};

/// Random (a, b, c) with a in [0, 10], b in [-10, 10], c in (0, 10]; compares
/// solve_theta_scalar against a grid over [0, 20].
ScalarOracleReport check_theta_scalar(int draws, std::uint64_t seed, double epsilon = 1e-6,
                                      double grid_step = 1e-4, double tolerance = 1e-6);

struct AlternatingOracleReport {
  int vectors = 0;
  double max_increase = 0.0;        // largest per-iteration objective increase
  double max_theta_gap = 0.0;       // per-coordinate objective gap vs grid, theta block
  double max_alpha_gap = 0.0;       // same for the alpha block
  bool monotone = false;
  bool coordinate_optimal = false;
};

/// Random score vectors (log-normal magnitudes, occasional near-zero entries).
/// For each, runs denoise_scores, checks the objective history, then grid-minimizes
/// the joint objective one coordinate at a time with the other block held at the
/// solver's final values.
AlternatingOracleReport check_alternating(int vectors, int length, std::uint64_t seed,
                                          const gsm::GsmConfig &cfg, double slack = 1e-9,
                                          double tolerance = 1e-4, double grid_step = 1e-3);

}  // namespace fedprune::oracle

#endif  // FEDPRUNE_ORACLE_H_
