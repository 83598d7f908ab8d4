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

#include "fedprune/contribution.h"

#include <cmath>
#include <stdexcept>

namespace fedprune::contribution {

double model_difference(std::span<const double> local, std::span<const double> global_prev) {
  if (local.size() != global_prev.size()) {
    throw std::invalid_argument("model_difference: parameter length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < local.size(); ++i) {
    const double d = local[i] - global_prev[i];
    sum += d * d;
  }
  return sum;
}

double data_quality(std::span<const double> per_sample_losses, std::size_t data_size) {
  if (per_sample_losses.empty() || data_size == 0) {
    throw std::invalid_argument("data_quality: empty loss array");
  }
  if (per_sample_losses.size() != data_size) {
    throw std::invalid_argument("data_quality: loss count differs from data size");
  }
  double sum_sq = 0.0;
  for (double l : per_sample_losses) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("data_quality: losses must be finite and nonnegative");
    }
    sum_sq += l * l;
  }
  const double n = static_cast<double>(data_size);
  return n * std::sqrt(sum_sq / n);
}

double contribution_score(double model_diff, double data_quality) {
  return model_diff * data_quality;
}

ContributionScore make_score(ClientId client, int round, std::span<const double> local,
                             std::span<const double> global_prev,
                             std::span<const double> per_sample_losses) {
  ContributionScore s;
  s.client_id = client;
  s.round = round;
  s.model_diff = model_difference(local, global_prev);
  s.data_quality = data_quality(per_sample_losses, per_sample_losses.size());
  s.score = contribution_score(s.model_diff, s.data_quality);
  return s;
}

}  // namespace fedprune::contribution
