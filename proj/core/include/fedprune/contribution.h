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

#ifndef FEDPRUNE_CONTRIBUTION_H_
#define FEDPRUNE_CONTRIBUTION_H_

#include <span>

#include "fedprune/types.h"

namespace fedprune::contribution {

struct ContributionScore {
  ClientId client_id = 0;
  double model_diff = 0.0;    // squared l2 distance to the received global model
  double data_quality = 0.0;  // |D| * rms(per-sample loss)
  double score = 0.0;         // model_diff * data_quality
  int round = 0;
};

/// Squared Euclidean distance between the trained local parameters and the
/// global parameters the client started from.
double model_difference(std::span<const double> local, std::span<const double> global_prev);

/// |D| * sqrt(mean(loss^2)) over the client's training samples.
double data_quality(std::span<const double> per_sample_losses, std::size_t data_size);

double contribution_score(double model_diff, double data_quality);

ContributionScore make_score(ClientId client, int round, std::span<const double> local,
                             std::span<const double> global_prev,
                             std::span<const double> per_sample_losses);

}  // namespace fedprune::contribution

#endif  // FEDPRUNE_CONTRIBUTION_H_
