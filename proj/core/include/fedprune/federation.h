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

#ifndef FEDPRUNE_FEDERATION_H_
#define FEDPRUNE_FEDERATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedprune/contribution.h"
#include "fedprune/models.h"
#include "fedprune/types.h"

namespace fedprune::federation {

enum class Optimizer { kFedAvg, kFedProx };

std::string to_string(Optimizer opt);
Optimizer parse_optimizer(const std::string &name);

struct TrainConfig {
  int local_epochs = 5;
  int batch_size = 32;
  double learning_rate = 0.05;
  Optimizer optimizer = Optimizer::kFedAvg;
  double prox_mu = 0.0;  // > 0 iff optimizer == kFedProx
};

void validate(const TrainConfig &cfg);

struct ClientState {
  ClientId client_id = 0;
  std::vector<models::Sample> data;  // local training set
  ParamVector local_params;
  std::optional<contribution::ContributionScore> last_score;
};

struct ClientResult {
  ParamVector params;
  contribution::ContributionScore score;
};

// Mean cross-entropy gradient over data[batch], plus mu * (w - global) under FedProx.
ParamVector training_gradient(const models::ModelSpec &spec, std::span<const double> params,
                              std::span<const models::Sample> data,
                              std::span<const std::size_t> batch, std::span<const double> global,
                              const TrainConfig &cfg);

/// E epochs of mini-batch SGD from the global parameters. Each epoch reshuffles
/// the local data with a stream derived from (seed, epoch); the last batch may
/// be short. The contribution score is computed afterwards from an evaluation
/// pass over the local training set, against the received global parameters.
ClientResult client_update(const models::ModelSpec &spec, const ClientState &state,
                           std::span<const double> global_params, const TrainConfig &cfg, int round,
                           std::uint64_t seed);

// p_k keyed by client id; sums to 1 over the participating set.
using AggregationWeights = std::map<ClientId, double>;

AggregationWeights compute_weights(std::span<const ClientState> participants);
AggregationWeights compute_weights(std::span<const ClientId> ids, std::span<const std::size_t> sizes);

/// Sum of p_k w_k accumulated in ascending client-id order.
ParamVector aggregate(const std::map<ClientId, ParamVector> &updates,
                      const AggregationWeights &weights);

struct Evaluation {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

Evaluation evaluate(const models::ModelSpec &spec, std::span<const double> global_params,
                    std::span<const models::Sample> test_samples);

struct RoundResult {
  ParamVector global_params;
  AggregationWeights weights;
  std::vector<contribution::ContributionScore> scores;  // ascending client id
};

/// One communication round over the participating clients: broadcast, local
/// updates fanned out to `workers` threads, then the fixed-order aggregation.
/// Client k's stream seed is derive_seed(seed, {k, round}). Output does not
/// depend on the worker count.
RoundResult run_round(const models::ModelSpec &spec, std::span<ClientState> clients,
                      std::span<const ClientId> participants, std::span<const double> global_params,
                      const TrainConfig &cfg, int round, std::uint64_t seed, int workers = 1);

}  // namespace fedprune::federation

#endif  // FEDPRUNE_FEDERATION_H_
