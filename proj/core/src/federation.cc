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

#include "fedprune/federation.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "fedprune/rng.h"

namespace fedprune::federation {

std::string to_string(Optimizer opt) { return opt == Optimizer::kFedAvg ? "fedavg" : "fedprox"; }

Optimizer parse_optimizer(const std::string &name) {
  if (name == "fedavg") return Optimizer::kFedAvg;
  if (name == "fedprox") return Optimizer::kFedProx;
  throw std::invalid_argument("unknown optimizer: " + name);
}

void validate(const TrainConfig &cfg) {
  if (cfg.local_epochs < 1) throw std::invalid_argument("local_epochs must be >= 1");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(cfg.learning_rate >= 0.0)) throw std::invalid_argument("learning_rate must be >= 0");
  if (!(cfg.prox_mu >= 0.0)) throw std::invalid_argument("prox_mu must be >= 0");
  const bool prox = cfg.optimizer == Optimizer::kFedProx;
  if (prox != (cfg.prox_mu > 0.0)) {
    throw std::invalid_argument("prox_mu must be positive exactly when the optimizer is fedprox");
  }
}

ParamVector training_gradient(const models::ModelSpec &spec, std::span<const double> params,
                              std::span<const models::Sample> data,
                              std::span<const std::size_t> batch, std::span<const double> global,
                              const TrainConfig &cfg) {
  if (batch.empty()) {
    throw std::invalid_argument("training_gradient: empty batch");
  }
  ParamVector grad(params.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i : batch) {
    models::accumulate_gradient(spec, params, data[i], scale, grad);
  }
  if (cfg.optimizer == Optimizer::kFedProx) {
    for (std::size_t p = 0; p < grad.size(); ++p) {
      grad[p] += cfg.prox_mu * (params[p] - global[p]);
    }
  }
  return grad;
}

ClientResult client_update(const models::ModelSpec &spec, const ClientState &state,
                           std::span<const double> global_params, const TrainConfig &cfg, int round,
                           std::uint64_t seed) {
  if (state.data.empty()) {
    throw std::invalid_argument("client " + std::to_string(state.client_id) + " has no data");
  }
  if (global_params.size() != models::parameter_count(spec)) {
    throw std::invalid_argument("global parameters do not match model spec");
  }
  const std::span<const models::Sample> data = state.data;
  ParamVector w(global_params.begin(), global_params.end());

  std::vector<std::size_t> order(data.size());
  const std::size_t batch_size = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(epoch)}));
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t len = std::min(batch_size, order.size() - start);
      const std::span<const std::size_t> batch(order.data() + start, len);
      const ParamVector g = training_gradient(spec, w, data, batch, global_params, cfg);
      for (std::size_t p = 0; p < w.size(); ++p) {
        w[p] -= cfg.learning_rate * g[p];
      }
    }
  }

  std::vector<double> losses(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    losses[i] = models::per_sample_loss(spec, w, data[i]);
  }
  ClientResult result;
  result.score = contribution::make_score(state.client_id, round, w, global_params, losses);
  result.params = std::move(w);
  return result;
}

AggregationWeights compute_weights(std::span<const ClientId> ids, std::span<const std::size_t> sizes) {
  if (ids.empty()) {
    throw std::invalid_argument("compute_weights: empty participant set");
  }
  if (ids.size() != sizes.size()) {
    throw std::invalid_argument("compute_weights: ids and sizes differ in length");
  }
  const double total = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
  if (!(total > 0.0)) {
    throw std::invalid_argument("compute_weights: participants hold no data");
  }
  AggregationWeights w;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!w.emplace(ids[i], static_cast<double>(sizes[i]) / total).second) {
      throw std::invalid_argument("compute_weights: duplicate client id");
    }
  }
  return w;
}

AggregationWeights compute_weights(std::span<const ClientState> participants) {
  std::vector<ClientId> ids;
  std::vector<std::size_t> sizes;
  for (const ClientState &c : participants) {
    ids.push_back(c.client_id);
    sizes.push_back(c.data.size());
  }
  return compute_weights(ids, sizes);
}

ParamVector aggregate(const std::map<ClientId, ParamVector> &updates,
                      const AggregationWeights &weights) {
  if (updates.empty()) {
    throw std::invalid_argument("aggregate: no updates");
  }
  if (updates.size() != weights.size()) {
    throw std::invalid_argument("aggregate: weight keys do not match update keys");
  }
  const std::size_t dim = updates.begin()->second.size();
  ParamVector out(dim, 0.0);
  for (const auto &[id, vec] : updates) {
    const auto it = weights.find(id);
    if (it == weights.end()) {
      throw std::invalid_argument("aggregate: missing weight for client " + std::to_string(id));
    }
    if (vec.size() != dim) {
      throw std::invalid_argument("aggregate: parameter length mismatch");
    }
    const double p = it->second;
    for (std::size_t i = 0; i < dim; ++i) {
      out[i] += p * vec[i];
    }
  }
  return out;
}

Evaluation evaluate(const models::ModelSpec &spec, std::span<const double> global_params,
                    std::span<const models::Sample> test_samples) {
  if (test_samples.empty()) {
    throw std::invalid_argument("evaluate: empty test set");
  }
  std::size_t correct = 0;
  double loss = 0.0;
  for (const models::Sample &s : test_samples) {
    const std::vector<double> z = models::logits(spec, global_params, s.features);
    const int pred = static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
    if (pred == s.label) ++correct;
    loss += models::per_sample_loss(spec, global_params, s);
  }
  const double n = static_cast<double>(test_samples.size());
  return {static_cast<double>(correct) / n, loss / n};
}

RoundResult run_round(const models::ModelSpec &spec, std::span<ClientState> clients,
                      std::span<const ClientId> participants, std::span<const double> global_params,
                      const TrainConfig &cfg, int round, std::uint64_t seed, int workers) {
  if (participants.empty()) {
    throw std::invalid_argument("run_round: no participants");
  }
  std::vector<ClientId> ids(participants.begin(), participants.end());
  std::sort(ids.begin(), ids.end());
  for (ClientId id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= clients.size()) {
      throw std::invalid_argument("run_round: unknown client " + std::to_string(id));
    }
  }

  std::vector<ClientResult> results(ids.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < ids.size(); i = next.fetch_add(1)) {
      try {
        const ClientState &client = clients[ids[i]];
        const std::uint64_t client_seed =
            derive_seed(seed, {static_cast<std::uint64_t>(ids[i]), static_cast<std::uint64_t>(round)});
        results[i] = client_update(spec, client, global_params, cfg, round, client_seed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int pool = std::clamp(workers, 1, static_cast<int>(ids.size()));
  if (pool == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (int t = 0; t < pool; ++t) threads.emplace_back(work);
    for (auto &t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::size_t> sizes;
  std::map<ClientId, ParamVector> updates;
  RoundResult out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    ClientState &client = clients[ids[i]];
    sizes.push_back(client.data.size());
    client.local_params = results[i].params;
    client.last_score = results[i].score;
    out.scores.push_back(results[i].score);
    updates.emplace(ids[i], std::move(results[i].params));
  }
  out.weights = compute_weights(ids, sizes);
  out.global_params = aggregate(updates, out.weights);
  return out;
}

}  // namespace fedprune::federation
