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

#include "fedprune/experiment.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "fedprune/data.h"
#include "fedprune/federation.h"
#include "fedprune/rng.h"

namespace fedprune::harness {
namespace {

enum SeedStream : std::uint64_t { kDataStream = 1, kPartitionStream, kHoldoutStream, kInitStream, kTrainStream };

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

data::Dataset build_dataset(const ExperimentConfig &cfg) {
  const DatasetConfig &d = cfg.dataset;
  if (d.source == DatasetSource::kCsv) {
    return data::load_csv(d.path);
  }
  return data::generate_blobs(d.num_classes, d.samples_per_class, d.input_dim, d.spread,
                              derive_seed(cfg.seed, {kDataStream}));
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
  validate(cfg);

  const data::Dataset dataset = build_dataset(cfg);
  models::ModelSpec spec = cfg.model;
  spec.input_dim = dataset.input_dim();
  spec.num_classes = dataset.num_classes;
  models::validate(spec);

  data::Partition partition;
  try {
    partition = data::make_partition(cfg.partition, dataset, cfg.num_clients,
                                     derive_seed(cfg.seed, {kPartitionStream}));
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  const data::TrainTestSplit split =
      data::hold_out(partition, cfg.test_fraction, derive_seed(cfg.seed, {kHoldoutStream}));

  std::vector<federation::ClientState> clients(cfg.num_clients);
  for (int k = 0; k < cfg.num_clients; ++k) {
    clients[k].client_id = k;
    for (std::size_t i : split.train[k]) clients[k].data.push_back(dataset.samples[i]);
  }
  std::vector<models::Sample> test_pool;
  for (std::size_t i : split.test_pool) test_pool.push_back(dataset.samples[i]);
  if (test_pool.empty()) {
    throw ConfigError("held-out test pool is empty; increase test_fraction or dataset size");
  }

  ExperimentResult result;
  result.test_pool_size = test_pool.size();
  ParamVector global = models::init_params(spec, derive_seed(cfg.seed, {kInitStream}));
  pruning::ActiveSet active = pruning::ActiveSet::all(cfg.num_clients);
  pruning::CommLedger ledger;
  const std::uint64_t train_seed = derive_seed(cfg.seed, {kTrainStream});

  for (int t = 0; t < cfg.rounds; ++t) {
    try {
      const std::vector<ClientId> participants = active.active;
      federation::RoundResult round = federation::run_round(
          spec, clients, participants, global, cfg.train, t, train_seed, cfg.workers);
      global = std::move(round.global_params);

      ScoreVector raw;
      for (const auto &s : round.scores) {
        raw.client_ids.push_back(s.client_id);
        raw.values.push_back(s.score);
      }
      pruning::PruneOutcome outcome = pruning::step_active_set(active, raw, t, cfg.schedule, cfg.gsm);
      ledger = pruning::record_round(ledger, static_cast<int>(participants.size()), cfg.num_clients);
      const federation::Evaluation eval = federation::evaluate(spec, global, test_pool);

      RoundMetrics m;
      m.round = t;
      m.accuracy = eval.accuracy;
      m.mean_loss = eval.mean_loss;
      m.active_count = static_cast<int>(participants.size());
      m.pruned_this_round = outcome.events;
      m.relative_comm_cost = ledger.relative_cost();
      for (const auto &[id, p] : round.weights) m.weight_sum += p;
      m.client_ids = raw.client_ids;
      m.raw_scores = raw.values;
      m.denoised_scores = outcome.denoised.clean.values;
      for (ClientId id : raw.client_ids) {
        m.active_after.push_back(std::binary_search(outcome.next.active.begin(),
                                                    outcome.next.active.end(), id));
      }
      result.rounds.push_back(std::move(m));
      active = std::move(outcome.next);
    } catch (const RoundError &) {
      throw;
    } catch (const std::exception &e) {
      throw RoundError(t, e.what());
    }
  }

  result.final_active = std::move(active);
  result.ledger = ledger;
  result.final_params = std::move(global);
  return result;
}

std::string format_round_table(const std::vector<RoundMetrics> &series) {
  std::string out = "round,accuracy,mean_loss,active_count,relative_comm_cost,pruned_ids\n";
  for (const RoundMetrics &m : series) {
    std::string pruned;
    for (const auto &e : m.pruned_this_round) {
      if (!pruned.empty()) pruned += ';';
      pruned += std::to_string(e.client_id);
    }
    out += std::to_string(m.round) + ',' + num(m.accuracy) + ',' + num(m.mean_loss) + ',' +
           std::to_string(m.active_count) + ',' + num(m.relative_comm_cost) + ',' + pruned + '\n';
  }
  return out;
}

std::string format_score_table(const std::vector<RoundMetrics> &series) {
  std::string out = "round,client_id,raw_score,denoised_score,active\n";
  for (const RoundMetrics &m : series) {
    for (std::size_t j = 0; j < m.client_ids.size(); ++j) {
      out += std::to_string(m.round) + ',' + std::to_string(m.client_ids[j]) + ',' +
             num(m.raw_scores[j]) + ',' + num(m.denoised_scores[j]) + ',' +
             (m.active_after[j] ? "1" : "0") + '\n';
    }
  }
  return out;
}

void emit_metrics(const std::vector<RoundMetrics> &series, const std::filesystem::path &dir) {
  if (series.empty()) {
    throw std::invalid_argument("emit_metrics: empty series");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  const auto write = [](const std::filesystem::path &path, const std::string &body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
    if (!out.flush()) throw std::runtime_error("failed writing " + path.string());
  };
  write(dir / kRoundTableFile, format_round_table(series));
  write(dir / kScoreTableFile, format_score_table(series));
}

}  // namespace fedprune::harness
