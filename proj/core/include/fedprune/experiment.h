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

#ifndef FEDPRUNE_EXPERIMENT_H_
#define FEDPRUNE_EXPERIMENT_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedprune/config.h"
#include "fedprune/pruning.h"

namespace fedprune::harness {

// Raised when a round fails; carries the round index for the CLI's exit path.
class RoundError : public std::runtime_error {
 public:
  RoundError(int round, const std::string &what)
      : std::runtime_error("round " + std::to_string(round) + ": " + what), round_(round) {}
  int round() const { return round_; }

 private:
  int round_;
};

struct RoundMetrics {
  int round = 0;
  double accuracy = 0.0;
  double mean_loss = 0.0;
  int active_count = 0;  // clients that trained this round
  std::vector<pruning::PruneEvent> pruned_this_round;
  double relative_comm_cost = 1.0;
  double weight_sum = 0.0;  // sum of p_k over this round's participants

  // Per participating client, ascending id.
  std::vector<ClientId> client_ids;
  std::vector<double> raw_scores;
  std::vector<double> denoised_scores;
  std::vector<bool> active_after;
};

struct ExperimentResult {
  std::vector<RoundMetrics> rounds;
  pruning::ActiveSet final_active;
  pruning::CommLedger ledger;
  ParamVector final_params;
  std::size_t test_pool_size = 0;
};

/// Server loop: broadcast, local updates over U_t, aggregate, collect scores,
/// update the active set, record communication, evaluate. Deterministic in cfg.
ExperimentResult run_experiment(const ExperimentConfig &cfg);

std::string format_round_table(const std::vector<RoundMetrics> &series);
std::string format_score_table(const std::vector<RoundMetrics> &series);

inline constexpr const char *kRoundTableFile = "rounds.csv";
inline constexpr const char *kScoreTableFile = "scores.csv";

/// Writes rounds.csv and scores.csv into `dir`, creating it if needed.
void emit_metrics(const std::vector<RoundMetrics> &series, const std::filesystem::path &dir);

}  // namespace fedprune::harness

#endif  // FEDPRUNE_EXPERIMENT_H_
