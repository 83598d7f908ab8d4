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

#ifndef FEDPRUNE_PRUNING_H_
#define FEDPRUNE_PRUNING_H_

#include <cstdint>
#include <vector>

#include "fedprune/gsm.h"
#include "fedprune/types.h"

namespace fedprune::pruning {

struct PrunedClient {
  ClientId client_id = 0;
  int round = 0;
};

struct ActiveSet {
  std::vector<ClientId> active;  // ascending
  std::vector<PrunedClient> pruned;

  static ActiveSet all(int num_clients);
  std::size_t total_clients() const { return active.size() + pruned.size(); }
};

struct PruneSchedule {
  int warmup_rounds = 20;
  double target_ratio = 0.0;  // lambda in [0, 1)
  int max_prunes_per_round = 1;

  // max(1, N - round(lambda * N))
  int floor(int num_clients) const;
};

void validate(const PruneSchedule &schedule);

struct PruneEvent {
  int round = 0;
  ClientId client_id = 0;
  double raw_score = 0.0;
  double denoised_score = 0.0;
};

struct PruneOutcome {
  ActiveSet next;
  gsm::DenoiseResult denoised;  // computed every round, also during warm-up
  std::vector<PruneEvent> events;
};

/// Denoises the round's scores and, outside warm-up and above the floor, prunes
/// up to max_prunes_per_round clients whose denoised score is zero, lowest raw
/// score first. The client with the highest raw score is never pruned.
/// scores.client_ids must equal current.active.
PruneOutcome step_active_set(const ActiveSet &current, const ScoreVector &scores, int round,
                             const PruneSchedule &schedule, const gsm::GsmConfig &gsm_cfg);

ActiveSet update_active_set(const ActiveSet &current, const ScoreVector &scores, int round,
                            const PruneSchedule &schedule, const gsm::GsmConfig &gsm_cfg);

struct CommLedger {
  std::int64_t uploads = 0;
  std::int64_t full_baseline = 0;
  int rounds_completed = 0;

  // uploads / full_baseline; 1.0 before the first round
  double relative_cost() const;
};

CommLedger record_round(const CommLedger &ledger, int participants, int total_clients);

}  // namespace fedprune::pruning

#endif  // FEDPRUNE_PRUNING_H_
