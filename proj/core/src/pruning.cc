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

#include "fedprune/pruning.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fedprune::pruning {

ActiveSet ActiveSet::all(int num_clients) {
  if (num_clients < 1) {
    throw std::invalid_argument("need at least one client");
  }
  ActiveSet s;
  s.active.resize(num_clients);
  std::iota(s.active.begin(), s.active.end(), 0);
  return s;
}

int PruneSchedule::floor(int num_clients) const {
  const long removable = std::lround(target_ratio * static_cast<double>(num_clients));
  return std::max(1, num_clients - static_cast<int>(removable));
}

void validate(const PruneSchedule &schedule) {
  if (schedule.warmup_rounds < 0) throw std::invalid_argument("warmup_rounds must be >= 0");
  if (!(schedule.target_ratio >= 0.0 && schedule.target_ratio < 1.0)) {
    throw std::invalid_argument("prune ratio must lie in [0, 1)");
  }
  if (schedule.max_prunes_per_round < 1) {
    throw std::invalid_argument("max_prunes_per_round must be >= 1");
  }
}

PruneOutcome step_active_set(const ActiveSet &current, const ScoreVector &scores, int round,
                             const PruneSchedule &schedule, const gsm::GsmConfig &gsm_cfg) {
  validate(schedule);
  validate(scores);
  if (round < 0) {
    throw std::invalid_argument("round must be >= 0");
  }
  if (scores.client_ids != current.active) {
    throw std::invalid_argument("scores do not cover exactly the active clients");
  }

  PruneOutcome out;
  out.next = current;
  out.denoised = gsm::denoise_scores(scores, gsm_cfg);

  const int total = static_cast<int>(current.total_clients());
  const int active = static_cast<int>(current.active.size());
  const int floor = schedule.floor(total);
  if (round < schedule.warmup_rounds || active <= floor) {
    return out;
  }

  const std::vector<double> &raw = scores.values;
  const std::vector<double> &clean = out.denoised.clean.values;
  const std::size_t keeper = static_cast<std::size_t>(std::max_element(raw.begin(), raw.end()) - raw.begin());

  std::vector<std::size_t> zeroed;
  for (std::size_t j = 0; j < clean.size(); ++j) {
    if (j != keeper && clean[j] <= 0.0) zeroed.push_back(j);
  }
  std::stable_sort(zeroed.begin(), zeroed.end(),
                   [&raw](std::size_t x, std::size_t y) { return raw[x] < raw[y]; });

  const std::size_t quota = std::min<std::size_t>(
      {zeroed.size(), static_cast<std::size_t>(schedule.max_prunes_per_round),
       static_cast<std::size_t>(active - floor)});
  zeroed.resize(quota);
  std::sort(zeroed.begin(), zeroed.end());

  for (std::size_t j : zeroed) {
    const ClientId id = scores.client_ids[j];
    out.events.push_back({round, id, raw[j], clean[j]});
    out.next.pruned.push_back({id, round});
  }
  std::erase_if(out.next.active, [&out](ClientId id) {
    return std::any_of(out.events.begin(), out.events.end(),
                       [id](const PruneEvent &e) { return e.client_id == id; });
  });
  return out;
}

ActiveSet update_active_set(const ActiveSet &current, const ScoreVector &scores, int round,
                            const PruneSchedule &schedule, const gsm::GsmConfig &gsm_cfg) {
  return step_active_set(current, scores, round, schedule, gsm_cfg).next;
}

double CommLedger::relative_cost() const {
  if (full_baseline == 0) return 1.0;
  return static_cast<double>(uploads) / static_cast<double>(full_baseline);
}

CommLedger record_round(const CommLedger &ledger, int participants, int total_clients) {
  if (participants < 1) {
    throw std::invalid_argument("record_round: zero participants");
  }
  if (participants > total_clients) {
    throw std::invalid_argument("record_round: more participants than clients");
  }
  CommLedger next = ledger;
  next.uploads += participants;
  next.full_baseline += total_clients;
  next.rounds_completed += 1;
  return next;
}

}  // namespace fedprune::pruning
