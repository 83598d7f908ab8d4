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

#ifndef FEDPRUNE_TYPES_H_
#define FEDPRUNE_TYPES_H_

#include <cstdint>
#include <vector>

namespace fedprune {

using ClientId = std::int32_t;

// Flat model parameters; the unit exchanged between server and clients.
using ParamVector = std::vector<double>;

// Per-client scalar scores for one round, parallel to client_ids.
struct ScoreVector {
  std::vector<double> values;
  std::vector<ClientId> client_ids;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
};

// Throws std::invalid_argument unless lengths match, size >= 1 and all values are finite.
void validate(const ScoreVector &scores);

}  // namespace fedprune

#endif  // FEDPRUNE_TYPES_H_
