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

#include "fedprune/types.h"

#include <cmath>
#include <stdexcept>

namespace fedprune {

void validate(const ScoreVector &scores) {
  if (scores.values.empty()) {
    throw std::invalid_argument("empty scores");
  }
  if (scores.values.size() != scores.client_ids.size()) {
    throw std::invalid_argument("score values and client ids differ in length");
  }
  for (double v : scores.values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("non-finite score");
    }
  }
}

}  // namespace fedprune
