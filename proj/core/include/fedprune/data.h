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

#ifndef FEDPRUNE_DATA_H_
#define FEDPRUNE_DATA_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fedprune/models.h"

namespace fedprune::data {

struct Dataset {
  std::vector<models::Sample> samples;
  int num_classes = 0;

  std::size_t size() const { return samples.size(); }
  int input_dim() const { return samples.empty() ? 0 : static_cast<int>(samples.front().features.size()); }
};

// assignments[k] holds the dataset indices owned by client k.
struct Partition {
  std::vector<std::vector<std::size_t>> assignments;

  std::size_t num_clients() const { return assignments.size(); }
};

enum class PartitionScheme { kIid, kNonIidShards };

std::string to_string(PartitionScheme scheme);
PartitionScheme parse_partition_scheme(const std::string &name);

// Number of clients and shard layout used by partition_noniid_shards.
inline constexpr int kShardClients = 20;
inline constexpr int kIidClientsInShardScheme = 10;
inline constexpr int kShardCount = 20;
inline constexpr int kShardsPerClient = 2;

/// Isotropic Gaussian clusters, one per class, with class means drawn from
/// N(0, 3^2 I). Samples are ordered by class.
Dataset generate_blobs(int num_classes, int samples_per_class, int input_dim, double spread,
                       std::uint64_t seed);

/// Reads one sample per line: comma-separated features followed by an integer
/// label. Blank lines and lines starting with '#' are skipped.
Dataset load_csv(const std::filesystem::path &path);

/// Shuffle, then equal split; the first (n mod N) clients get one extra sample.
Partition partition_iid(const Dataset &dataset, int num_clients, std::uint64_t seed);

/// 20 clients. Twenty single-label shards of size floor(0.2 n / 20) are cut,
/// shard counts apportioned across labels by label frequency (largest remainder),
/// and dealt two per client to clients 10-19 after a random shuffle. All
/// remaining samples (about 80%) are split IID over clients 0-9.
Partition partition_noniid_shards(const Dataset &dataset, std::uint64_t seed);

Partition make_partition(PartitionScheme scheme, const Dataset &dataset, int num_clients,
                         std::uint64_t seed);

struct TrainTestSplit {
  std::vector<std::vector<std::size_t>> train;  // per client
  std::vector<std::size_t> test_pool;           // union of every client's held-out indices
  std::vector<std::vector<std::size_t>> test;   // per client
};

/// Holds out floor(test_fraction * |D_k|) shuffled samples of each client for
/// evaluation; every client keeps at least one training sample.
TrainTestSplit hold_out(const Partition &partition, double test_fraction, std::uint64_t seed);

// Throws unless assignments are disjoint, in range, and every client holds >= 1 index.
void validate(const Partition &partition, std::size_t dataset_size);

}  // namespace fedprune::data

#endif  // FEDPRUNE_DATA_H_
