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

#include "fedprune/data.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fedprune/rng.h"

namespace fedprune::data {
namespace {

constexpr double kMeanScale = 3.0;

std::vector<std::vector<std::size_t>> split_evenly(const std::vector<std::size_t> &indices,
                                                   int num_clients) {
  std::vector<std::vector<std::size_t>> out(num_clients);
  const std::size_t base = indices.size() / num_clients;
  const std::size_t extra = indices.size() % num_clients;
  std::size_t pos = 0;
  for (int k = 0; k < num_clients; ++k) {
    const std::size_t take = base + (static_cast<std::size_t>(k) < extra ? 1 : 0);
    out[k].assign(indices.begin() + pos, indices.begin() + pos + take);
    pos += take;
  }
  return out;
}

double parse_double(const std::string &token, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception &) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + token + "'");
  }
}

std::string trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string to_string(PartitionScheme scheme) {
  return scheme == PartitionScheme::kIid ? "iid" : "noniid_shards";
}

PartitionScheme parse_partition_scheme(const std::string &name) {
  if (name == "iid") return PartitionScheme::kIid;
  if (name == "noniid_shards") return PartitionScheme::kNonIidShards;
  throw std::invalid_argument("unknown partition scheme: " + name);
}

Dataset generate_blobs(int num_classes, int samples_per_class, int input_dim, double spread,
                       std::uint64_t seed) {
  if (num_classes < 1 || samples_per_class < 1 || input_dim < 1) {
    throw std::invalid_argument("generate_blobs: counts must be >= 1");
  }
  if (!(spread >= 0.0)) {
    throw std::invalid_argument("generate_blobs: spread must be nonnegative");
  }
  std::mt19937_64 rng(derive_seed(seed, {0x62'6c'6f'62}));
  std::normal_distribution<double> unit(0.0, 1.0);

  std::vector<std::vector<double>> means(num_classes, std::vector<double>(input_dim));
  for (auto &mean : means) {
    for (double &m : mean) m = kMeanScale * unit(rng);
  }

  Dataset ds;
  ds.num_classes = num_classes;
  ds.samples.reserve(static_cast<std::size_t>(num_classes) * samples_per_class);
  for (int c = 0; c < num_classes; ++c) {
    for (int i = 0; i < samples_per_class; ++i) {
      models::Sample s;
      s.label = c;
      s.features.resize(input_dim);
      for (int d = 0; d < input_dim; ++d) {
        s.features[d] = means[c][d] + spread * unit(rng);
      }
      ds.samples.push_back(std::move(s));
    }
  }
  return ds;
}

Dataset load_csv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file " + path.string());
  }
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() < 2) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": need features and a label");
    }

    models::Sample s;
    const std::string &label_field = fields.back();
    int label = -1;
    const auto [ptr, ec] =
        std::from_chars(label_field.data(), label_field.data() + label_field.size(), label);
    if (ec != std::errc() || ptr != label_field.data() + label_field.size() || label < 0) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": bad label '" + label_field + "'");
    }
    s.label = label;
    for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
      s.features.push_back(parse_double(fields[i], line_no));
    }
    if (dim == 0) {
      dim = s.features.size();
    } else if (s.features.size() != dim) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": inconsistent feature count");
    }
    max_label = std::max(max_label, label);
    ds.samples.push_back(std::move(s));
  }
  if (ds.samples.empty()) {
    throw std::runtime_error("dataset file " + path.string() + " holds no samples");
  }
  ds.num_classes = std::max(2, max_label + 1);
  return ds;
}

Partition partition_iid(const Dataset &dataset, int num_clients, std::uint64_t seed) {
  if (num_clients < 1) {
    throw std::invalid_argument("partition_iid: need at least one client");
  }
  if (static_cast<std::size_t>(num_clients) > dataset.size()) {
    throw std::invalid_argument("partition_iid: more clients than samples");
  }
  std::vector<std::size_t> indices(dataset.size());
  std::iota(indices.begin(), indices.end(), 0);
  std::mt19937_64 rng(derive_seed(seed, {0x69'69'64}));
  std::shuffle(indices.begin(), indices.end(), rng);
  return Partition{split_evenly(indices, num_clients)};
}

Partition partition_noniid_shards(const Dataset &dataset, std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (n < 2 * static_cast<std::size_t>(kShardClients)) {
    throw std::invalid_argument("partition_noniid_shards: need at least 40 samples");
  }
  const std::size_t shard_size = (n / 5) / kShardCount;
  if (shard_size == 0) {
    throw std::invalid_argument("partition_noniid_shards: 20% remainder too small for 20 shards");
  }

  std::vector<std::vector<std::size_t>> by_label(dataset.num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = dataset.samples[i].label;
    if (label < 0 || label >= dataset.num_classes) {
      throw std::invalid_argument("partition_noniid_shards: label out of range");
    }
    by_label[label].push_back(i);
  }

  // Largest-remainder apportionment of the 20 shards over labels.
  const int num_labels = dataset.num_classes;
  std::vector<std::size_t> shards(num_labels);
  std::vector<std::pair<double, int>> remainders;
  std::size_t assigned = 0;
  for (int l = 0; l < num_labels; ++l) {
    const double quota = static_cast<double>(kShardCount) * by_label[l].size() / n;
    shards[l] = static_cast<std::size_t>(quota);
    assigned += shards[l];
    remainders.emplace_back(quota - static_cast<double>(shards[l]), l);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto &x, const auto &y) { return x.first > y.first; });
  for (std::size_t r = 0; assigned < static_cast<std::size_t>(kShardCount); ++r) {
    ++shards[remainders[r].second];
    ++assigned;
  }

  std::mt19937_64 rng(derive_seed(seed, {0x73'68'61'72'64}));
  std::vector<std::vector<std::size_t>> shard_list;
  std::vector<std::size_t> iid_pool;
  for (int l = 0; l < num_labels; ++l) {
    std::vector<std::size_t> idx = by_label[l];
    if (shards[l] * shard_size > idx.size()) {
      throw std::invalid_argument("partition_noniid_shards: label " + std::to_string(l) +
                                  " has too few samples for its single-label shards");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t s = 0; s < shards[l]; ++s) {
      shard_list.emplace_back(idx.begin() + s * shard_size, idx.begin() + (s + 1) * shard_size);
    }
    iid_pool.insert(iid_pool.end(), idx.begin() + shards[l] * shard_size, idx.end());
  }

  std::sort(iid_pool.begin(), iid_pool.end());
  std::shuffle(iid_pool.begin(), iid_pool.end(), rng);
  if (iid_pool.size() < static_cast<std::size_t>(kIidClientsInShardScheme)) {
    throw std::invalid_argument("partition_noniid_shards: too few samples for the IID clients");
  }

  Partition part;
  part.assignments = split_evenly(iid_pool, kIidClientsInShardScheme);
  std::shuffle(shard_list.begin(), shard_list.end(), rng);
  for (int k = 0; k < kShardClients - kIidClientsInShardScheme; ++k) {
    std::vector<std::size_t> owned;
    for (int s = 0; s < kShardsPerClient; ++s) {
      const auto &shard = shard_list[k * kShardsPerClient + s];
      owned.insert(owned.end(), shard.begin(), shard.end());
    }
    part.assignments.push_back(std::move(owned));
  }
  return part;
}

Partition make_partition(PartitionScheme scheme, const Dataset &dataset, int num_clients,
                         std::uint64_t seed) {
  if (scheme == PartitionScheme::kIid) {
    return partition_iid(dataset, num_clients, seed);
  }
  if (num_clients != kShardClients) {
    throw std::invalid_argument("noniid_shards partition requires exactly 20 clients");
  }
  return partition_noniid_shards(dataset, seed);
}

TrainTestSplit hold_out(const Partition &partition, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must lie in [0, 1)");
  }
  TrainTestSplit split;
  split.train.resize(partition.num_clients());
  split.test.resize(partition.num_clients());
  for (std::size_t k = 0; k < partition.num_clients(); ++k) {
    std::vector<std::size_t> idx = partition.assignments[k];
    if (idx.empty()) {
      throw std::invalid_argument("client " + std::to_string(k) + " holds no samples");
    }
    std::mt19937_64 rng(derive_seed(seed, {0x68'6f'6c'64, k}));
    std::shuffle(idx.begin(), idx.end(), rng);
    std::size_t n_test = static_cast<std::size_t>(test_fraction * static_cast<double>(idx.size()));
    n_test = std::min(n_test, idx.size() - 1);
    split.test[k].assign(idx.begin(), idx.begin() + n_test);
    split.train[k].assign(idx.begin() + n_test, idx.end());
    std::sort(split.test[k].begin(), split.test[k].end());
    std::sort(split.train[k].begin(), split.train[k].end());
    split.test_pool.insert(split.test_pool.end(), split.test[k].begin(), split.test[k].end());
  }
  return split;
}

void validate(const Partition &partition, std::size_t dataset_size) {
  std::vector<char> seen(dataset_size, 0);
  for (std::size_t k = 0; k < partition.num_clients(); ++k) {
    if (partition.assignments[k].empty()) {
      throw std::invalid_argument("client " + std::to_string(k) + " holds no samples");
    }
    for (std::size_t i : partition.assignments[k]) {
      if (i >= dataset_size) throw std::invalid_argument("partition index out of range");
      if (seen[i]) throw std::invalid_argument("partition assigns a sample twice");
      seen[i] = 1;
    }
  }
}

}  // namespace fedprune::data
