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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "fedprune/federation.h"

namespace fedprune::data {
namespace {

void expect_exact_cover(const Partition &p, std::size_t n) {
  std::vector<int> hits(n, 0);
  for (const auto &idx : p.assignments) {
    EXPECT_FALSE(idx.empty());
    for (std::size_t i : idx) {
      ASSERT_LT(i, n);
      ++hits[i];
    }
  }
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

bool same_dataset(const Dataset &a, const Dataset &b) {
  if (a.size() != b.size() || a.num_classes != b.num_classes) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.samples[i].label != b.samples[i].label || a.samples[i].features != b.samples[i].features) return false;
  }
  return true;
}

TEST(GenerateBlobs, CountsAndBalance) {
  const Dataset ds = generate_blobs(4, 50, 3, 1.0, 9);
  EXPECT_EQ(ds.size(), 200u);
  EXPECT_EQ(ds.num_classes, 4);
  EXPECT_EQ(ds.input_dim(), 3);
  std::map<int, int> counts;
  for (const auto &s : ds.samples) ++counts[s.label];
  for (int c = 0; c < 4; ++c) EXPECT_EQ(counts[c], 50);
}

TEST(GenerateBlobs, DeterministicPerSeed) {
  EXPECT_TRUE(same_dataset(generate_blobs(3, 20, 5, 2.0, 1), generate_blobs(3, 20, 5, 2.0, 1)));
  EXPECT_FALSE(same_dataset(generate_blobs(3, 20, 5, 2.0, 1), generate_blobs(3, 20, 5, 2.0, 2)));
}

TEST(GenerateBlobs, NearZeroSpreadIsLinearlySeparable) {
  const Dataset ds = generate_blobs(4, 30, 8, 1e-3, 3);
  const models::ModelSpec spec{models::ModelKind::kLinearSoftmax, 8, 4, 0};
  ParamVector w(models::parameter_count(spec), 0.0);
  for (int step = 0; step < 500; ++step) {
    const ParamVector g = models::batch_gradient(spec, w, ds.samples);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= 0.5 * g[i];
  }
  EXPECT_EQ(federation::evaluate(spec, w, ds.samples).accuracy, 1.0);
}

TEST(PartitionIid, EqualSplitAndRemainderRule) {
  const Dataset ds = generate_blobs(4, 50, 2, 1.0, 1);
  const Partition p = partition_iid(ds, 20, 5);
  ASSERT_EQ(p.num_clients(), 20u);
  for (const auto &a : p.assignments) EXPECT_EQ(a.size(), 10u);
  expect_exact_cover(p, ds.size());

  Dataset odd = generate_blobs(3, 67, 2, 1.0, 1);
  const Partition q = partition_iid(odd, 20, 5);
  EXPECT_EQ(q.assignments[0].size(), 11u);
  for (int k = 1; k < 20; ++k) EXPECT_EQ(q.assignments[k].size(), 10u);
  expect_exact_cover(q, odd.size());
}

TEST(PartitionIid, TooManyClientsRejected) {
  const Dataset ds = generate_blobs(2, 3, 2, 1.0, 1);
  EXPECT_THROW(partition_iid(ds, 7, 1), std::invalid_argument);
}

TEST(PartitionNonIid, ThousandSampleLayout) {
  const Dataset ds = generate_blobs(10, 100, 2, 1.0, 4);
  const Partition p = partition_noniid_shards(ds, 8);
  ASSERT_EQ(p.num_clients(), 20u);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(p.assignments[k].size(), 80u);
  for (int k = 10; k < 20; ++k) {
    EXPECT_EQ(p.assignments[k].size(), 20u);
    std::map<int, int> labels;
    for (std::size_t i : p.assignments[k]) ++labels[ds.samples[i].label];
    EXPECT_LE(labels.size(), 2u);
    // Every label block is a whole number of 10-sample shards.
    for (const auto &[label, count] : labels) EXPECT_EQ(count % 10, 0) << "client " << k;
  }
  expect_exact_cover(p, ds.size());
}

TEST(PartitionNonIid, PropertiesOverSeeds) {
  const Dataset ds = generate_blobs(4, 500, 2, 1.0, 2);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Partition p = partition_noniid_shards(ds, seed);
    expect_exact_cover(p, ds.size());
    for (int k = 10; k < 20; ++k) {
      std::set<int> labels;
      for (std::size_t i : p.assignments[k]) labels.insert(ds.samples[i].label);
      EXPECT_LE(labels.size(), 2u);
    }
    const Partition iid = partition_iid(ds, 20, seed);
    expect_exact_cover(iid, ds.size());
  }
  EXPECT_EQ(partition_noniid_shards(ds, 3).assignments, partition_noniid_shards(ds, 3).assignments);
  EXPECT_EQ(partition_iid(ds, 20, 3).assignments, partition_iid(ds, 20, 3).assignments);
}

TEST(PartitionNonIid, InfeasibleInputsRejected) {
  EXPECT_THROW(partition_noniid_shards(generate_blobs(2, 19, 2, 1.0, 1), 1), std::invalid_argument);
  EXPECT_THROW(make_partition(PartitionScheme::kNonIidShards, generate_blobs(2, 100, 2, 1.0, 1), 10, 1),
               std::invalid_argument);
}

TEST(HoldOut, TwentyPercentPerClient) {
  const Dataset ds = generate_blobs(4, 50, 2, 1.0, 1);
  const Partition p = partition_iid(ds, 20, 1);
  const TrainTestSplit split = hold_out(p, 0.2, 3);
  std::size_t total = 0;
  for (int k = 0; k < 20; ++k) {
    EXPECT_EQ(split.test[k].size(), 2u);
    EXPECT_EQ(split.train[k].size(), 8u);
    total += split.train[k].size() + split.test[k].size();
  }
  EXPECT_EQ(total, ds.size());
  EXPECT_EQ(split.test_pool.size(), 40u);

  Partition tiny;
  tiny.assignments = {{0}, {1, 2}};
  const TrainTestSplit s2 = hold_out(tiny, 0.9, 1);
  EXPECT_EQ(s2.train[0].size(), 1u);
  EXPECT_EQ(s2.train[1].size(), 1u);
}

TEST(LoadCsv, ParsesFeaturesThenLabel) {
  const auto path = std::filesystem::temp_directory_path() / "fedprune_load_csv_test.csv";
  std::ofstream(path) << "# comment\n1.0,2.5,0\n-3,4e-1,2\n\n0,0,1\n";
  const Dataset ds = load_csv(path);
  ASSERT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.num_classes, 3);
  EXPECT_EQ(ds.samples[1].features, (std::vector<double>{-3.0, 0.4}));
  EXPECT_EQ(ds.samples[1].label, 2);

  std::ofstream(path) << "1,2,0\n1,0\n";
  EXPECT_THROW(load_csv(path), std::runtime_error);
  std::ofstream(path) << "1,2,x\n";
  EXPECT_THROW(load_csv(path), std::runtime_error);
  std::filesystem::remove(path);
  EXPECT_THROW(load_csv(path), std::runtime_error);
}

TEST(ValidatePartition, DetectsOverlap) {
  Partition p;
  p.assignments = {{0, 1}, {1}};
  EXPECT_THROW(validate(p, 2), std::invalid_argument);
  p.assignments = {{0}, {}};
  EXPECT_THROW(validate(p, 2), std::invalid_argument);
  p.assignments = {{0}, {1}};
  EXPECT_NO_THROW(validate(p, 2));
}

}  // namespace
}  // namespace fedprune::data
