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

#include "fedprune/config.h"

#include <gtest/gtest.h>

namespace fedprune::harness {
namespace {

TEST(ParseConfig, ReadsKeysAndComments) {
  const ExperimentConfig cfg = parse_config(
      "# experiment\n"
      "config_version = 1\n"
      "num_clients = 20   # trailing comment\n"
      "rounds=60\n"
      "model = mlp_one_hidden\n"
      "hidden_dim = 12\n"
      "optimizer = fedprox\n"
      "prox_mu = 0.01\n"
      "partition = noniid_shards\n"
      "prune_ratio = 0.3\n"
      "gsm_sigma_estimation = fixed\n"
      "seed = 18446744073709551615\n");
  EXPECT_EQ(cfg.rounds, 60);
  EXPECT_EQ(cfg.model.kind, models::ModelKind::kMlpOneHidden);
  EXPECT_EQ(cfg.model.hidden_dim, 12);
  EXPECT_EQ(cfg.train.optimizer, federation::Optimizer::kFedProx);
  EXPECT_EQ(cfg.train.prox_mu, 0.01);
  EXPECT_EQ(cfg.partition, data::PartitionScheme::kNonIidShards);
  EXPECT_EQ(cfg.schedule.target_ratio, 0.3);
  EXPECT_EQ(cfg.gsm.sigma_estimation, gsm::SigmaEstimation::kFixed);
  EXPECT_EQ(cfg.seed, 18446744073709551615ULL);
  EXPECT_NO_THROW(validate(cfg));
}

TEST(ParseConfig, Errors) {
  EXPECT_THROW(parse_config("rounds = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("config_version = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("config_version = 1\nbogus = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("config_version = 1\nrounds = three\n"), ConfigError);
  EXPECT_THROW(parse_config("config_version = 1\nrounds\n"), ConfigError);
  EXPECT_THROW(parse_config("config_version = 1\nmodel = resnet\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/fedprune.cfg"), ConfigError);
}

TEST(Validate, RejectsInconsistentSettings) {
  ExperimentConfig cfg;
  cfg.partition = data::PartitionScheme::kNonIidShards;
  cfg.num_clients = 10;
  EXPECT_THROW(validate(cfg), ConfigError);

  cfg = ExperimentConfig{};
  cfg.train.prox_mu = 0.01;  // fedavg with mu
  EXPECT_THROW(validate(cfg), ConfigError);

  cfg = ExperimentConfig{};
  cfg.schedule.target_ratio = 1.0;
  EXPECT_THROW(validate(cfg), ConfigError);

  cfg = ExperimentConfig{};
  cfg.dataset.source = DatasetSource::kCsv;
  EXPECT_THROW(validate(cfg), ConfigError);
  EXPECT_NO_THROW(validate(ExperimentConfig{}));
}

TEST(Overrides, AppliedInOrder) {
  ExperimentConfig cfg;
  apply_overrides(cfg, {"--rounds=7", "--learning_rate=0.2", "--rounds=9"});
  EXPECT_EQ(cfg.rounds, 9);
  EXPECT_EQ(cfg.train.learning_rate, 0.2);
  EXPECT_THROW(apply_overrides(cfg, {"rounds=3"}), ConfigError);
  EXPECT_THROW(apply_overrides(cfg, {"--rounds"}), ConfigError);
  EXPECT_THROW(apply_overrides(cfg, {"--nope=1"}), ConfigError);
}

TEST(ConfigText, RoundTrips) {
  ExperimentConfig cfg;
  apply_overrides(cfg, {"--spread=0.123456789012345", "--optimizer=fedprox", "--prox_mu=0.01",
                        "--output_path=/tmp/x", "--gsm_epsilon=1e-7"});
  const std::string text = to_config_text(cfg);
  EXPECT_EQ(to_config_text(parse_config(text)), text);
  EXPECT_EQ(parse_config(text).dataset.spread, 0.123456789012345);
  for (const std::string &key : config_keys()) {
    EXPECT_NE(text.find(key + " = "), std::string::npos) << key;
  }
}

}  // namespace
}  // namespace fedprune::harness
