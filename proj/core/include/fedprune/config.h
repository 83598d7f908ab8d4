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

#ifndef FEDPRUNE_CONFIG_H_
#define FEDPRUNE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedprune/data.h"
#include "fedprune/federation.h"
#include "fedprune/gsm.h"
#include "fedprune/models.h"
#include "fedprune/pruning.h"

namespace fedprune::harness {

inline constexpr int kConfigVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DatasetSource { kBlobs, kCsv };

struct DatasetConfig {
  DatasetSource source = DatasetSource::kBlobs;
  int num_classes = 4;
  int samples_per_class = 500;
  int input_dim = 8;
  double spread = 3.0;
  std::string path;  // csv only
};

struct ExperimentConfig {
  int num_clients = 20;
  int rounds = 200;
  std::uint64_t seed = 1;
  // input_dim and num_classes are taken from the dataset at run time.
  models::ModelSpec model;
  federation::TrainConfig train;
  pruning::PruneSchedule schedule;
  gsm::GsmConfig gsm;
  data::PartitionScheme partition = data::PartitionScheme::kIid;
  DatasetConfig dataset;
  double test_fraction = 0.2;
  int workers = 1;
  std::string output_path = "fedprune_out";
};

// Throws ConfigError on any invalid field.
void validate(const ExperimentConfig &cfg);

/// Sets one field from its textual key; throws ConfigError on unknown keys or
/// malformed values.
void apply_setting(ExperimentConfig &cfg, const std::string &key, const std::string &value);

/// Parses the flat `key = value` format. '#' starts a comment. The file must
/// declare `config_version = 1`.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::filesystem::path &path);

/// Applies `--key=value` style overrides in order.
void apply_overrides(ExperimentConfig &cfg, const std::vector<std::string> &args);

// Canonical text form; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const ExperimentConfig &cfg);

std::vector<std::string> config_keys();

}  // namespace fedprune::harness

#endif  // FEDPRUNE_CONFIG_H_
