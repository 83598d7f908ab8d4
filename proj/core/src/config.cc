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

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace fedprune::harness {
namespace {

std::string trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(const std::string &key, const std::string &value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("bad integer for '" + key + "': '" + value + "'");
  }
  return out;
}

double parse_real(const std::string &key, const std::string &value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception &) {
  }
  throw ConfigError("bad number for '" + key + "': '" + value + "'");
}

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename Fn>
auto parse_enum(const std::string &key, Fn &&fn) {
  try {
    return fn();
  } catch (const std::invalid_argument &e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

struct Field {
  const char *key;
  std::function<void(ExperimentConfig &, const std::string &)> set;
  std::function<std::string(const ExperimentConfig &)> get;
};

#define FEDPRUNE_INT_FIELD(name, member)                                                      \
  Field {                                                                                     \
    name, [](ExperimentConfig &c, const std::string &v) { c.member = parse_integer<int>(name, v); }, \
        [](const ExperimentConfig &c) { return std::to_string(c.member); }                    \
  }
#define FEDPRUNE_REAL_FIELD(name, member)                                                \
  Field {                                                                                \
    name, [](ExperimentConfig &c, const std::string &v) { c.member = parse_real(name, v); }, \
        [](const ExperimentConfig &c) { return real_text(c.member); }                    \
  }

const std::vector<Field> &fields() {
  static const std::vector<Field> table = {
      FEDPRUNE_INT_FIELD("num_clients", num_clients),
      FEDPRUNE_INT_FIELD("rounds", rounds),
      Field{"seed",
            [](ExperimentConfig &c, const std::string &v) { c.seed = parse_integer<std::uint64_t>("seed", v); },
            [](const ExperimentConfig &c) { return std::to_string(c.seed); }},
      Field{"model",
            [](ExperimentConfig &c, const std::string &v) {
              c.model.kind = parse_enum("model", [&] { return models::parse_model_kind(v); });
            },
            [](const ExperimentConfig &c) { return models::to_string(c.model.kind); }},
      FEDPRUNE_INT_FIELD("hidden_dim", model.hidden_dim),
      Field{"optimizer",
            [](ExperimentConfig &c, const std::string &v) {
              c.train.optimizer = parse_enum("optimizer", [&] { return federation::parse_optimizer(v); });
            },
            [](const ExperimentConfig &c) { return federation::to_string(c.train.optimizer); }},
      FEDPRUNE_REAL_FIELD("prox_mu", train.prox_mu),
      FEDPRUNE_INT_FIELD("local_epochs", train.local_epochs),
      FEDPRUNE_INT_FIELD("batch_size", train.batch_size),
      FEDPRUNE_REAL_FIELD("learning_rate", train.learning_rate),
      FEDPRUNE_INT_FIELD("warmup_rounds", schedule.warmup_rounds),
      FEDPRUNE_REAL_FIELD("prune_ratio", schedule.target_ratio),
      FEDPRUNE_INT_FIELD("max_prunes_per_round", schedule.max_prunes_per_round),
      FEDPRUNE_REAL_FIELD("gsm_sigma_w_sq", gsm.sigma_w_sq),
      FEDPRUNE_REAL_FIELD("gsm_epsilon", gsm.epsilon),
      FEDPRUNE_INT_FIELD("gsm_max_iters", gsm.max_iters),
      FEDPRUNE_REAL_FIELD("gsm_rel_tol", gsm.rel_tol),
      Field{"gsm_sigma_estimation",
            [](ExperimentConfig &c, const std::string &v) {
              if (v == "fixed") {
                c.gsm.sigma_estimation = gsm::SigmaEstimation::kFixed;
              } else if (v == "robust_mad") {
                c.gsm.sigma_estimation = gsm::SigmaEstimation::kRobustMad;
              } else {
                throw ConfigError("bad value for 'gsm_sigma_estimation': " + v);
              }
            },
            [](const ExperimentConfig &c) {
              return std::string(c.gsm.sigma_estimation == gsm::SigmaEstimation::kFixed ? "fixed"
                                                                                       : "robust_mad");
            }},
      Field{"partition",
            [](ExperimentConfig &c, const std::string &v) {
              c.partition = parse_enum("partition", [&] { return data::parse_partition_scheme(v); });
            },
            [](const ExperimentConfig &c) { return data::to_string(c.partition); }},
      Field{"dataset",
            [](ExperimentConfig &c, const std::string &v) {
              if (v == "blobs") {
                c.dataset.source = DatasetSource::kBlobs;
              } else if (v == "csv") {
                c.dataset.source = DatasetSource::kCsv;
              } else {
                throw ConfigError("bad value for 'dataset': " + v);
              }
            },
            [](const ExperimentConfig &c) {
              return std::string(c.dataset.source == DatasetSource::kBlobs ? "blobs" : "csv");
            }},
      FEDPRUNE_INT_FIELD("num_classes", dataset.num_classes),
      FEDPRUNE_INT_FIELD("samples_per_class", dataset.samples_per_class),
      FEDPRUNE_INT_FIELD("input_dim", dataset.input_dim),
      FEDPRUNE_REAL_FIELD("spread", dataset.spread),
      Field{"dataset_path", [](ExperimentConfig &c, const std::string &v) { c.dataset.path = v; },
            [](const ExperimentConfig &c) { return c.dataset.path; }},
      FEDPRUNE_REAL_FIELD("test_fraction", test_fraction),
      FEDPRUNE_INT_FIELD("workers", workers),
      Field{"output_path", [](ExperimentConfig &c, const std::string &v) { c.output_path = v; },
            [](const ExperimentConfig &c) { return c.output_path; }},
  };
  return table;
}

#undef FEDPRUNE_INT_FIELD
#undef FEDPRUNE_REAL_FIELD

}  // namespace

void validate(const ExperimentConfig &cfg) {
  if (cfg.num_clients < 1) throw ConfigError("num_clients must be >= 1");
  if (cfg.rounds < 1) throw ConfigError("rounds must be >= 1");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0, 1)");
  }
  if (cfg.partition == data::PartitionScheme::kNonIidShards && cfg.num_clients != data::kShardClients) {
    throw ConfigError("noniid_shards requires num_clients = 20");
  }
  const DatasetConfig &d = cfg.dataset;
  if (d.source == DatasetSource::kBlobs) {
    if (d.num_classes < 2 || d.samples_per_class < 1 || d.input_dim < 1 || !(d.spread >= 0.0)) {
      throw ConfigError("invalid blob dataset parameters");
    }
  } else if (d.path.empty()) {
    throw ConfigError("dataset = csv requires dataset_path");
  }
  if (cfg.model.kind == models::ModelKind::kMlpOneHidden && cfg.model.hidden_dim < 1) {
    throw ConfigError("hidden_dim must be >= 1");
  }
  try {
    federation::validate(cfg.train);
    pruning::validate(cfg.schedule);
    gsm::validate(cfg.gsm);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

void apply_setting(ExperimentConfig &cfg, const std::string &key, const std::string &value) {
  if (key == "config_version") {
    if (parse_integer<int>(key, value) != kConfigVersion) {
      throw ConfigError("unsupported config_version " + value);
    }
    return;
  }
  for (const Field &f : fields()) {
    if (key == f.key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string &text) {
  ExperimentConfig cfg;
  bool versioned = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "config_version") versioned = true;
    try {
      apply_setting(cfg, key, value);
    } catch (const ConfigError &e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!versioned) {
    throw ConfigError("missing config_version");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_overrides(ExperimentConfig &cfg, const std::vector<std::string> &args) {
  for (const std::string &arg : args) {
    if (arg.rfind("--", 0) != 0) {
      throw ConfigError("unexpected argument '" + arg + "'");
    }
    const auto eq = arg.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("override '" + arg + "' must look like --key=value");
    }
    apply_setting(cfg, arg.substr(2, eq - 2), arg.substr(eq + 1));
  }
}

std::string to_config_text(const ExperimentConfig &cfg) {
  std::string out = "config_version = " + std::to_string(kConfigVersion) + "\n";
  for (const Field &f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys{"config_version"};
  for (const Field &f : fields()) keys.emplace_back(f.key);
  return keys;
}

}  // namespace fedprune::harness
