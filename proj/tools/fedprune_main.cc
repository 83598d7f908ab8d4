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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedprune/config.h"
#include "fedprune/experiment.h"
#include "fedprune/oracle.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

using fedprune::harness::ExperimentConfig;

ExperimentConfig resolve_config(const std::string &path, const std::vector<std::string> &overrides) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : fedprune::harness::load_config(path);
  fedprune::harness::apply_overrides(cfg, overrides);
  fedprune::harness::validate(cfg);
  return cfg;
}

void write_run(const ExperimentConfig &cfg, const fedprune::harness::ExperimentResult &result,
               const std::filesystem::path &dir) {
  fedprune::harness::emit_metrics(result.rounds, dir);
  std::ofstream(dir / "config.txt") << fedprune::harness::to_config_text(cfg);
}

void print_summary(const std::string &label, const fedprune::harness::ExperimentResult &result) {
  const auto &last = result.rounds.back();
  std::printf("%-12s rounds=%zu accuracy=%.4f loss=%.4f active=%zu relative_comm_cost=%.4f\n",
              label.c_str(), result.rounds.size(), last.accuracy, last.mean_loss,
              result.final_active.active.size(), result.ledger.relative_cost());
}

std::string ratio_label(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ratio_%g", r);
  return buf;
}

int run_oracle(int draws, int vectors, int length, std::uint64_t seed) {
  const auto scalar = fedprune::oracle::check_theta_scalar(draws, seed);
  std::printf("theta scalar: draws=%d max_gap=%.3e (a=%.4f b=%.4f c=%.4f) %s\n", scalar.draws,
              scalar.max_gap, scalar.worst_a, scalar.worst_b, scalar.worst_c,
              scalar.passed ? "PASS" : "FAIL");

  const auto alt = fedprune::oracle::check_alternating(vectors, length, seed + 1, fedprune::gsm::GsmConfig{});
  std::printf("alternating: vectors=%d max_increase=%.3e %s\n", alt.vectors, alt.max_increase,
              alt.monotone ? "PASS" : "FAIL");
  std::printf("coordinate optimality: theta_gap=%.3e alpha_gap=%.3e %s\n", alt.max_theta_gap,
              alt.max_alpha_gap, alt.coordinate_optimal ? "PASS" : "FAIL");
  return scalar.passed && alt.monotone && alt.coordinate_optimal ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Federated learning simulator with score-based client pruning"};
  app.require_subcommand(1);

  std::string config_path;
  bool quiet = false;

  auto *run = app.add_subcommand("run", "Run one experiment; extra --key=value flags override the config");
  run->add_option("-c,--config", config_path, "Config file (key = value)")->check(CLI::ExistingFile);
  run->add_flag("-q,--quiet", quiet, "Only print the final summary");
  run->allow_extras();

  std::vector<double> ratios{0.0, 0.1, 0.3, 0.5};
  auto *sweep = app.add_subcommand("sweep", "Run the config once per pruning ratio");
  sweep->add_option("-c,--config", config_path, "Config file (key = value)")->check(CLI::ExistingFile);
  sweep->add_option("-r,--ratios", ratios, "Pruning ratios")->delimiter(',');
  sweep->allow_extras();

  int draws = 1000, vectors = 100, length = 20;
  std::uint64_t seed = 20260101;
  auto *oracle = app.add_subcommand("oracle", "Check the GSM solver against brute-force grid search");
  oracle->add_option("--draws", draws, "Random scalar problems")->check(CLI::PositiveNumber);
  oracle->add_option("--vectors", vectors, "Random score vectors")->check(CLI::PositiveNumber);
  oracle->add_option("--length", length, "Score vector length")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*oracle) {
      return run_oracle(draws, vectors, length, seed);
    }

    const bool sweeping = static_cast<bool>(*sweep);
    const ExperimentConfig base = resolve_config(config_path, sweeping ? sweep->remaining() : run->remaining());

    if (!sweeping) {
      const auto result = fedprune::harness::run_experiment(base);
      if (!quiet) {
        std::fputs(fedprune::harness::format_round_table(result.rounds).c_str(), stdout);
      }
      write_run(base, result, base.output_path);
      print_summary("run", result);
      return kExitOk;
    }

    for (double r : ratios) {
      ExperimentConfig cfg = base;
      cfg.schedule.target_ratio = r;
      fedprune::harness::validate(cfg);
      const auto result = fedprune::harness::run_experiment(cfg);
      write_run(cfg, result, std::filesystem::path(base.output_path) / ratio_label(r));
      print_summary(ratio_label(r), result);
    }
    return kExitOk;
  } catch (const fedprune::harness::ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception &e) {
    // RoundError messages carry the round index.
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
