// Copyright 2026 The tarpo-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// tarpo_lab: command-line front end for the library.
//
//   tarpo_lab score <dataset.jsonl> <transcripts.jsonl> [--config f] [--alpha a]
//   tarpo_lab train-sim [--config f] [--seed s] [--out dir] [--algorithm a]
//                       [--alpha-fixed a]
//   tarpo_lab compare <stats.jsonl>... [--json]
//   tarpo_lab parse-region <transcripts.jsonl> [--dataset f]
//
// Exit codes: 0 success, 2 schema/config/I-O error, 3 divergence.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tarpo/commands.hpp"
#include "tarpo/config.hpp"
#include "tarpo/dataset.hpp"
#include "tarpo/errors.hpp"

namespace {

constexpr int kExitError = 2;
constexpr int kExitDivergence = 3;

std::size_t thread_cap() {
  const char* env = std::getenv("TARPO_LAB_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(env, &end, 10);
  if (*end != '\0' || n == 0) {
    throw tarpo::ConfigError("TARPO_LAB_THREADS must be a positive integer");
  }
  return static_cast<std::size_t>(n);
}

void write_or_print(const std::string& text, const std::optional<std::string>& out) {
  if (out) {
    tarpo::write_file_atomic(*out, text);
  } else {
    std::fwrite(text.data(), 1, text.size(), stdout);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tarpo_lab: region-aware policy optimization lab"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::optional<std::string> out;

  // score
  auto* score = app.add_subcommand("score", "Score transcripts against a dataset");
  std::string dataset_path, transcripts_path;
  double alpha = 0.3;
  score->add_option("dataset", dataset_path, "Dataset JSONL")->required();
  score->add_option("transcripts", transcripts_path, "Transcripts JSONL")->required();
  score->add_option("--config", config_path, "Config file ([reward] section is used)");
  score->add_option("--alpha", alpha, "Region weight for the mixed column")
      ->check(CLI::Range(0.0, 1.0));
  score->add_option("--out", out, "Write the report here instead of stdout");

  // train-sim
  auto* train = app.add_subcommand("train-sim", "Train the toy policy on synthetic tasks");
  std::optional<std::uint64_t> seed;
  std::optional<std::string> algorithm;
  std::optional<double> alpha_fixed;
  std::optional<std::string> out_dir;
  train->add_option("--config", config_path, "Config file");
  train->add_option("--seed", seed, "Run a single seed (overrides [train] seeds)");
  train->add_option("--out", out_dir, "Output directory");
  train->add_option("--algorithm", algorithm, "grpo | tarpo | tarpo-fixed")
      ->check(CLI::IsMember({"grpo", "tarpo", "tarpo-fixed"}));
  train->add_option("--alpha-fixed", alpha_fixed, "Region weight for tarpo-fixed")
      ->check(CLI::Range(0.0, 1.0));

  // compare
  auto* compare = app.add_subcommand("compare", "Side-by-side table of finished runs");
  std::vector<std::string> stats_paths;
  bool as_json = false;
  compare->add_option("stats", stats_paths, "Stats files; the first is the baseline")
      ->required();
  compare->add_flag("--json", as_json, "Emit JSON lines instead of a table");
  compare->add_option("--out", out, "Write the report here instead of stdout");

  // parse-region
  auto* parse = app.add_subcommand("parse-region", "Report region declarations");
  std::optional<std::string> region_dataset;
  parse->add_option("transcripts", transcripts_path, "Transcripts JSONL")->required();
  parse->add_option("--dataset", region_dataset, "Dataset for binding names to tables");
  parse->add_option("--out", out, "Write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (score->parsed()) {
      tarpo::ScoreOptions options;
      options.dataset_path = dataset_path;
      options.transcripts_path = transcripts_path;
      if (config_path) options.reward = tarpo::load_run_config(*config_path).train.reward;
      options.alpha = alpha;
      write_or_print(tarpo::cmd_score(options).to_jsonl(), out);
    } else if (train->parsed()) {
      tarpo::RunConfig config =
          config_path ? tarpo::load_run_config(*config_path) : tarpo::RunConfig{};
      if (seed) config.seeds = {*seed};
      if (out_dir) config.out_dir = *out_dir;
      if (algorithm) config.train.algorithm = tarpo::sim::parse_algorithm(*algorithm);
      if (alpha_fixed) config.train.alpha_fixed = *alpha_fixed;
      config.train.threads = thread_cap();
      for (const auto& run : tarpo::cmd_train_sim(config)) {
        const auto& v = run.stats.final_validation;
        const double len =
            run.stats.steps.empty() ? v.mean_length : run.stats.steps.back().ema_mean_len;
        std::printf("%s seed=%llu val_acc=%.4f mean_len=%.3f -> %s\n",
                    std::string(tarpo::sim::to_string(config.train.algorithm)).c_str(),
                    static_cast<unsigned long long>(run.seed), v.accuracy, len,
                    run.path.c_str());
      }
    } else if (compare->parsed()) {
      const auto report = tarpo::cmd_compare(stats_paths);
      write_or_print(as_json ? report.to_jsonl() : report.to_table(), out);
    } else if (parse->parsed()) {
      write_or_print(tarpo::to_jsonl(tarpo::cmd_parse_region(transcripts_path,
                                                              region_dataset)),
                     out);
    }
  } catch (const tarpo::DivergenceDetected& e) {
    std::cerr << "tarpo_lab: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "tarpo_lab: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
