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

#ifndef TARPO_COMMANDS_HPP_
#define TARPO_COMMANDS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tarpo/config.hpp"
#include "tarpo/region_text.hpp"
#include "tarpo/reward.hpp"
#include "tarpo/trainer.hpp"

namespace tarpo {

// ---- score ---------------------------------------------------------------

struct ScoreOptions {
  std::string dataset_path;
  std::string transcripts_path;
  RewardConfig reward;
  double alpha = 0.3;  // weight for the mixed reward column
};

struct ScoredTranscript {
  std::string id;
  ReasoningKind reasoning_kind = ReasoningKind::kTCoT;
  RegionStatus region_status = RegionStatus::kAbsent;
  std::optional<std::string> region;  // canonical serialization
  std::optional<std::string> answer;
  double region_reward = 0.0;
  double answer_reward = 0.0;
  double mixed = 0.0;
};

struct ScoreTotals {
  std::size_t count = 0;
  double region_reward = 0.0;
  double answer_reward = 0.0;
  double mixed = 0.0;

  void add(const ScoredTranscript& t);
  nlohmann::ordered_json to_json() const;  // totals and means
};

struct ScoreReport {
  double alpha = 0.0;
  RewardConfig reward;
  std::vector<ScoredTranscript> records;
  ScoreTotals overall;
  std::map<ReasoningKind, ScoreTotals> by_kind;

  std::string to_jsonl() const;
};

/// Scores every transcript against its dataset record. Throws
/// MissingRecord for an unknown id and SchemaError for malformed input;
/// malformed model output only lowers the scores.
ScoreReport cmd_score(const ScoreOptions& options);

// ---- train-sim -----------------------------------------------------------

struct TrainSimRun {
  std::uint64_t seed = 0;
  std::string path;
  sim::TrainStats stats;
};

/// Stats file contents: a header line echoing the configuration, one line
/// per step, then a summary line.
std::string stats_jsonl(const RunConfig& config, std::uint64_t seed,
                        const sim::TrainStats& stats);

std::string stats_file_name(sim::Algorithm algorithm, std::uint64_t seed);

/// One training run per configured seed on the shared task set; each writes
/// `<out_dir>/stats_<algorithm>_seed<seed>.jsonl` atomically.
std::vector<TrainSimRun> cmd_train_sim(const RunConfig& config);

// ---- compare -------------------------------------------------------------

struct RunSummary {
  std::string path;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::uint64_t task_seed = 0;
  std::size_t task_count = 0;
  double val_acc = 0.0;
  double val_region_reward = 0.0;
  double mean_len = 0.0;  // final smoothed training length
};

RunSummary load_run_summary(const std::string& path);

struct RunDelta {
  double val_acc = 0.0;
  double region_reward = 0.0;
  double mean_len = 0.0;
};

struct CompareReport {
  std::vector<RunSummary> runs;
  std::vector<RunDelta> deltas;  // runs[i] - runs[0]

  std::string to_table() const;
  std::string to_jsonl() const;
};

/// Needs at least two runs generated from the same task set; throws
/// IncompatibleRuns otherwise.
CompareReport cmd_compare(const std::vector<std::string>& paths);

// ---- parse-region --------------------------------------------------------

struct RegionExtraction {
  std::size_t line = 0;
  std::string id;
  std::string status;  // found | absent | syntax-error | unbindable | invalid-record
  std::size_t declarations = 0;
  std::optional<std::string> region;
  std::string position;  // pre-answer | post-answer | no-answer-marker | none
  std::string diagnostic;
};

/// Diagnostics only: never throws for malformed lines. When a dataset is
/// given, regions are canonicalized against the matching record's table.
std::vector<RegionExtraction> cmd_parse_region(
    const std::string& transcripts_path,
    const std::optional<std::string>& dataset_path = std::nullopt);

std::string to_jsonl(const std::vector<RegionExtraction>& report);

}  // namespace tarpo

#endif  // TARPO_COMMANDS_HPP_
