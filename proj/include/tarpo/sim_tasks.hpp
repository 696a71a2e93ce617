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

#ifndef TARPO_SIM_TASKS_HPP_
#define TARPO_SIM_TASKS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tarpo/reward.hpp"
#include "tarpo/table.hpp"

namespace tarpo::sim {

enum class QuestionKind { kCellLookup, kColumnSum, kColumnMax, kFilteredCount };

std::string_view to_string(QuestionKind kind);

/// How an answer is derived from the selected sub-table.
///   kCorrect        the question's operation on the target column
///   kWrongAggregate a different operation on the target column
///   kWrongColumn    the question's operation on another selected column
enum class Strategy : std::size_t { kCorrect, kWrongAggregate, kWrongColumn };
inline constexpr std::size_t kNumStrategies = 3;

inline constexpr std::size_t kColumnFeatures = 3;
inline constexpr std::size_t kRowFeatures = 3;

/// One selectable column set or row set together with the features the
/// policy scores it by.
template <std::size_t N>
struct Candidate {
  std::vector<std::size_t> indices;  // sorted
  std::array<double, N> features{};
};

using ColumnCandidate = Candidate<kColumnFeatures>;
using RowCandidate = Candidate<kRowFeatures>;

struct TaskShape {
  std::size_t min_rows = 3;
  std::size_t max_rows = 8;
  std::size_t min_columns = 3;
  std::size_t max_columns = 8;

  void validate() const;  // throws ConfigError
};

/// A generated question over a generated table.
///
/// Every question reads one target column over the rows selected by an
/// equality condition (`condition_column == condition_value`). For lookups
/// the condition column is the entity-name column; for counts the target
/// and condition columns coincide. The gold region is the target column
/// over the condition rows.
struct SyntheticTask {
  Table table;
  QuestionKind kind = QuestionKind::kCellLookup;
  std::string question;
  std::size_t target_column = 0;
  std::size_t condition_column = 0;
  std::string condition_value;
  std::vector<std::size_t> condition_rows;  // sorted
  TableRegion gold_region;
  AnswerSpec gold_answer;

  // Capped, shuffled candidate lists; the gold sets are always present.
  std::vector<ColumnCandidate> column_candidates;
  std::vector<RowCandidate> row_candidates;
};

/// Deterministic for a fixed seed.
std::vector<SyntheticTask> generate_tasks(std::uint64_t seed, std::size_t count,
                                          const TaskShape& shape = {});

/// Runs `strategy` on the sub-table given by `region`. nullopt when the
/// strategy cannot produce an answer from what was selected (for example
/// the target column is missing).
std::optional<std::string> execute_strategy(const SyntheticTask& task,
                                            const TableRegion& region,
                                            Strategy strategy);

/// The answer is derivable from `region`: the correct strategy reproduces
/// the gold answer, and every row the question ranges over is visible.
bool answer_computable(const SyntheticTask& task, const TableRegion& region,
                       const RewardConfig& config = {});

/// Gold region is computable and dropping any one of its rows or columns
/// makes it not computable.
bool gold_region_is_minimal(const SyntheticTask& task,
                            const RewardConfig& config = {});

/// Candidate features, exposed for tests.
std::array<double, kColumnFeatures> column_features(
    const SyntheticTask& task, const std::vector<std::size_t>& columns);
std::array<double, kRowFeatures> row_features(
    const SyntheticTask& task, const std::vector<std::size_t>& rows);

}  // namespace tarpo::sim

#endif  // TARPO_SIM_TASKS_HPP_
