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

#include "tarpo/sim_tasks.hpp"

#include <algorithm>
#include <map>

#include "tarpo/errors.hpp"
#include "tarpo/rng.hpp"

namespace tarpo::sim {
namespace {

constexpr std::size_t kMaxColumnCandidates = 8;
constexpr std::size_t kMaxRowCandidates = 8;
constexpr long long kMinValue = 2;
constexpr long long kMaxValue = 99;

constexpr std::string_view kKeyColumnNames[] = {"Team",   "Athlete", "Nation",
                                                "Club",   "Player",  "City"};
constexpr std::string_view kCategoryColumnNames[] = {"Region", "Group",
                                                     "League", "Division"};
constexpr std::string_view kCategoryValues[] = {"North", "South", "East",
                                                "West"};
constexpr std::string_view kNumericColumnNames[] = {
    "Gold",  "Silver", "Bronze", "Points", "Wins",  "Losses",
    "Goals", "Score",  "Games",  "Assists", "Draws", "Titles"};
constexpr std::string_view kEntityNames[] = {
    "Norway",  "Kenya",   "Chile",  "Japan",   "Peru",   "Ghana",
    "Canada",  "Oman",    "Italy",  "Brazil",  "Nepal",  "Spain",
    "Iceland", "Mexico",  "Poland", "Egypt",   "Fiji",   "Latvia",
    "Malta",   "Uganda",  "Tonga",  "Sweden",  "Greece", "Cuba"};

template <typename T, std::size_t N>
std::vector<T> pick_distinct(Rng& rng, const std::string_view (&pool)[N],
                             std::size_t count) {
  std::vector<std::size_t> idx(N);
  for (std::size_t i = 0; i < N; ++i) idx[i] = i;
  rng.shuffle(idx);
  std::vector<T> out;
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(pool[idx[i]]);
  return out;
}

std::vector<std::size_t> rows_where(const Table& t, std::size_t col,
                                    std::string_view value) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < t.num_rows(); ++r) {
    if (t.cell(r, col) == value) out.push_back(r);
  }
  return out;
}

long long cell_number(const Table& t, std::size_t r, std::size_t c) {
  return static_cast<long long>(parse_number(t.cell(r, c)).value_or(0.0));
}

bool contains(const std::vector<std::size_t>& sorted, std::size_t x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

// Applies `kind`'s operation to column `col` over `rows`.
std::optional<std::string> apply_operation(const Table& t, QuestionKind kind,
                                           std::size_t col,
                                           const std::vector<std::size_t>& rows,
                                           std::string_view count_value) {
  if (rows.empty()) return std::nullopt;
  switch (kind) {
    case QuestionKind::kCellLookup:
      return t.cell(rows.front(), col);
    case QuestionKind::kColumnSum: {
      long long s = 0;
      for (std::size_t r : rows) {
        if (!parse_number(t.cell(r, col))) return std::nullopt;
        s += cell_number(t, r, col);
      }
      return std::to_string(s);
    }
    case QuestionKind::kColumnMax: {
      long long m = 0;
      bool first = true;
      for (std::size_t r : rows) {
        if (!parse_number(t.cell(r, col))) return std::nullopt;
        const long long v = cell_number(t, r, col);
        if (first || v > m) m = v;
        first = false;
      }
      return std::to_string(m);
    }
    case QuestionKind::kFilteredCount: {
      std::size_t n = 0;
      for (std::size_t r : rows) n += t.cell(r, col) == count_value ? 1 : 0;
      return std::to_string(n);
    }
  }
  return std::nullopt;
}

QuestionKind wrong_aggregate(QuestionKind kind) {
  switch (kind) {
    case QuestionKind::kCellLookup:
      return QuestionKind::kFilteredCount;
    case QuestionKind::kColumnSum:
      return QuestionKind::kColumnMax;
    case QuestionKind::kColumnMax:
      return QuestionKind::kColumnSum;
    case QuestionKind::kFilteredCount:
      return QuestionKind::kCellLookup;
  }
  return kind;
}

template <std::size_t N, typename Features>
void add_candidate(std::vector<Candidate<N>>& out, std::vector<std::size_t> idx,
                   std::size_t cap, Features features) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.empty() || out.size() >= cap) return;
  for (const auto& c : out) {
    if (c.indices == idx) return;
  }
  Candidate<N> c;
  c.features = features(idx);
  c.indices = std::move(idx);
  out.push_back(std::move(c));
}

void build_candidates(SyntheticTask& task, Rng& rng) {
  const Table& t = task.table;
  const std::size_t tc = task.target_column;
  const std::size_t cc = task.condition_column;

  std::vector<std::size_t> others;
  for (std::size_t c = 0; c < t.num_columns(); ++c) {
    if (c != tc && c != cc) others.push_back(c);
  }
  rng.shuffle(others);

  auto colf = [&](const std::vector<std::size_t>& idx) {
    return column_features(task, idx);
  };
  auto& cols = task.column_candidates;
  add_candidate(cols, {tc}, kMaxColumnCandidates, colf);
  if (cc != tc) add_candidate(cols, {tc, cc}, kMaxColumnCandidates, colf);
  add_candidate(cols, full_region(t).columns(), kMaxColumnCandidates, colf);
  if (!others.empty()) {
    add_candidate(cols, {tc, others[0]}, kMaxColumnCandidates, colf);
    add_candidate(cols, {others[0]}, kMaxColumnCandidates, colf);
  }
  if (cc != tc) add_candidate(cols, {cc}, kMaxColumnCandidates, colf);
  for (std::size_t i = 1; i < others.size(); ++i) {
    add_candidate(cols, {others[i]}, kMaxColumnCandidates, colf);
  }

  const auto& m = task.condition_rows;
  auto rowf = [&](const std::vector<std::size_t>& idx) {
    return row_features(task, idx);
  };
  auto& rows = task.row_candidates;
  add_candidate(rows, m, kMaxRowCandidates, rowf);
  add_candidate(rows, full_region(t).rows(), kMaxRowCandidates, rowf);
  std::vector<std::size_t> outside;
  for (std::size_t r = 0; r < t.num_rows(); ++r) {
    if (!contains(m, r)) outside.push_back(r);
  }
  if (!outside.empty()) {
    auto plus = m;
    plus.push_back(outside[rng.index(outside.size())]);
    add_candidate(rows, plus, kMaxRowCandidates, rowf);
  }
  if (m.size() >= 2) {
    auto minus = m;
    minus.erase(minus.begin() + static_cast<std::ptrdiff_t>(rng.index(m.size())));
    add_candidate(rows, minus, kMaxRowCandidates, rowf);
  }
  if (task.kind == QuestionKind::kCellLookup) {
    if (!outside.empty()) {
      add_candidate(rows, {outside[rng.index(outside.size())]},
                    kMaxRowCandidates, rowf);
    }
  } else {
    // Rows of a different category value.
    for (std::size_t r : outside) {
      add_candidate(rows, rows_where(t, cc, t.cell(r, cc)), kMaxRowCandidates,
                    rowf);
      break;
    }
  }
  add_candidate(rows, {0}, kMaxRowCandidates, rowf);
  std::vector<std::size_t> half;
  for (std::size_t r = 0; r < (t.num_rows() + 1) / 2; ++r) half.push_back(r);
  add_candidate(rows, half, kMaxRowCandidates, rowf);

  rng.shuffle(cols);
  rng.shuffle(rows);
}

SyntheticTask make_task(Rng& rng, const TaskShape& shape) {
  const std::size_t num_rows =
      static_cast<std::size_t>(rng.range(static_cast<long long>(shape.min_rows),
                                         static_cast<long long>(shape.max_rows)));
  const std::size_t num_cols = static_cast<std::size_t>(
      rng.range(static_cast<long long>(shape.min_columns),
                static_cast<long long>(shape.max_columns)));

  // Column 0 is the entity key; the category column and numeric columns
  // are shuffled over the remaining positions.
  const std::size_t category_col = 1 + rng.index(num_cols - 1);
  std::vector<std::string> columns(num_cols);
  columns[0] = std::string(kKeyColumnNames[rng.index(std::size(kKeyColumnNames))]);
  columns[category_col] =
      std::string(kCategoryColumnNames[rng.index(std::size(kCategoryColumnNames))]);
  auto numeric_names =
      pick_distinct<std::string>(rng, kNumericColumnNames, num_cols - 2);
  std::vector<std::size_t> numeric_cols;
  for (std::size_t c = 1, k = 0; c < num_cols; ++c) {
    if (c == category_col) continue;
    columns[c] = numeric_names[k++];
    numeric_cols.push_back(c);
  }

  const std::size_t num_categories = 2 + rng.index(2);
  auto categories =
      pick_distinct<std::string>(rng, kCategoryValues, num_categories);
  auto entities = pick_distinct<std::string>(rng, kEntityNames, num_rows);

  std::vector<std::size_t> category_of(num_rows);
  for (auto& c : category_of) c = rng.index(num_categories);
  {
    // At least one category with two rows.
    std::vector<std::size_t> order(num_rows);
    for (std::size_t r = 0; r < num_rows; ++r) order[r] = r;
    rng.shuffle(order);
    category_of[order[0]] = 0;
    category_of[order[1]] = 0;
  }

  std::vector<std::vector<std::string>> rows(num_rows,
                                             std::vector<std::string>(num_cols));
  for (std::size_t r = 0; r < num_rows; ++r) {
    rows[r][0] = entities[r];
    rows[r][category_col] = categories[category_of[r]];
    for (std::size_t c : numeric_cols) {
      rows[r][c] = std::to_string(rng.range(kMinValue, kMaxValue));
    }
  }

  SyntheticTask task;
  task.table = Table(std::move(columns), std::move(rows));
  const Table& t = task.table;
  task.kind = static_cast<QuestionKind>(rng.index(4));

  std::map<std::string, std::vector<std::size_t>> by_category;
  for (std::size_t r = 0; r < num_rows; ++r) {
    by_category[t.cell(r, category_col)].push_back(r);
  }
  std::vector<std::string> multi, present;
  for (const auto& [value, rs] : by_category) {
    present.push_back(value);
    if (rs.size() >= 2) multi.push_back(value);
  }

  const std::string& key_name = t.columns()[0];
  switch (task.kind) {
    case QuestionKind::kCellLookup: {
      const std::size_t row = rng.index(num_rows);
      task.target_column = 1 + rng.index(num_cols - 1);
      task.condition_column = 0;
      task.condition_value = t.cell(row, 0);
      task.question = "What is the " + t.columns()[task.target_column] +
                      " of the " + key_name + " " + task.condition_value + "?";
      break;
    }
    case QuestionKind::kColumnSum:
    case QuestionKind::kColumnMax: {
      task.target_column = numeric_cols[rng.index(numeric_cols.size())];
      task.condition_column = category_col;
      task.condition_value = multi[rng.index(multi.size())];
      const std::string& tc = t.columns()[task.target_column];
      const std::string& cc = t.columns()[category_col];
      task.question =
          task.kind == QuestionKind::kColumnSum
              ? "What is the total " + tc + " of rows whose " + cc + " is " +
                    task.condition_value + "?"
              : "What is the highest " + tc + " among rows whose " + cc +
                    " is " + task.condition_value + "?";
      break;
    }
    case QuestionKind::kFilteredCount: {
      task.target_column = category_col;
      task.condition_column = category_col;
      task.condition_value = present[rng.index(present.size())];
      task.question = "How many rows have " + t.columns()[category_col] +
                      " equal to " + task.condition_value + "?";
      break;
    }
  }
  task.condition_rows = rows_where(t, task.condition_column, task.condition_value);
  task.gold_region = TableRegion({task.target_column}, task.condition_rows);

  const auto gold = execute_strategy(task, task.gold_region, Strategy::kCorrect);
  if (const auto number = parse_number(*gold);
      number && task.target_column != category_col) {
    task.gold_answer = AnswerSpec::numeric(*number);
  } else if (task.kind == QuestionKind::kFilteredCount) {
    task.gold_answer = AnswerSpec::numeric(*parse_number(*gold));
  } else {
    task.gold_answer = AnswerSpec::text(*gold);
  }

  build_candidates(task, rng);
  return task;
}

}  // namespace

std::string_view to_string(QuestionKind kind) {
  switch (kind) {
    case QuestionKind::kCellLookup:
      return "cell-lookup";
    case QuestionKind::kColumnSum:
      return "column-sum";
    case QuestionKind::kColumnMax:
      return "column-max";
    case QuestionKind::kFilteredCount:
      return "filtered-count";
  }
  return "?";
}

void TaskShape::validate() const {
  if (min_columns < 3) throw ConfigError("tables need at least 3 columns");
  if (min_rows < 2) throw ConfigError("tables need at least 2 rows");
  if (max_rows < min_rows || max_columns < min_columns) {
    throw ConfigError("table shape bounds are inverted");
  }
  if (max_rows > std::size(kEntityNames)) {
    throw ConfigError("max_rows exceeds the entity name pool");
  }
  if (max_columns - 2 > std::size(kNumericColumnNames)) {
    throw ConfigError("max_columns exceeds the column name pool");
  }
}

std::vector<SyntheticTask> generate_tasks(std::uint64_t seed, std::size_t count,
                                          const TaskShape& shape) {
  shape.validate();
  std::vector<SyntheticTask> tasks;
  tasks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed({seed, i}));
    tasks.push_back(make_task(rng, shape));
  }
  return tasks;
}

std::optional<std::string> execute_strategy(const SyntheticTask& task,
                                            const TableRegion& region,
                                            Strategy strategy) {
  const Table& t = task.table;
  const auto& cols = region.columns();
  const bool has_condition = contains(cols, task.condition_column);

  // With the condition column in view the question's filter can be applied;
  // otherwise every selected row is taken to qualify.
  std::vector<std::size_t> rows;
  for (std::size_t r : region.rows()) {
    if (!has_condition || t.cell(r, task.condition_column) == task.condition_value)
      rows.push_back(r);
  }

  switch (strategy) {
    case Strategy::kCorrect:
      if (!contains(cols, task.target_column)) return std::nullopt;
      return apply_operation(t, task.kind, task.target_column, rows,
                             task.condition_value);
    case Strategy::kWrongAggregate:
      if (!contains(cols, task.target_column)) return std::nullopt;
      return apply_operation(t, wrong_aggregate(task.kind), task.target_column,
                             rows, task.condition_value);
    case Strategy::kWrongColumn:
      for (std::size_t c : cols) {
        if (c != task.target_column && c != task.condition_column) {
          return apply_operation(t, task.kind, c, rows, task.condition_value);
        }
      }
      return std::nullopt;
  }
  return std::nullopt;
}

bool answer_computable(const SyntheticTask& task, const TableRegion& region,
                       const RewardConfig& config) {
  if (!std::includes(region.rows().begin(), region.rows().end(),
                     task.condition_rows.begin(), task.condition_rows.end())) {
    return false;
  }
  const auto answer = execute_strategy(task, region, Strategy::kCorrect);
  return answer && answer_reward(*answer, task.gold_answer, config) == 1.0;
}

bool gold_region_is_minimal(const SyntheticTask& task,
                            const RewardConfig& config) {
  const TableRegion& gold = task.gold_region;
  if (!answer_computable(task, gold, config)) return false;
  for (std::size_t i = 0; i < gold.columns().size(); ++i) {
    auto cols = gold.columns();
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(i));
    if (answer_computable(task, TableRegion(cols, gold.rows()), config))
      return false;
  }
  for (std::size_t i = 0; i < gold.rows().size(); ++i) {
    auto rows = gold.rows();
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
    if (answer_computable(task, TableRegion(gold.columns(), rows), config))
      return false;
  }
  return true;
}

std::array<double, kColumnFeatures> column_features(
    const SyntheticTask& task, const std::vector<std::size_t>& columns) {
  const bool separate_condition = task.condition_column != task.target_column;
  double has_target = 0.0, has_condition = 0.0, others = 0.0;
  for (std::size_t c : columns) {
    if (c == task.target_column) {
      has_target = 1.0;
    } else if (separate_condition && c == task.condition_column) {
      has_condition = 1.0;
    } else {
      others += 1.0;
    }
  }
  return {has_target, has_condition,
          others / static_cast<double>(task.table.num_columns())};
}

std::array<double, kRowFeatures> row_features(
    const SyntheticTask& task, const std::vector<std::size_t>& rows) {
  double hit = 0.0;
  for (std::size_t r : rows) hit += contains(task.condition_rows, r) ? 1.0 : 0.0;
  const double recall =
      task.condition_rows.empty()
          ? 1.0
          : hit / static_cast<double>(task.condition_rows.size());
  const double precision =
      rows.empty() ? 0.0 : hit / static_cast<double>(rows.size());
  return {recall, precision,
          static_cast<double>(rows.size()) /
              static_cast<double>(task.table.num_rows())};
}

}  // namespace tarpo::sim
