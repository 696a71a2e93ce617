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

#ifndef TARPO_DATASET_HPP_
#define TARPO_DATASET_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "tarpo/region_text.hpp"
#include "tarpo/reward.hpp"
#include "tarpo/table.hpp"

namespace tarpo {

// Dataset files are UTF-8 JSON Lines, one record per line:
//
//   {"schema_version": 1, "id": "q1",
//    "table": {"columns": ["Team", "Gold"], "rows": [["Kenya", "4"]]},
//    "question": "...",
//    "gold_answer": {"kind": "numeric", "value": 4},
//    "gold_region": {"columns": ["Gold"], "rows": [0]},
//    "reasoning_kind": "TCoT"}
//
// "table" may also be a markdown pipe table string. gold_answer kinds are
// numeric (value: number), text (value: string) and list (values: array of
// strings). Region columns may be names or 0-based indices; rows are 0-based
// data-row positions.
//
// Transcript files use the same framing: {"id": "q1", "response": "..."}.

inline constexpr int kDatasetSchemaVersion = 1;

struct DatasetRecord {
  std::string id;
  Table table;
  std::string question;
  AnswerSpec gold_answer;
  TableRegion gold_region;
  ReasoningKind reasoning_kind = ReasoningKind::kTCoT;
};

struct Transcript {
  std::string id;
  std::string response;
};

/// Throws SchemaError(path, line) on any malformed record, including a
/// gold region that does not bind to its table.
DatasetRecord parse_dataset_record(const nlohmann::json& j,
                                   const std::string& path, std::size_t line);
std::vector<DatasetRecord> load_dataset(const std::string& path);

nlohmann::ordered_json to_json(const DatasetRecord& record);

Transcript parse_transcript(const nlohmann::json& j, const std::string& path,
                            std::size_t line);
std::vector<Transcript> load_transcripts(const std::string& path);

/// Reads non-blank lines as JSON. Throws SchemaError on invalid JSON and
/// Error when the file cannot be opened.
std::vector<std::pair<std::size_t, nlohmann::json>> read_json_lines(
    const std::string& path);

/// Writes `contents` to `path` via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace tarpo

#endif  // TARPO_DATASET_HPP_
