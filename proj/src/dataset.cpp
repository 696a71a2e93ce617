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

#include "tarpo/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tarpo/errors.hpp"

namespace tarpo {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& path,
                    std::size_t line) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(path, line, std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::string require_string(const json& j, const char* key,
                           const std::string& path, std::size_t line) {
  const json& v = require(j, key, path, line);
  if (!v.is_string()) {
    throw SchemaError(path, line, std::string("field \"") + key + "\" must be a string");
  }
  return v.get<std::string>();
}

std::string cell_string(const json& v, const std::string& path, std::size_t line) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_null()) return "";
  throw SchemaError(path, line, "table cells must be strings or numbers");
}

Table parse_table_field(const json& t, const std::string& path, std::size_t line) {
  try {
    if (t.is_string()) return parse_table(t.get<std::string>());
    const json& cols = require(t, "columns", path, line);
    const json& rows = require(t, "rows", path, line);
    if (!cols.is_array() || !rows.is_array()) {
      throw SchemaError(path, line, "table columns and rows must be arrays");
    }
    std::vector<std::string> columns;
    for (const auto& c : cols) columns.push_back(cell_string(c, path, line));
    std::vector<std::vector<std::string>> body;
    for (const auto& r : rows) {
      if (!r.is_array()) throw SchemaError(path, line, "table rows must be arrays");
      std::vector<std::string> row;
      for (const auto& c : r) row.push_back(cell_string(c, path, line));
      body.push_back(std::move(row));
    }
    return Table(std::move(columns), std::move(body));
  } catch (const MalformedTable& e) {
    throw SchemaError(path, line, e.what());
  }
}

AnswerSpec parse_answer(const json& a, const std::string& path, std::size_t line) {
  const std::string kind = require_string(a, "kind", path, line);
  if (kind == "numeric") {
    const json& v = require(a, "value", path, line);
    std::optional<double> value;
    if (v.is_number()) value = v.get<double>();
    if (v.is_string()) value = parse_number(v.get<std::string>());
    if (!value || !std::isfinite(*value)) {
      throw SchemaError(path, line, "numeric gold answer must be a finite real");
    }
    return AnswerSpec::numeric(*value);
  }
  if (kind == "text") {
    return AnswerSpec::text(cell_string(require(a, "value", path, line), path, line));
  }
  if (kind == "list") {
    const json& vs = require(a, "values", path, line);
    if (!vs.is_array() || vs.empty()) {
      throw SchemaError(path, line, "list gold answer needs a non-empty array");
    }
    std::vector<std::string> values;
    for (const auto& v : vs) values.push_back(cell_string(v, path, line));
    return AnswerSpec::list(std::move(values));
  }
  throw SchemaError(path, line, "unknown gold_answer kind \"" + kind + "\"");
}

RawRegion parse_region_field(const json& r, const std::string& path,
                             std::size_t line) {
  const json& cols = require(r, "columns", path, line);
  const json& rows = require(r, "rows", path, line);
  if (!cols.is_array() || !rows.is_array()) {
    throw SchemaError(path, line, "gold_region columns and rows must be arrays");
  }
  RawRegion raw;
  for (const auto& c : cols) {
    if (c.is_string()) {
      raw.columns.emplace_back(c.get<std::string>());
    } else if (c.is_number_integer()) {
      raw.columns.emplace_back(c.get<long long>());
    } else {
      throw SchemaError(path, line, "region columns must be names or indices");
    }
  }
  for (const auto& x : rows) {
    if (!x.is_number_integer()) {
      throw SchemaError(path, line, "region rows must be integers");
    }
    raw.rows.push_back(x.get<long long>());
  }
  return raw;
}

}  // namespace

std::vector<std::pair<std::size_t, nlohmann::json>> read_json_lines(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::pair<std::size_t, json>> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (trim(line).empty()) continue;
    try {
      out.emplace_back(no, json::parse(line));
    } catch (const json::parse_error& e) {
      throw SchemaError(path, no, std::string("invalid JSON: ") + e.what());
    }
  }
  return out;
}

DatasetRecord parse_dataset_record(const nlohmann::json& j,
                                   const std::string& path, std::size_t line) {
  if (!j.is_object()) throw SchemaError(path, line, "record must be an object");
  if (j.contains("schema_version")) {
    const json& v = j.at("schema_version");
    if (!v.is_number_integer() || v.get<int>() != kDatasetSchemaVersion) {
      throw SchemaError(path, line, "unsupported schema_version");
    }
  }
  DatasetRecord rec;
  rec.id = require_string(j, "id", path, line);
  rec.table = parse_table_field(require(j, "table", path, line), path, line);
  if (j.contains("question")) rec.question = require_string(j, "question", path, line);
  rec.gold_answer = parse_answer(require(j, "gold_answer", path, line), path, line);
  const RawRegion raw =
      parse_region_field(require(j, "gold_region", path, line), path, line);
  try {
    rec.gold_region = canonicalize_region(raw, rec.table);
  } catch (const Error& e) {
    throw SchemaError(path, line, std::string("gold_region: ") + e.what());
  }
  try {
    rec.reasoning_kind =
        parse_reasoning_kind(require_string(j, "reasoning_kind", path, line));
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, line, e.what());
  }
  return rec;
}

std::vector<DatasetRecord> load_dataset(const std::string& path) {
  std::vector<DatasetRecord> out;
  for (const auto& [line, j] : read_json_lines(path)) {
    out.push_back(parse_dataset_record(j, path, line));
  }
  return out;
}

nlohmann::ordered_json to_json(const DatasetRecord& record) {
  nlohmann::ordered_json j;
  j["schema_version"] = kDatasetSchemaVersion;
  j["id"] = record.id;
  j["table"] = {{"columns", record.table.columns()},
                {"rows", record.table.rows()}};
  j["question"] = record.question;
  const auto& a = record.gold_answer;
  switch (a.kind) {
    case AnswerSpec::Kind::kNumeric:
      j["gold_answer"] = {{"kind", "numeric"}, {"value", a.number}};
      break;
    case AnswerSpec::Kind::kText:
      j["gold_answer"] = {{"kind", "text"}, {"value", a.values.at(0)}};
      break;
    case AnswerSpec::Kind::kList:
      j["gold_answer"] = {{"kind", "list"}, {"values", a.values}};
      break;
  }
  std::vector<std::string> cols;
  for (std::size_t c : record.gold_region.columns()) {
    cols.push_back(trim(record.table.columns()[c]));
  }
  j["gold_region"] = {{"columns", cols}, {"rows", record.gold_region.rows()}};
  j["reasoning_kind"] = std::string(to_string(record.reasoning_kind));
  return j;
}

Transcript parse_transcript(const nlohmann::json& j, const std::string& path,
                            std::size_t line) {
  Transcript t;
  t.id = require_string(j, "id", path, line);
  t.response = require_string(j, "response", path, line);
  return t;
}

std::vector<Transcript> load_transcripts(const std::string& path) {
  std::vector<Transcript> out;
  for (const auto& [line, j] : read_json_lines(path)) {
    out.push_back(parse_transcript(j, path, line));
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace tarpo
