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

#include "tarpo/table.hpp"

#include <algorithm>
#include <set>

#include "tarpo/errors.hpp"

namespace tarpo {
namespace {

void sort_unique(std::vector<std::size_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Splits one `| a | b |` line into trimmed cells. Leading and trailing pipes
// are optional; `\|` is an escaped pipe inside a cell.
std::vector<std::string> split_pipe_row(std::string_view line) {
  std::string body = trim(line);
  if (!body.empty() && body.front() == '|') body.erase(0, 1);
  if (!body.empty() && body.back() == '|' &&
      (body.size() < 2 || body[body.size() - 2] != '\\')) {
    body.pop_back();
  }
  std::vector<std::string> cells;
  std::string cur;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '\\' && i + 1 < body.size() && body[i + 1] == '|') {
      cur.push_back('|');
      ++i;
    } else if (body[i] == '|') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(body[i]);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

bool is_separator_row(const std::vector<std::string>& cells) {
  for (const auto& c : cells) {
    if (c.empty()) return false;
    for (char ch : c) {
      if (ch != '-' && ch != ':') return false;
    }
    if (c.find('-') == std::string::npos) return false;
  }
  return !cells.empty();
}

void append_quoted(std::string& out, std::string_view s) {
  out.push_back('"');
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  out.push_back('"');
}

template <typename Cols, typename Rows, typename EmitCol>
std::string serialize_lists(const Cols& cols, const Rows& rows,
                            EmitCol emit_col) {
  std::string out = "T_reg = {[";
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ", ";
    emit_col(out, cols[i]);
  }
  out += "], [";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(rows[i]);
  }
  out += "]}";
  return out;
}

}  // namespace

std::string trim(std::string_view s) {
  const auto is_space = [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

Table::Table(std::vector<std::string> columns,
             std::vector<std::vector<std::string>> rows)
    : columns_(std::move(columns)), rows_(std::move(rows)) {
  std::set<std::string> seen;
  for (const auto& c : columns_) {
    if (!seen.insert(trim(c)).second) {
      throw MalformedTable("duplicate column name: \"" + trim(c) + "\"");
    }
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != columns_.size()) {
      throw MalformedTable("row " + std::to_string(r) + " has " +
                           std::to_string(rows_[r].size()) + " cells, expected " +
                           std::to_string(columns_.size()));
    }
  }
}

std::size_t Table::find_column(std::string_view name) const {
  const std::string key = trim(name);
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (trim(columns_[i]) == key) return i;
  }
  return npos;
}

TableRegion::TableRegion(std::vector<std::size_t> columns,
                         std::vector<std::size_t> rows)
    : columns_(std::move(columns)), rows_(std::move(rows)) {
  sort_unique(columns_);
  sort_unique(rows_);
}

bool TableRegion::fits(const Table& table) const {
  return (columns_.empty() || columns_.back() < table.num_columns()) &&
         (rows_.empty() || rows_.back() < table.num_rows());
}

Table parse_table(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line = trim(text.substr(pos, nl - pos));
    if (!line.empty()) lines.push_back(split_pipe_row(line));
    pos = nl + 1;
  }
  if (lines.empty()) throw MalformedTable("missing header row");
  if (lines.size() < 2 || !is_separator_row(lines[1])) {
    throw MalformedTable("missing separator row after header");
  }
  std::vector<std::string> columns = std::move(lines[0]);
  if (lines[1].size() != columns.size()) {
    throw MalformedTable("separator row arity does not match header");
  }
  std::vector<std::vector<std::string>> rows(
      std::make_move_iterator(lines.begin() + 2),
      std::make_move_iterator(lines.end()));
  return Table(std::move(columns), std::move(rows));
}

TableRegion canonicalize_region(const RawRegion& raw, const Table& table) {
  std::vector<std::size_t> cols;
  cols.reserve(raw.columns.size());
  for (const auto& ref : raw.columns) {
    if (const auto* name = std::get_if<std::string>(&ref)) {
      const std::size_t idx = table.find_column(*name);
      if (idx == Table::npos) throw UnknownColumn(trim(*name));
      cols.push_back(idx);
    } else {
      const long long idx = std::get<long long>(ref);
      if (idx < 0 || static_cast<std::size_t>(idx) >= table.num_columns()) {
        throw ColumnIndexOutOfRange(idx);
      }
      cols.push_back(static_cast<std::size_t>(idx));
    }
  }
  std::vector<std::size_t> rows;
  rows.reserve(raw.rows.size());
  for (long long r : raw.rows) {
    if (r < 0 || static_cast<std::size_t>(r) >= table.num_rows()) {
      throw RowIndexOutOfRange(r);
    }
    rows.push_back(static_cast<std::size_t>(r));
  }
  return TableRegion(std::move(cols), std::move(rows));
}

TableRegion full_region(const Table& table) {
  std::vector<std::size_t> cols(table.num_columns());
  std::vector<std::size_t> rows(table.num_rows());
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return TableRegion(std::move(cols), std::move(rows));
}

Table extract_subtable(const Table& table, const TableRegion& region) {
  if (!region.fits(table)) {
    if (!region.columns().empty() &&
        region.columns().back() >= table.num_columns()) {
      throw ColumnIndexOutOfRange(
          static_cast<long long>(region.columns().back()));
    }
    throw RowIndexOutOfRange(static_cast<long long>(region.rows().back()));
  }
  std::vector<std::string> columns;
  columns.reserve(region.columns().size());
  for (std::size_t c : region.columns()) columns.push_back(table.columns()[c]);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(region.rows().size());
  for (std::size_t r : region.rows()) {
    std::vector<std::string> row;
    row.reserve(region.columns().size());
    for (std::size_t c : region.columns()) row.push_back(table.cell(r, c));
    rows.push_back(std::move(row));
  }
  return Table(std::move(columns), std::move(rows));
}

std::string serialize_region(const TableRegion& region, const Table& table) {
  return serialize_lists(region.columns(), region.rows(),
                         [&](std::string& out, std::size_t c) {
                           append_quoted(out, trim(table.columns().at(c)));
                         });
}

std::string serialize_region(const RawRegion& raw) {
  std::vector<RawRegion::ColumnRef> cols;
  for (const auto& ref : raw.columns) {
    RawRegion::ColumnRef key = ref;
    if (auto* name = std::get_if<std::string>(&key)) *name = trim(*name);
    if (std::find(cols.begin(), cols.end(), key) == cols.end()) {
      cols.push_back(std::move(key));
    }
  }
  std::vector<long long> rows = raw.rows;
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return serialize_lists(cols, rows,
                         [](std::string& out, const RawRegion::ColumnRef& c) {
                           if (const auto* name = std::get_if<std::string>(&c)) {
                             append_quoted(out, *name);
                           } else {
                             out += std::to_string(std::get<long long>(c));
                           }
                         });
}

}  // namespace tarpo
