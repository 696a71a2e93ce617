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

#ifndef TARPO_TABLE_HPP_
#define TARPO_TABLE_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tarpo {

/// A rectangular table of cell strings with unique column names.
///
/// Construction validates the shape; a Table is immutable afterwards.
/// Rows are addressed by 0-based position among the data rows (the header is
/// not a row).
class Table {
 public:
  Table() = default;
  Table(std::vector<std::string> columns,
        std::vector<std::vector<std::string>> rows);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t num_columns() const { return columns_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const std::string& cell(std::size_t row, std::size_t col) const {
    return rows_[row][col];
  }

  // Index of the column whose trimmed name equals trimmed `name`, or npos.
  std::size_t find_column(std::string_view name) const;

  friend bool operator==(const Table&, const Table&) = default;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Canonical column/row region: sorted, duplicate-free 0-based indices.
class TableRegion {
 public:
  TableRegion() = default;
  // Sorts and deduplicates; does not range-check (see canonicalize_region).
  TableRegion(std::vector<std::size_t> columns, std::vector<std::size_t> rows);

  const std::vector<std::size_t>& columns() const { return columns_; }
  const std::vector<std::size_t>& rows() const { return rows_; }
  bool empty() const { return columns_.empty() && rows_.empty(); }

  // True when every index is in range for `table`.
  bool fits(const Table& table) const;

  friend bool operator==(const TableRegion&, const TableRegion&) = default;

 private:
  std::vector<std::size_t> columns_;
  std::vector<std::size_t> rows_;
};

/// A region as declared in text: columns by name or by index, rows possibly
/// repeated or unsorted.
struct RawRegion {
  using ColumnRef = std::variant<std::string, long long>;
  std::vector<ColumnRef> columns;
  std::vector<long long> rows;

  friend bool operator==(const RawRegion&, const RawRegion&) = default;
};

std::string trim(std::string_view s);

/// Parses a markdown pipe table: header row, `---` separator row, data rows.
/// Throws MalformedTable on a missing header/separator or ragged rows.
Table parse_table(std::string_view text);

/// Resolves names to indices (exact, case-sensitive, after trimming), drops
/// duplicates and sorts. Throws UnknownColumn, ColumnIndexOutOfRange or
/// RowIndexOutOfRange.
TableRegion canonicalize_region(const RawRegion& raw, const Table& table);

TableRegion full_region(const Table& table);

/// Selected columns and rows, in original relative order.
Table extract_subtable(const Table& table, const TableRegion& region);

/// `T_reg = {["<col>", ...], [<row>, ...]}` with names in column-index order.
std::string serialize_region(const TableRegion& region, const Table& table);

/// Same syntax for a region that has not been bound to a table. Columns are
/// written in first-appearance order with duplicates dropped; index
/// references are written as bare integers. Rows are sorted and deduplicated.
std::string serialize_region(const RawRegion& raw);

}  // namespace tarpo

#endif  // TARPO_TABLE_HPP_
