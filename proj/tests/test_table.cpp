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


#include <doctest.h>

#include <string>
#include <vector>

#include "tarpo/errors.hpp"
#include "tarpo/region_text.hpp"
#include "tarpo/rng.hpp"
#include "tarpo/table.hpp"

using namespace tarpo;

namespace {

Table grid(std::size_t rows, std::size_t cols) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols; ++c) names.push_back("c" + std::to_string(c));
  std::vector<std::vector<std::string>> body(rows, std::vector<std::string>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      body[r][c] = std::to_string(r) + ":" + std::to_string(c);
  return Table(names, body);
}

std::vector<std::size_t> random_subset(Rng& rng, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (rng.uniform() < 0.5) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("parse_table") {
  const Table t = parse_table("| a | b |\n|---|---|\n| 1 | 2 |");
  CHECK(t.columns() == std::vector<std::string>{"a", "b"});
  REQUIRE(t.num_rows() == 1);
  CHECK(t.rows()[0] == std::vector<std::string>{"1", "2"});

  const Table empty = parse_table("| a |\n|---|");
  CHECK(empty.num_columns() == 1);
  CHECK(empty.num_rows() == 0);

  CHECK_THROWS_AS(parse_table("| a | b |\n|---|---|\n| 1 |"), MalformedTable);
  CHECK_THROWS_AS(parse_table("| a | b |\n| 1 | 2 |"), MalformedTable);
  CHECK_THROWS_AS(parse_table("| a | a |\n|---|---|"), MalformedTable);
}

TEST_CASE("escaped pipes stay inside a cell") {
  const Table t = parse_table("| x |\n|---|\n| a \\| b |");
  CHECK(t.cell(0, 0) == "a | b");
}

TEST_CASE("canonicalize_region") {
  const Table t({"No", "Single", "Year", "Chart"},
                {{"1", "a", "1990", "3"}, {"2", "b", "1991", "1"},
                 {"3", "c", "1992", "7"}});
  SUBCASE("names resolve, duplicates collapse") {
    const auto r = canonicalize_region({{std::string("Single")}, {0, 2, 0}}, t);
    CHECK(r.columns() == std::vector<std::size_t>{1});
    CHECK(r.rows() == std::vector<std::size_t>{0, 2});
  }
  SUBCASE("empty axis") {
    const auto r = canonicalize_region({{}, {0}}, t);
    CHECK(r.columns().empty());
    CHECK(r.rows() == std::vector<std::size_t>{0});
  }
  SUBCASE("integer column index") {
    const auto r = canonicalize_region({{3LL, std::string(" Year ")}, {}}, t);
    CHECK(r.columns() == std::vector<std::size_t>{2, 3});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(canonicalize_region({{std::string("Nope")}, {0}}, t), UnknownColumn);
    CHECK_THROWS_AS(canonicalize_region({{4LL}, {0}}, t), ColumnIndexOutOfRange);
    CHECK_THROWS_AS(canonicalize_region({{-1LL}, {0}}, t), ColumnIndexOutOfRange);
    CHECK_THROWS_AS(canonicalize_region({{}, {3}}, t), RowIndexOutOfRange);
    CHECK_THROWS_AS(canonicalize_region({{}, {-2}}, t), RowIndexOutOfRange);
  }
}

TEST_CASE("extract_subtable") {
  const Table t = grid(3, 3);
  CHECK(extract_subtable(t, full_region(t)) == t);

  const Table one_col = extract_subtable(t, TableRegion({0}, {}));
  CHECK(one_col.columns() == std::vector<std::string>{"c0"});
  CHECK(one_col.num_rows() == 0);

  // Middle row, outer columns, written out by hand.
  const Table mid = extract_subtable(t, TableRegion({0, 2}, {1}));
  CHECK(mid.columns() == std::vector<std::string>{"c0", "c2"});
  REQUIRE(mid.num_rows() == 1);
  CHECK(mid.rows()[0] == std::vector<std::string>{"1:0", "1:2"});
}

TEST_CASE("extract_subtable keeps exactly the selected cells in order") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Table t = grid(1 + rng.index(8), 1 + rng.index(8));
    const TableRegion reg(random_subset(rng, t.num_columns()),
                          random_subset(rng, t.num_rows()));
    const Table sub = extract_subtable(t, reg);
    REQUIRE(sub.num_columns() == reg.columns().size());
    REQUIRE(sub.num_rows() == reg.rows().size());
    for (std::size_t i = 0; i < reg.rows().size(); ++i)
      for (std::size_t j = 0; j < reg.columns().size(); ++j)
        CHECK(sub.cell(i, j) == t.cell(reg.rows()[i], reg.columns()[j]));
  }
}

TEST_CASE("serialize_region format") {
  const Table t({"No", "Single", "Year"}, {{"1", "a", "x"}, {"2", "b", "y"}});
  CHECK(serialize_region(TableRegion({2, 1}, {1, 0}), t) ==
        "T_reg = {[\"Single\", \"Year\"], [0, 1]}");
  CHECK(serialize_region(TableRegion({}, {}), t) == "T_reg = {[], []}");
}

TEST_CASE("serialize then parse round-trips") {
  Rng rng(5);
  const std::vector<std::string> odd = {"plain", "with space", "q\"uote",
                                        "back\\slash", "comma, here", "[b]"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> names;
    const std::size_t cols = 1 + rng.index(odd.size());
    for (std::size_t c = 0; c < cols; ++c) names.push_back(odd[c]);
    std::vector<std::vector<std::string>> body(1 + rng.index(8),
                                               std::vector<std::string>(cols, "v"));
    const Table t(names, body);
    const TableRegion reg(random_subset(rng, t.num_columns()),
                          random_subset(rng, t.num_rows()));
    const std::string text = "Reasoning. " + serialize_region(reg, t) + " Final Answer: 1";
    const auto m = parse_region_from_text(text);
    REQUIRE(m.has_value());
    CHECK(canonicalize_region(m->region, t) == reg);
  }
}
