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

#include "tarpo/errors.hpp"
#include "tarpo/region_text.hpp"

using namespace tarpo;

namespace {

const Table kTable({"No", "Single", "Year"},
                   {{"1", "Alpha", "1990"}, {"2", "Beta", "1991"},
                    {"3", "Gamma", "1992"}, {"4", "Delta", "1993"}});

}  // namespace

TEST_CASE("region declaration in running text") {
  const auto m = parse_region_from_text(
      "The relevant part is T_reg = {[\"Single\"], [1,3]} so we look there.");
  REQUIRE(m.has_value());
  REQUIRE(m->region.columns.size() == 1);
  CHECK(std::get<std::string>(m->region.columns[0]) == "Single");
  CHECK(m->region.rows == std::vector<long long>{1, 3});
  CHECK(canonicalize_region(m->region, kTable) == TableRegion({1}, {1, 3}));
}

TEST_CASE("alternate syntaxes") {
  CHECK(parse_region_from_text("T_{reg}: {['Year', 0], []}")->region.columns.size() == 2);
  const auto obj = parse_region_from_text("x {\"columns\": [\"No\"], \"rows\": [2]}");
  REQUIRE(obj.has_value());
  CHECK(canonicalize_region(obj->region, kTable) == TableRegion({0}, {2}));
}

TEST_CASE("absent and malformed declarations") {
  CHECK_FALSE(parse_region_from_text("no region here").has_value());
  CHECK_THROWS_AS(parse_region_from_text("T_reg = {[}"), RegionSyntaxError);
  CHECK_THROWS_AS(parse_region_from_text("T_reg = {[\"a\"], [1, x]}"), RegionSyntaxError);
}

TEST_CASE("first declaration wins and all are counted") {
  const std::string text =
      "T_reg = {[\"No\"], [0]} then again T_reg = {[\"Year\"], [1]}";
  CHECK(count_region_markers(text) == 2);
  CHECK(canonicalize_region(parse_region_from_text(text)->region, kTable) ==
        TableRegion({0}, {0}));
}

TEST_CASE("answer marker") {
  CHECK(extract_answer("a\nFinal Answer: 42\n") == std::optional<std::string>("42"));
  CHECK(extract_answer("final answer: x\nFINAL ANSWER:  y  \nmore") ==
        std::optional<std::string>("y"));
  CHECK_FALSE(extract_answer("no marker").has_value());
  CHECK_FALSE(extract_answer("Final Answer:   ").has_value());
}

TEST_CASE("reasoning kinds") {
  for (auto k : {ReasoningKind::kDP, ReasoningKind::kTCoT, ReasoningKind::kSCoT,
                 ReasoningKind::kPoT}) {
    CHECK(parse_reasoning_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_reasoning_kind("CoT"), Error);
}

TEST_CASE("parse_response reports problems instead of throwing") {
  const auto ok = parse_response("T_reg = {[\"Year\"], [0]}\nFinal Answer: 1990",
                                 ReasoningKind::kTCoT, kTable);
  CHECK(ok.region_status == RegionStatus::kFound);
  CHECK(ok.region == TableRegion({2}, {0}));
  CHECK(ok.answer_text == std::optional<std::string>("1990"));

  const auto absent = parse_response("Final Answer: 1990", ReasoningKind::kDP, kTable);
  CHECK(absent.region_status == RegionStatus::kAbsent);
  CHECK_FALSE(absent.region.has_value());

  const auto bad = parse_response("T_reg = {[", ReasoningKind::kDP, kTable);
  CHECK(bad.region_status == RegionStatus::kSyntaxError);
  CHECK_FALSE(bad.diagnostic.empty());
  CHECK_FALSE(bad.answer_text.has_value());

  const auto unbound = parse_response("T_reg = {[\"Chart\"], [0]}",
                                      ReasoningKind::kSCoT, kTable);
  CHECK(unbound.region_status == RegionStatus::kUnbindable);
  CHECK_FALSE(unbound.region.has_value());
}
