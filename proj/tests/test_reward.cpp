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

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tarpo/reward.hpp"
#include "tarpo/rng.hpp"
#include "tarpo/rouge.hpp"

using namespace tarpo;

TEST_CASE("rouge_l") {
  CHECK(rouge_l("gold medal", "gold medal") == 1.0);
  CHECK(rouge_l("", "gold") == 0.0);
  CHECK(rouge_l("gold", "") == 0.0);
  CHECK(rouge_l("banana", "apple") == 0.0);
  // LCS 2, P = 2/3, R = 1.
  CHECK(rouge_l("the gold medal", "gold medal") == 0.8);
  CHECK(rouge_l("Gold-Medal!", "gold medal") == 1.0);
}

TEST_CASE("rouge_l against the recursive LCS oracle") {
  Rng rng(3);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> p(rng.index(9)), r(rng.index(9));
    std::string ps, rs;
    for (auto& w : p) { w = vocab[rng.index(vocab.size())]; ps += w + " "; }
    for (auto& w : r) { w = vocab[rng.index(vocab.size())]; rs += w + " "; }
    CHECK(lcs_length(rouge_tokenize(ps), rouge_tokenize(rs)) == oracle::Lcs(p, r)());
    CHECK(std::abs(rouge_l(ps, rs) - oracle::rouge_f1(p, r)) <= 1e-12);
  }
}

TEST_CASE("answer_reward") {
  RewardConfig cfg;
  CHECK(answer_reward("42", AnswerSpec::numeric(42), cfg) == 1.0);
  CHECK(answer_reward("42.0", AnswerSpec::numeric(42), cfg) == 1.0);
  CHECK(answer_reward("1,234", AnswerSpec::numeric(1234), cfg) == 1.0);
  CHECK(answer_reward("$5", AnswerSpec::numeric(5), cfg) == 1.0);
  CHECK(answer_reward("43", AnswerSpec::numeric(42), cfg) == 0.0);
  CHECK(answer_reward("forty-two", AnswerSpec::numeric(42), cfg) == 0.0);
  CHECK(answer_reward("banana", AnswerSpec::text("apple"), cfg) == 0.0);
  CHECK(answer_reward("the gold medal", AnswerSpec::text("gold medal"), cfg) == 1.0);
  CHECK(answer_reward("Beta, Alpha", AnswerSpec::list({"Alpha", "Beta"}), cfg) == 1.0);
  CHECK(answer_reward("Alpha", AnswerSpec::list({"Alpha", "Beta"}), cfg) == 0.0);
}

TEST_CASE("threshold is strict unless configured otherwise") {
  // F1 = 2*3 / (5+5) = 0.6, exactly the threshold.
  const std::string p = "a b c d e", r = "a b c f g";
  REQUIRE(rouge_l(p, r) == 0.6);
  RewardConfig cfg;
  CHECK(answer_reward(p, AnswerSpec::text(r), cfg) == 0.0);
  cfg.strict_threshold = false;
  CHECK(answer_reward(p, AnswerSpec::text(r), cfg) == 1.0);
}

TEST_CASE("parse_number") {
  CHECK(parse_number(" 3.5 ") == std::optional<double>(3.5));
  CHECK(parse_number("12%") == std::optional<double>(12));
  CHECK(parse_number("-7") == std::optional<double>(-7));
  CHECK_FALSE(parse_number("abc").has_value());
  CHECK_FALSE(parse_number("").has_value());
  CHECK_FALSE(parse_number("inf").has_value());
}

TEST_CASE("region_reward") {
  const TableRegion g({1, 2}, {2, 3});
  CHECK(region_reward(g, g) == 1.0);
  CHECK(region_reward(TableRegion({0}, {0}), TableRegion({1}, {1})) == 0.0);
  // Columns 1/3, rows 2/3.
  CHECK(region_reward(TableRegion({0, 1}, {1, 2, 3}), g) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(region_reward(std::optional<TableRegion>{}, g) == 0.0);
  CHECK(region_reward(std::optional<TableRegion>{TableRegion({1}, {})}, g) > 0.0);
  // Two empty axes agree perfectly.
  CHECK(region_reward(TableRegion({}, {}), TableRegion({}, {})) == 1.0);
}

TEST_CASE("region_reward stays in [0,1] and is symmetric") {
  Rng rng(17);
  auto subset = [&](std::size_t n) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) if (rng.uniform() < 0.4) s.push_back(i);
    return s;
  };
  for (int i = 0; i < 2000; ++i) {
    const TableRegion a(subset(8), subset(8)), b(subset(8), subset(8));
    const double v = region_reward(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v == region_reward(b, a));
  }
}

TEST_CASE("alpha schedule and mixing") {
  RewardConfig cfg;
  CHECK(alpha_schedule(0, cfg) == 0.3);
  CHECK(alpha_schedule(770, cfg) == doctest::Approx(0.3 * std::exp(-0.693)).epsilon(1e-14));
  CHECK(alpha_schedule(100000, cfg) < 1e-30);
  CHECK(mixed_reward(1, 1, 0.42) == 1.0);
  CHECK(mixed_reward(1, 0, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(mixed_reward(0.5, 1, 0.3) == doctest::Approx(0.85).epsilon(1e-15));
}

TEST_CASE("config validation") {
  RewardConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.zeta = 1.5;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.rho = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.epsilon = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.lambda = -1.0;
  CHECK_THROWS(cfg.validate());
}
