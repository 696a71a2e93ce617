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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tarpo/commands.hpp"
#include "tarpo/config.hpp"
#include "tarpo/dataset.hpp"
#include "tarpo/errors.hpp"

using namespace tarpo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("tarpo_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& file, const std::string& text) const {
    const auto p = path / file;
    std::ofstream(p) << text;
    return p.string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kDataset =
    R"({"schema_version": 1, "id": "q1", "table": {"columns": ["Team", "Gold", "Silver"], "rows": [["Kenya", "4", "2"], ["Chile", "1", "0"], ["Peru", "0", "3"], ["Iran", "2", "2"]]}, "question": "Gold of Kenya?", "gold_answer": {"kind": "numeric", "value": 4}, "gold_region": {"columns": ["Gold"], "rows": [0]}, "reasoning_kind": "TCoT"}
{"schema_version": 1, "id": "q2", "table": "| Team | Gold |\n|---|---|\n| Kenya | 4 |\n| Chile | 1 |", "question": "Who won 1 gold?", "gold_answer": {"kind": "text", "value": "Chile"}, "gold_region": {"columns": ["Team", "Gold"], "rows": [1]}, "reasoning_kind": "DP"}
{"schema_version": 1, "id": "q3", "table": {"columns": ["Team", "Gold", "Silver"], "rows": [["Kenya", "4", "2"], ["Chile", "1", "0"], ["Peru", "0", "3"], ["Iran", "2", "2"]]}, "question": "Silver of Peru and Iran?", "gold_answer": {"kind": "list", "values": ["3", "2"]}, "gold_region": {"columns": [1, 2], "rows": [2, 3]}, "reasoning_kind": "SCoT"}
)";

// q1 exact; q2 without a region; q3 with columns {0,1} rows {1,2,3}
// against gold columns {1,2} rows {2,3}.
const char* kTranscripts =
    R"({"id": "q1", "response": "T_reg = {[\"Gold\"], [0]}\nFinal Answer: 4"}
{"id": "q2", "response": "Looking at the table.\nFinal Answer: Chile"}
{"id": "q3", "response": "T_reg = {[\"Team\", \"Gold\"], [1, 2, 3]}\nFinal Answer: 3, 2"}
)";

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_run_config(
      "# comment\n[reward]\nzeta = 0.5\n[train]\nalgorithm = grpo\nseeds = 1, 2, 3\n"
      "steps = 10 ; trailing comment\n[tasks]\nseed = 11\n[output]\ndir = out\n");
  CHECK(c.train.reward.zeta == 0.5);
  CHECK(c.train.algorithm == sim::Algorithm::kGrpo);
  CHECK(c.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(c.train.steps == 10);
  CHECK(c.task_seed == 11);
  CHECK(c.out_dir == "out");
  CHECK(c.train.reward.gamma == 0.3);

  CHECK_THROWS_AS(parse_run_config("[train]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[nope]\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("zeta = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[reward]\nzeta = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[reward]\nzeta = 2\n"), ConfigError);
}

TEST_CASE("config echo names every default") {
  const auto j = RunConfig{}.to_json();
  CHECK(j["reward"]["rho"] == 9e-4);
  CHECK(j["train"]["group_size"] == 16);
  CHECK(j["tasks"]["count"] == 500);
  CHECK(j["sim"]["verbosity_levels"] == 4);
}

TEST_CASE("dataset records") {
  TempDir dir("dataset");
  const auto recs = load_dataset(dir.write("d.jsonl", kDataset));
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].gold_region == TableRegion({1}, {0}));
  CHECK(recs[1].table.num_rows() == 2);
  CHECK(recs[1].reasoning_kind == ReasoningKind::kDP);
  CHECK(recs[2].gold_answer == AnswerSpec::list({"3", "2"}));

  // Round trip through the writer.
  const auto again = parse_dataset_record(nlohmann::json::parse(to_json(recs[2]).dump()),
                                          "mem", 1);
  CHECK(again.table == recs[2].table);
  CHECK(again.gold_region == recs[2].gold_region);
  CHECK(again.gold_answer == recs[2].gold_answer);

  const auto bad_region = dir.write(
      "bad.jsonl",
      R"({"schema_version": 1, "id": "x", "table": {"columns": ["a"], "rows": [["1"]]}, "question": "?", "gold_answer": {"kind": "numeric", "value": 1}, "gold_region": {"columns": ["b"], "rows": [0]}, "reasoning_kind": "DP"})"
      "\n");
  CHECK_THROWS_AS(load_dataset(bad_region), SchemaError);
  CHECK_THROWS_AS(load_dataset(dir.write("junk.jsonl", "{not json\n")), SchemaError);
  CHECK_THROWS_AS(load_dataset((dir.path / "missing.jsonl").string()), Error);
}

TEST_CASE("score") {
  TempDir dir("score");
  ScoreOptions o;
  o.dataset_path = dir.write("d.jsonl", kDataset);
  o.transcripts_path = dir.write("t.jsonl", kTranscripts);
  const auto report = cmd_score(o);
  REQUIRE(report.records.size() == 3);

  CHECK(report.records[0].region_reward == 1.0);
  CHECK(report.records[0].answer_reward == 1.0);
  CHECK(report.records[1].region_reward == 0.0);
  CHECK(report.records[1].answer_reward == 1.0);
  CHECK(report.records[1].region_status == RegionStatus::kAbsent);
  const double q3 = oracle::region_reward({0, 1}, {1, 2, 3}, {1, 2}, {2, 3}, 4);
  CHECK(report.records[2].region_reward == doctest::Approx(q3).epsilon(1e-15));
  CHECK(report.records[2].answer_reward == 1.0);

  // (1 + 0 + 0.5) / 3
  CHECK(report.overall.region_reward / report.overall.count ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(report.by_kind.size() == 3);

  double sum = 0.0;
  for (const auto& r : report.records) sum += r.mixed;
  CHECK(report.overall.mixed == sum);

  const auto lines = report.to_jsonl();
  CHECK(lines.find("\"type\":\"summary\"") != std::string::npos);
  CHECK(report.to_jsonl() == cmd_score(o).to_jsonl());

  o.transcripts_path = dir.write("t2.jsonl", R"({"id": "q9", "response": "x"})" "\n");
  CHECK_THROWS_AS(cmd_score(o), MissingRecord);
}

TEST_CASE("parse-region") {
  TempDir dir("parse");
  const auto path = dir.write(
      "t.jsonl",
      R"({"id": "a", "response": "Step. T_reg = {[\"Gold\"], [0]} then.\nFinal Answer: 4"}
{"id": "b", "response": "Final Answer: 4\nT_reg = {[\"Gold\"], [0]} and T_reg = {[\"Team\"], [1]}"}
{"id": "c", "response": "T_reg = {[\"Gold\""}
{"id": "d", "response": "nothing"}
not json
)");
  const auto rep = cmd_parse_region(path);
  REQUIRE(rep.size() == 5);
  CHECK(rep[0].status == "found");
  CHECK(rep[0].position == "pre-answer");
  CHECK(rep[0].region == std::optional<std::string>("T_reg = {[\"Gold\"], [0]}"));
  CHECK(rep[1].position == "post-answer");
  CHECK(rep[1].declarations == 2);
  CHECK(rep[1].region == std::optional<std::string>("T_reg = {[\"Gold\"], [0]}"));
  CHECK(rep[2].status == "syntax-error");
  CHECK(rep[3].status == "absent");
  CHECK(rep[4].status == "invalid-record");

  CHECK(cmd_parse_region(dir.write("empty.jsonl", "")).empty());
}

TEST_CASE("train-sim writes reproducible stats, compare reads them") {
  TempDir dir("train");
  RunConfig c;
  c.train.steps = 12;
  c.train.batch_size = 4;
  c.task_count = 60;
  c.seeds = {1, 2, 3};
  c.out_dir = (dir.path / "a").string();
  const auto runs = cmd_train_sim(c);
  REQUIRE(runs.size() == 3);
  for (const auto& r : runs) CHECK(fs::exists(r.path));
  CHECK(slurp(runs[0].path) != slurp(runs[1].path));

  c.out_dir = (dir.path / "b").string();
  const auto again = cmd_train_sim(c);
  for (std::size_t i = 0; i < 3; ++i) CHECK(slurp(runs[i].path) == slurp(again[i].path));

  const auto self = cmd_compare({runs[0].path, runs[0].path});
  CHECK(self.deltas[1].val_acc == 0.0);
  CHECK(self.deltas[1].mean_len == 0.0);

  RunConfig g = c;
  g.train.algorithm = sim::Algorithm::kGrpo;
  g.seeds = {1};
  const auto grpo = cmd_train_sim(g);
  const auto cmp = cmd_compare({grpo[0].path, runs[0].path});
  CHECK(cmp.deltas[1].val_acc == cmp.runs[1].val_acc - cmp.runs[0].val_acc);
  CHECK(cmp.deltas[1].mean_len == cmp.runs[1].mean_len - cmp.runs[0].mean_len);
  CHECK((cmp.deltas[1].mean_len < 0) == (cmp.runs[1].mean_len < cmp.runs[0].mean_len));

  RunConfig other = g;
  other.task_seed = 99;
  other.out_dir = (dir.path / "c").string();
  const auto o = cmd_train_sim(other);
  CHECK_THROWS_AS(cmd_compare({grpo[0].path, o[0].path}), IncompatibleRuns);
  CHECK_THROWS_AS(cmd_compare({grpo[0].path}), IncompatibleRuns);
}

TEST_CASE("tarpo with zero region weight and penalty matches grpo modulo the header") {
  TempDir dir("collapse");
  RunConfig c;
  c.train.steps = 10;
  c.train.batch_size = 4;
  c.task_count = 60;
  c.out_dir = dir.path.string();
  c.train.algorithm = sim::Algorithm::kGrpo;
  const auto g = slurp(cmd_train_sim(c)[0].path);
  c.train.algorithm = sim::Algorithm::kTarpo;
  c.train.reward.gamma = 0.0;
  c.train.reward.lambda = 0.0;
  const auto t = slurp(cmd_train_sim(c)[0].path);
  const auto body = [](const std::string& s) { return s.substr(s.find('\n')); };
  CHECK(body(g) == body(t));
  CHECK(g != t);
}
