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

#include "tarpo/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "tarpo/dataset.hpp"
#include "tarpo/errors.hpp"

namespace tarpo {
namespace {

using nlohmann::ordered_json;

void append_line(std::string& out, const ordered_json& j) {
  out += j.dump();
  out += '\n';
}

ordered_json reward_json(const RewardConfig& r) {
  return {{"zeta", r.zeta},
          {"gamma", r.gamma},
          {"rho", r.rho},
          {"lambda", r.lambda},
          {"epsilon", r.epsilon},
          {"beta", r.beta},
          {"numeric_tolerance", r.numeric_tolerance},
          {"strict_threshold", r.strict_threshold}};
}

ordered_json optional_json(const std::optional<std::string>& s) {
  return s ? ordered_json(*s) : ordered_json(nullptr);
}

}  // namespace

// ---- score ---------------------------------------------------------------

void ScoreTotals::add(const ScoredTranscript& t) {
  ++count;
  region_reward += t.region_reward;
  answer_reward += t.answer_reward;
  mixed += t.mixed;
}

nlohmann::ordered_json ScoreTotals::to_json() const {
  const double n = count ? static_cast<double>(count) : 1.0;
  return {{"count", count},
          {"total_r_t", region_reward},
          {"total_r_a", answer_reward},
          {"total_mixed", mixed},
          {"mean_r_t", count ? region_reward / n : 0.0},
          {"mean_r_a", count ? answer_reward / n : 0.0},
          {"mean_mixed", count ? mixed / n : 0.0}};
}

std::string ScoreReport::to_jsonl() const {
  std::string out;
  append_line(out, {{"type", "header"},
                    {"command", "score"},
                    {"alpha", alpha},
                    {"reward", reward_json(reward)}});
  for (const auto& r : records) {
    append_line(out, {{"type", "record"},
                      {"id", r.id},
                      {"reasoning_kind", std::string(to_string(r.reasoning_kind))},
                      {"region_status", std::string(to_string(r.region_status))},
                      {"region", optional_json(r.region)},
                      {"answer", optional_json(r.answer)},
                      {"r_t", r.region_reward},
                      {"r_a", r.answer_reward},
                      {"mixed", r.mixed}});
  }
  for (const auto& [kind, totals] : by_kind) {
    ordered_json j = {{"type", "kind"},
                      {"reasoning_kind", std::string(to_string(kind))}};
    j.update(totals.to_json());
    append_line(out, j);
  }
  ordered_json j = {{"type", "summary"}};
  j.update(overall.to_json());
  append_line(out, j);
  return out;
}

ScoreReport cmd_score(const ScoreOptions& options) {
  options.reward.validate();
  if (!(options.alpha >= 0.0 && options.alpha <= 1.0)) {
    throw ConfigError("alpha must lie in [0, 1]");
  }
  const auto records = load_dataset(options.dataset_path);
  std::unordered_map<std::string, const DatasetRecord*> by_id;
  for (const auto& r : records) {
    if (!by_id.emplace(r.id, &r).second) {
      throw SchemaError(options.dataset_path, 0, "duplicate record id " + r.id);
    }
  }

  ScoreReport report;
  report.alpha = options.alpha;
  report.reward = options.reward;
  for (const auto& t : load_transcripts(options.transcripts_path)) {
    const auto it = by_id.find(t.id);
    if (it == by_id.end()) throw MissingRecord(t.id);
    const DatasetRecord& rec = *it->second;

    const auto parsed = parse_response(t.response, rec.reasoning_kind, rec.table);
    ScoredTranscript s;
    s.id = t.id;
    s.reasoning_kind = rec.reasoning_kind;
    s.region_status = parsed.region_status;
    if (parsed.region) s.region = serialize_region(*parsed.region, rec.table);
    s.answer = parsed.answer_text;
    s.region_reward = region_reward(parsed.region, rec.gold_region);
    s.answer_reward = parsed.answer_text
                          ? answer_reward(*parsed.answer_text, rec.gold_answer,
                                          options.reward)
                          : 0.0;
    s.mixed = mixed_reward(s.region_reward, s.answer_reward, options.alpha);
    report.overall.add(s);
    report.by_kind[s.reasoning_kind].add(s);
    report.records.push_back(std::move(s));
  }
  return report;
}

// ---- train-sim -----------------------------------------------------------

std::string stats_file_name(sim::Algorithm algorithm, std::uint64_t seed) {
  return "stats_" + std::string(sim::to_string(algorithm)) + "_seed" +
         std::to_string(seed) + ".jsonl";
}

std::string stats_jsonl(const RunConfig& config, std::uint64_t seed,
                        const sim::TrainStats& stats) {
  std::string out;
  append_line(out, {{"type", "header"},
                    {"algorithm", std::string(sim::to_string(config.train.algorithm))},
                    {"seed", seed},
                    {"task_seed", config.task_seed},
                    {"task_count", config.task_count},
                    {"config", config.to_json()}});
  for (const auto& s : stats.steps) {
    ordered_json j = {{"type", "step"},
                      {"step", s.step},
                      {"mean_reward", s.mean_reward},
                      {"mean_region_reward", s.mean_region_reward},
                      {"train_acc", s.train_acc},
                      {"mean_len", s.mean_len},
                      {"alpha", s.alpha},
                      {"objective", s.objective},
                      {"penalized", s.penalized},
                      {"clamped_groups", s.clamped_groups},
                      {"ema_mean_reward", s.ema_mean_reward},
                      {"ema_mean_region_reward", s.ema_mean_region_reward},
                      {"ema_train_acc", s.ema_train_acc},
                      {"ema_mean_len", s.ema_mean_len}};
    if (s.val_acc) j["val_acc"] = *s.val_acc;
    append_line(out, j);
  }
  const auto* last = stats.steps.empty() ? nullptr : &stats.steps.back();
  const auto& v = stats.final_validation;
  append_line(out, {{"type", "summary"},
                    {"steps", stats.steps.size()},
                    {"val_acc", v.accuracy},
                    {"val_region_reward", v.region_reward},
                    {"val_mean_len", v.mean_length},
                    {"mean_reward", last ? last->ema_mean_reward : 0.0},
                    {"mean_region_reward", last ? last->ema_mean_region_reward : 0.0},
                    {"train_acc", last ? last->ema_train_acc : 0.0},
                    {"mean_len", last ? last->ema_mean_len : v.mean_length}});
  return out;
}

std::vector<TrainSimRun> cmd_train_sim(const RunConfig& config) {
  config.validate();
  const auto tasks = sim::generate_tasks(config.task_seed, config.task_count,
                                         config.shape);
  const std::span<const sim::SyntheticTask> all(tasks);
  const std::size_t n_train = sim::train_split_size(all.size());

  std::vector<TrainSimRun> runs;
  for (std::uint64_t seed : config.seeds) {
    sim::TrainConfig tc = config.train;
    tc.seed = seed;
    TrainSimRun run;
    run.seed = seed;
    run.stats = sim::train(tc, all.subspan(0, n_train), all.subspan(n_train),
                           sim::ToyPolicy(tc.sim.verbosity_levels))
                    .stats;
    run.path = (std::filesystem::path(config.out_dir) /
                stats_file_name(tc.algorithm, seed))
                   .string();
    write_file_atomic(run.path, stats_jsonl(config, seed, run.stats));
    runs.push_back(std::move(run));
  }
  return runs;
}

// ---- compare -------------------------------------------------------------

RunSummary load_run_summary(const std::string& path) {
  RunSummary s;
  s.path = path;
  bool have_header = false, have_summary = false;
  for (const auto& [line, j] : read_json_lines(path)) {
    try {
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        s.algorithm = j.at("algorithm").get<std::string>();
        s.seed = j.at("seed").get<std::uint64_t>();
        s.task_seed = j.at("task_seed").get<std::uint64_t>();
        s.task_count = j.at("task_count").get<std::size_t>();
        have_header = true;
      } else if (type == "summary") {
        s.val_acc = j.at("val_acc").get<double>();
        s.val_region_reward = j.at("val_region_reward").get<double>();
        s.mean_len = j.at("mean_len").get<double>();
        have_summary = true;
      }
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(path, line, e.what());
    }
  }
  if (!have_header) throw SchemaError(path, 0, "stats file has no header line");
  if (!have_summary) {
    throw SchemaError(path, 0, "stats file has no summary line (run incomplete?)");
  }
  return s;
}

CompareReport cmd_compare(const std::vector<std::string>& paths) {
  if (paths.size() < 2) throw IncompatibleRuns("compare needs at least two runs");
  CompareReport report;
  for (const auto& p : paths) report.runs.push_back(load_run_summary(p));
  const RunSummary& base = report.runs.front();
  for (const auto& r : report.runs) {
    if (r.task_seed != base.task_seed || r.task_count != base.task_count) {
      throw IncompatibleRuns("runs use different task sets: " + base.path +
                             " (task_seed " + std::to_string(base.task_seed) +
                             ") vs " + r.path + " (task_seed " +
                             std::to_string(r.task_seed) + ")");
    }
    report.deltas.push_back(RunDelta{r.val_acc - base.val_acc,
                                     r.val_region_reward - base.val_region_reward,
                                     r.mean_len - base.mean_len});
  }
  return report;
}

std::string CompareReport::to_table() const {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %6s %9s %9s %9s %10s %10s %10s\n",
                "algorithm", "seed", "val_acc", "region", "mean_len", "d_val_acc",
                "d_region", "d_len");
  out += buf;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    const auto& d = deltas[i];
    std::snprintf(buf, sizeof buf,
                  "%-12s %6llu %9.4f %9.4f %9.3f %+10.4f %+10.4f %+10.3f\n",
                  r.algorithm.c_str(), static_cast<unsigned long long>(r.seed),
                  r.val_acc, r.val_region_reward, r.mean_len, d.val_acc,
                  d.region_reward, d.mean_len);
    out += buf;
  }
  return out;
}

std::string CompareReport::to_jsonl() const {
  std::string out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    const auto& d = deltas[i];
    append_line(out, {{"path", r.path},
                      {"algorithm", r.algorithm},
                      {"seed", r.seed},
                      {"task_seed", r.task_seed},
                      {"val_acc", r.val_acc},
                      {"val_region_reward", r.val_region_reward},
                      {"mean_len", r.mean_len},
                      {"delta_val_acc", d.val_acc},
                      {"delta_region_reward", d.region_reward},
                      {"delta_mean_len", d.mean_len}});
  }
  return out;
}

// ---- parse-region --------------------------------------------------------

std::vector<RegionExtraction> cmd_parse_region(
    const std::string& transcripts_path,
    const std::optional<std::string>& dataset_path) {
  std::unordered_map<std::string, DatasetRecord> tables;
  if (dataset_path) {
    for (auto& r : load_dataset(*dataset_path)) tables.emplace(r.id, std::move(r));
  }
  std::ifstream in(transcripts_path);
  if (!in) throw Error("cannot open " + transcripts_path);

  std::vector<RegionExtraction> report;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (trim(line).empty()) continue;
    RegionExtraction e;
    e.line = no;
    e.position = "none";
    Transcript t;
    try {
      t = parse_transcript(nlohmann::json::parse(line), transcripts_path, no);
    } catch (const std::exception& ex) {
      e.status = "invalid-record";
      e.diagnostic = ex.what();
      report.push_back(std::move(e));
      continue;
    }
    e.id = t.id;
    e.declarations = count_region_markers(t.response);
    try {
      const auto match = parse_region_from_text(t.response);
      if (!match) {
        e.status = "absent";
      } else {
        e.status = "found";
        const auto rec = tables.find(t.id);
        if (rec != tables.end()) {
          try {
            e.region = serialize_region(
                canonicalize_region(match->region, rec->second.table),
                rec->second.table);
          } catch (const Error& ex) {
            e.status = "unbindable";
            e.diagnostic = ex.what();
          }
        } else {
          e.region = serialize_region(match->region);
        }
        const std::size_t answer_at = find_answer_marker(t.response);
        if (answer_at == std::string::npos) {
          e.position = "no-answer-marker";
        } else {
          e.position = match->begin < answer_at ? "pre-answer" : "post-answer";
        }
      }
    } catch (const RegionSyntaxError& ex) {
      e.status = "syntax-error";
      e.diagnostic = ex.what();
    }
    report.push_back(std::move(e));
  }
  return report;
}

std::string to_jsonl(const std::vector<RegionExtraction>& report) {
  std::string out;
  for (const auto& e : report) {
    ordered_json j = {{"line", e.line},
                      {"id", e.id},
                      {"status", e.status},
                      {"declarations", e.declarations},
                      {"region", optional_json(e.region)},
                      {"position", e.position}};
    if (e.declarations > 1) j["multiple_declarations"] = true;
    if (!e.diagnostic.empty()) j["diagnostic"] = e.diagnostic;
    append_line(out, j);
  }
  return out;
}

}  // namespace tarpo
