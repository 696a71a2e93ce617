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

#include "tarpo/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "tarpo/errors.hpp"
#include "tarpo/table.hpp"

namespace tarpo {
namespace {

[[noreturn]] void bad_value(std::size_t line, std::string_view key,
                            std::string_view value) {
  throw ConfigError("line " + std::to_string(line) + ": invalid value for " +
                    std::string(key) + ": \"" + std::string(value) + "\"");
}

double to_double(std::size_t line, std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(line, key, v);
  return out;
}

std::uint64_t to_u64(std::size_t line, std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(line, key, v);
  return out;
}

bool to_bool(std::size_t line, std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(line, key, v);
}

std::vector<std::uint64_t> to_u64_list(std::size_t line, std::string_view key,
                                       std::string_view v) {
  std::string s(v);
  if (!s.empty() && s.front() == '[') s.erase(0, 1);
  if (!s.empty() && s.back() == ']') s.pop_back();
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(to_u64(line, key, trim(item)));
  }
  if (out.empty()) bad_value(line, key, v);
  return out;
}

using Setter = std::function<void(RunConfig&, std::size_t, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const auto* table = [] {
    auto* m = new std::map<std::string, Setter, std::less<>>;
    auto& s = *m;
#define TARPO_DOUBLE(key, field) \
  s[key] = [](RunConfig& c, std::size_t l, std::string_view v) { c.field = to_double(l, key, v); }
#define TARPO_SIZE(key, field) \
  s[key] = [](RunConfig& c, std::size_t l, std::string_view v) { c.field = static_cast<std::size_t>(to_u64(l, key, v)); }
    TARPO_DOUBLE("reward.zeta", train.reward.zeta);
    TARPO_DOUBLE("reward.gamma", train.reward.gamma);
    TARPO_DOUBLE("reward.rho", train.reward.rho);
    TARPO_DOUBLE("reward.lambda", train.reward.lambda);
    TARPO_DOUBLE("reward.epsilon", train.reward.epsilon);
    TARPO_DOUBLE("reward.beta", train.reward.beta);
    TARPO_DOUBLE("reward.numeric_tolerance", train.reward.numeric_tolerance);
    s["reward.strict_threshold"] = [](RunConfig& c, std::size_t l, std::string_view v) {
      c.train.reward.strict_threshold = to_bool(l, "reward.strict_threshold", v);
    };
    s["train.algorithm"] = [](RunConfig& c, std::size_t, std::string_view v) {
      c.train.algorithm = sim::parse_algorithm(v);
    };
    TARPO_SIZE("train.group_size", train.group_size);
    TARPO_SIZE("train.batch_size", train.batch_size);
    TARPO_SIZE("train.steps", train.steps);
    TARPO_DOUBLE("train.learning_rate", train.learning_rate);
    TARPO_DOUBLE("train.alpha_fixed", train.alpha_fixed);
    TARPO_SIZE("train.eval_every", train.eval_every);
    TARPO_DOUBLE("train.ema_decay", train.ema_decay);
    s["train.seeds"] = [](RunConfig& c, std::size_t l, std::string_view v) {
      c.seeds = to_u64_list(l, "train.seeds", v);
    };
    s["tasks.seed"] = [](RunConfig& c, std::size_t l, std::string_view v) {
      c.task_seed = to_u64(l, "tasks.seed", v);
    };
    TARPO_SIZE("tasks.count", task_count);
    TARPO_SIZE("tasks.min_rows", shape.min_rows);
    TARPO_SIZE("tasks.max_rows", shape.max_rows);
    TARPO_SIZE("tasks.min_columns", shape.min_columns);
    TARPO_SIZE("tasks.max_columns", shape.max_columns);
    TARPO_SIZE("sim.verbosity_levels", train.sim.verbosity_levels);
    TARPO_SIZE("sim.base_length", train.sim.base_length);
    TARPO_SIZE("sim.verbosity_tokens", train.sim.verbosity_tokens);
    TARPO_SIZE("sim.chars_per_token", train.sim.chars_per_token);
    TARPO_DOUBLE("sim.distraction", train.sim.distraction);
    TARPO_DOUBLE("sim.verbosity_coupling", train.sim.verbosity_coupling);
    s["output.dir"] = [](RunConfig& c, std::size_t, std::string_view v) {
      c.out_dir = std::string(v);
    };
#undef TARPO_DOUBLE
#undef TARPO_SIZE
    return m;
  }();
  return *table;
}

}  // namespace

void RunConfig::validate() const {
  train.validate();
  shape.validate();
  if (seeds.empty()) throw ConfigError("train.seeds must not be empty");
  if (task_count < 2) throw ConfigError("tasks.count must be >= 2");
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  const auto& r = train.reward;
  j["reward"] = {{"zeta", r.zeta},
                 {"gamma", r.gamma},
                 {"rho", r.rho},
                 {"lambda", r.lambda},
                 {"epsilon", r.epsilon},
                 {"beta", r.beta},
                 {"numeric_tolerance", r.numeric_tolerance},
                 {"strict_threshold", r.strict_threshold}};
  j["train"] = {{"algorithm", std::string(sim::to_string(train.algorithm))},
                {"group_size", train.group_size},
                {"batch_size", train.batch_size},
                {"steps", train.steps},
                {"learning_rate", train.learning_rate},
                {"seeds", seeds},
                {"alpha_fixed", train.alpha_fixed},
                {"eval_every", train.eval_every},
                {"ema_decay", train.ema_decay}};
  j["tasks"] = {{"seed", task_seed},
                {"count", task_count},
                {"min_rows", shape.min_rows},
                {"max_rows", shape.max_rows},
                {"min_columns", shape.min_columns},
                {"max_columns", shape.max_columns}};
  const auto& s = train.sim;
  j["sim"] = {{"verbosity_levels", s.verbosity_levels},
              {"base_length", s.base_length},
              {"verbosity_tokens", s.verbosity_tokens},
              {"chars_per_token", s.chars_per_token},
              {"distraction", s.distraction},
              {"verbosity_coupling", s.verbosity_coupling}};
  return j;
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": malformed section header");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      static const char* kSections[] = {"reward", "train", "tasks", "sim",
                                        "output"};
      if (std::find(std::begin(kSections), std::end(kSections), section) ==
          std::end(kSections)) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside of any section");
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key " + key);
    }
    it->second(cfg, line_no, value);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace tarpo
