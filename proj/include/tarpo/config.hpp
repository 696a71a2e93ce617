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

#ifndef TARPO_CONFIG_HPP_
#define TARPO_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tarpo/sim_tasks.hpp"
#include "tarpo/trainer.hpp"

namespace tarpo {

/// Everything a simulation run needs. Loaded from an INI-style file:
///
///   [reward]  zeta gamma rho lambda epsilon beta numeric_tolerance
///             strict_threshold
///   [train]   algorithm group_size batch_size steps learning_rate seeds
///             alpha_fixed eval_every ema_decay
///   [tasks]   seed count min_rows max_rows min_columns max_columns
///   [sim]     verbosity_levels base_length verbosity_tokens
///             chars_per_token distraction verbosity_coupling
///   [output]  dir
///
/// `#` and `;` start comments. Unknown sections and keys are rejected.
struct RunConfig {
  sim::TrainConfig train;
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t task_seed = 7;
  std::size_t task_count = 500;
  sim::TaskShape shape;
  std::string out_dir = "runs";

  void validate() const;  // throws ConfigError

  // Every field, defaults included, for echoing into output headers.
  nlohmann::ordered_json to_json() const;
};

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

}  // namespace tarpo

#endif  // TARPO_CONFIG_HPP_
