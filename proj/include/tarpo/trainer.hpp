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

#ifndef TARPO_TRAINER_HPP_
#define TARPO_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tarpo/advantage.hpp"
#include "tarpo/objective.hpp"
#include "tarpo/reward.hpp"
#include "tarpo/sim_tasks.hpp"
#include "tarpo/toy_policy.hpp"

namespace tarpo::sim {

enum class Algorithm { kGrpo, kTarpoFixed, kTarpo };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view s);  // grpo | tarpo-fixed | tarpo

/// Response-length model and answer noise.
///
/// length = base_length + verbosity_tokens * level
///          + ceil(serialized_region_chars / chars_per_token)
///
/// A rollout loses its answer ("slips") with probability
///   1 - (1 - distraction * irrelevant_fraction) * (1 - c * (1 - v / (L - 1)))
/// where irrelevant_fraction is the share of selected cells outside the gold
/// region, c is verbosity_coupling, v the verbosity level and L the number
/// of levels. With c = 0 verbosity has no effect on any reward.
struct SimConfig {
  std::size_t verbosity_levels = 4;
  std::size_t base_length = 24;
  std::size_t verbosity_tokens = 8;
  std::size_t chars_per_token = 4;
  double distraction = 0.6;
  double verbosity_coupling = 0.0;

  void validate() const;
};

struct RolloutOutcome {
  Choice choice;
  TableRegion region;
  std::optional<std::string> answer;
  std::size_t length = 0;
  double region_reward = 0.0;
  double answer_reward = 0.0;
  RolloutLogProbs logp;
};

std::size_t response_length(const SyntheticTask& task, const TableRegion& region,
                            std::size_t verbosity, const SimConfig& sim);

/// Probability that a rollout with this region and verbosity slips.
double slip_probability(const SyntheticTask& task, const TableRegion& region,
                        std::size_t verbosity, const SimConfig& sim);

/// Builds the outcome of a fixed choice. `slip` drops the answer.
RolloutOutcome make_outcome(const SyntheticTask& task, const Choice& choice,
                            bool slip, const RewardConfig& reward,
                            const SimConfig& sim);

/// Draws `group_size` rollouts; deterministic in (policy, task, seed).
/// logp.old is the sampling policy's log-prob (equal to logp.current) and
/// logp.ref is taken under the policy's reference parameters.
std::vector<RolloutOutcome> sample_group(const ToyPolicy& policy,
                                         const SyntheticTask& task,
                                         std::size_t group_size,
                                         std::uint64_t seed,
                                         const RewardConfig& reward,
                                         const SimConfig& sim = {});

/// Sampled rollouts of one question, frozen for an update.
struct GroupBatch {
  const SyntheticTask* task = nullptr;
  std::vector<Choice> choices;
  std::vector<double> effective_advantage;
  std::vector<double> logp_old;
  std::vector<double> logp_ref;
};

/// Mean over groups of the clipped, KL-regularized surrogate as a function
/// of the current policy parameters.
double surrogate_value(const ToyPolicy& policy, std::span<const GroupBatch> batch,
                       const ObjectiveParams& params);

/// Analytic gradient of surrogate_value.
std::vector<double> surrogate_gradient(const ToyPolicy& policy,
                                       std::span<const GroupBatch> batch,
                                       const ObjectiveParams& params);

struct TrainConfig {
  Algorithm algorithm = Algorithm::kTarpo;
  RewardConfig reward;
  SimConfig sim;
  double alpha_fixed = 0.15;
  std::size_t group_size = 16;
  std::size_t batch_size = 32;
  std::size_t steps = 150;
  double learning_rate = 0.5;
  std::uint64_t seed = 1;
  std::size_t eval_every = 25;  // 0 disables periodic validation
  double ema_decay = 0.05;
  std::size_t threads = 1;

  void validate() const;

  // Region weight and penalty strength used at `step`.
  double alpha_at(std::uint64_t step) const;
  double lambda() const;
};

struct StepRecord {
  std::size_t step = 0;
  double alpha = 0.0;
  double mean_reward = 0.0;
  double mean_region_reward = 0.0;
  double train_acc = 0.0;
  double mean_len = 0.0;
  double objective = 0.0;
  std::size_t penalized = 0;  // rollouts with a nonzero consistency penalty
  std::size_t clamped_groups = 0;
  double ema_mean_reward = 0.0;
  double ema_mean_region_reward = 0.0;
  double ema_train_acc = 0.0;
  double ema_mean_len = 0.0;
  std::optional<double> val_acc;
};

struct Evaluation {
  double accuracy = 0.0;
  double region_reward = 0.0;
  double mean_length = 0.0;
};

struct TrainStats {
  std::vector<StepRecord> steps;
  Evaluation final_validation;
};

struct TrainResult {
  TrainStats stats;
  ToyPolicy policy;
};

/// Group sampling, mixed rewards, advantages with the consistency penalty,
/// objective and one gradient-ascent step per iteration. Throws
/// DivergenceDetected when the objective or parameters stop being finite.
TrainResult train(const TrainConfig& config,
                  std::span<const SyntheticTask> train_tasks,
                  std::span<const SyntheticTask> val_tasks,
                  const ToyPolicy& initial);

/// Greedy decoding on every task; read-only. Accuracy is the expected
/// answer reward of the greedy choice, i.e. answer_reward * (1 - slip
/// probability), so the result is deterministic.
Evaluation evaluate(const ToyPolicy& policy, std::span<const SyntheticTask> tasks,
                    const RewardConfig& reward, const SimConfig& sim = {});

/// y_0 = x_0, y_t = (1 - d) y_{t-1} + d x_t
std::vector<double> ema(std::span<const double> series, double decay);

/// Size of the training part of a 9:1 train/validation split (the first
/// tasks train, the remainder validate).
std::size_t train_split_size(std::size_t total);

}  // namespace tarpo::sim

#endif  // TARPO_TRAINER_HPP_
