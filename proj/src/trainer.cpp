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

#include "tarpo/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "tarpo/errors.hpp"
#include "tarpo/rng.hpp"

namespace tarpo::sim {
namespace {

// Runs fn(i) for i in [0, n) on up to `threads` threads. Each index is
// handled by exactly one thread, so callers writing to slot i stay
// deterministic.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) fn(i);
    });
  }
}

TableRegion region_of(const SyntheticTask& task, const Choice& choice) {
  return TableRegion(task.column_candidates.at(choice.column).indices,
                     task.row_candidates.at(choice.row).indices);
}

std::vector<RolloutLogProbs> current_logps(const ToyPolicy& policy,
                                           const FactorDistributions& dist,
                                           const GroupBatch& g) {
  std::vector<RolloutLogProbs> out(g.choices.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].current = policy.log_prob(dist, g.choices[i]);
    out[i].old = g.logp_old[i];
    out[i].ref = g.logp_ref[i];
  }
  return out;
}

double group_value(const ToyPolicy& policy, const GroupBatch& g,
                   const ObjectiveParams& params) {
  const auto dist = policy.distributions(*g.task);
  const auto logps = current_logps(policy, dist, g);
  return tarpo_objective(logps, g.effective_advantage, params);
}

std::vector<double> group_gradient(const ToyPolicy& policy, const GroupBatch& g,
                                   const ObjectiveParams& params) {
  const auto dist = policy.distributions(*g.task);
  const auto logps = current_logps(policy, dist, g);
  const auto coeff =
      objective_logp_gradient(logps, g.effective_advantage, params);
  std::vector<double> grad(policy.num_parameters(), 0.0);
  for (std::size_t i = 0; i < g.choices.size(); ++i) {
    policy.accumulate_log_prob_gradient(*g.task, dist, g.choices[i], coeff[i],
                                        grad);
  }
  return grad;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Per-question output of one training step.
struct SlotResult {
  GroupBatch batch;
  std::vector<double> gradient;
  double objective = 0.0;
  double sum_mixed = 0.0;
  double sum_region = 0.0;
  double sum_answer = 0.0;
  double sum_length = 0.0;
  std::size_t penalized = 0;
  bool clamped = false;
};

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kGrpo:
      return "grpo";
    case Algorithm::kTarpoFixed:
      return "tarpo-fixed";
    case Algorithm::kTarpo:
      return "tarpo";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view s) {
  if (s == "grpo") return Algorithm::kGrpo;
  if (s == "tarpo-fixed") return Algorithm::kTarpoFixed;
  if (s == "tarpo") return Algorithm::kTarpo;
  throw ConfigError("unknown algorithm: " + std::string(s));
}

void SimConfig::validate() const {
  if (verbosity_levels == 0) throw ConfigError("verbosity_levels must be >= 1");
  if (chars_per_token == 0) throw ConfigError("chars_per_token must be >= 1");
  if (!(distraction >= 0.0 && distraction <= 1.0)) {
    throw ConfigError("distraction must lie in [0, 1]");
  }
  if (!(verbosity_coupling >= 0.0 && verbosity_coupling <= 1.0)) {
    throw ConfigError("verbosity_coupling must lie in [0, 1]");
  }
}

void TrainConfig::validate() const {
  reward.validate();
  sim.validate();
  if (group_size < 2) throw ConfigError("group_size must be >= 2");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (!(alpha_fixed >= 0.0 && alpha_fixed <= 1.0)) {
    throw ConfigError("alpha_fixed must lie in [0, 1]");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be > 0");
  }
  if (!(ema_decay > 0.0 && ema_decay <= 1.0)) {
    throw ConfigError("ema_decay must lie in (0, 1]");
  }
}

double TrainConfig::alpha_at(std::uint64_t step) const {
  switch (algorithm) {
    case Algorithm::kGrpo:
      return 0.0;
    case Algorithm::kTarpoFixed:
      return alpha_fixed;
    case Algorithm::kTarpo:
      return alpha_schedule(step, reward);
  }
  return 0.0;
}

double TrainConfig::lambda() const {
  return algorithm == Algorithm::kGrpo ? 0.0 : reward.lambda;
}

double slip_probability(const SyntheticTask& task, const TableRegion& region,
                        std::size_t verbosity, const SimConfig& sim) {
  const double cells = static_cast<double>(region.columns().size() *
                                           region.rows().size());
  double irrelevant = 0.0;
  if (cells > 0.0) {
    const auto& gold = task.gold_region;
    std::size_t gc = 0, gr = 0;
    for (std::size_t c : region.columns()) {
      gc += std::binary_search(gold.columns().begin(), gold.columns().end(), c);
    }
    for (std::size_t r : region.rows()) {
      gr += std::binary_search(gold.rows().begin(), gold.rows().end(), r);
    }
    irrelevant = 1.0 - static_cast<double>(gc * gr) / cells;
  }
  double verbose = 0.0;
  if (sim.verbosity_coupling > 0.0) {
    verbose = sim.verbosity_levels <= 1
                  ? sim.verbosity_coupling
                  : sim.verbosity_coupling *
                        (1.0 - static_cast<double>(verbosity) /
                                   static_cast<double>(sim.verbosity_levels - 1));
  }
  return 1.0 - (1.0 - sim.distraction * irrelevant) * (1.0 - verbose);
}

std::size_t response_length(const SyntheticTask& task, const TableRegion& region,
                            std::size_t verbosity, const SimConfig& sim) {
  const std::size_t chars = serialize_region(region, task.table).size();
  return sim.base_length + sim.verbosity_tokens * verbosity +
         (chars + sim.chars_per_token - 1) / sim.chars_per_token;
}

RolloutOutcome make_outcome(const SyntheticTask& task, const Choice& choice,
                            bool slip, const RewardConfig& reward,
                            const SimConfig& sim) {
  RolloutOutcome out;
  out.choice = choice;
  out.region = region_of(task, choice);
  if (!slip) {
    out.answer = execute_strategy(task, out.region,
                                  static_cast<Strategy>(choice.strategy));
  }
  out.length = response_length(task, out.region, choice.verbosity, sim);
  out.region_reward = region_reward(out.region, task.gold_region);
  out.answer_reward =
      out.answer ? answer_reward(*out.answer, task.gold_answer, reward) : 0.0;
  return out;
}

std::vector<RolloutOutcome> sample_group(const ToyPolicy& policy,
                                         const SyntheticTask& task,
                                         std::size_t group_size,
                                         std::uint64_t seed,
                                         const RewardConfig& reward,
                                         const SimConfig& sim) {
  if (group_size < 2) throw GroupTooSmall(group_size);
  Rng rng(seed);
  const auto dist = policy.distributions(task);
  const auto ref_dist = policy.reference_policy().distributions(task);
  std::vector<RolloutOutcome> out;
  out.reserve(group_size);
  for (std::size_t i = 0; i < group_size; ++i) {
    const Choice choice = policy.sample(dist, rng);
    const double p_slip =
        slip_probability(task, region_of(task, choice), choice.verbosity, sim);
    const bool slip = p_slip > 0.0 && rng.uniform() < p_slip;
    RolloutOutcome o = make_outcome(task, choice, slip, reward, sim);
    o.logp.current = policy.log_prob(dist, choice);
    o.logp.old = o.logp.current;
    o.logp.ref = policy.log_prob(ref_dist, choice);
    out.push_back(std::move(o));
  }
  return out;
}

double surrogate_value(const ToyPolicy& policy, std::span<const GroupBatch> batch,
                       const ObjectiveParams& params) {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (const auto& g : batch) total += group_value(policy, g, params);
  return total / static_cast<double>(batch.size());
}

std::vector<double> surrogate_gradient(const ToyPolicy& policy,
                                       std::span<const GroupBatch> batch,
                                       const ObjectiveParams& params) {
  std::vector<double> total(policy.num_parameters(), 0.0);
  for (const auto& g : batch) {
    const auto grad = group_gradient(policy, g, params);
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += grad[k];
  }
  if (!batch.empty()) {
    for (double& v : total) v /= static_cast<double>(batch.size());
  }
  return total;
}

Evaluation evaluate(const ToyPolicy& policy, std::span<const SyntheticTask> tasks,
                    const RewardConfig& reward, const SimConfig& sim) {
  Evaluation ev;
  if (tasks.empty()) return ev;
  for (const auto& task : tasks) {
    const Choice choice = policy.greedy(policy.distributions(task));
    const auto o = make_outcome(task, choice, false, reward, sim);
    ev.accuracy += o.answer_reward *
                   (1.0 - slip_probability(task, o.region, choice.verbosity, sim));
    ev.region_reward += o.region_reward;
    ev.mean_length += static_cast<double>(o.length);
  }
  const double n = static_cast<double>(tasks.size());
  ev.accuracy /= n;
  ev.region_reward /= n;
  ev.mean_length /= n;
  return ev;
}

std::vector<double> ema(std::span<const double> series, double decay) {
  std::vector<double> out;
  out.reserve(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    out.push_back(t == 0 ? series[0]
                         : (1.0 - decay) * out.back() + decay * series[t]);
  }
  return out;
}

std::size_t train_split_size(std::size_t total) {
  return (total * 9 + 5) / 10;
}

TrainResult train(const TrainConfig& config,
                  std::span<const SyntheticTask> train_tasks,
                  std::span<const SyntheticTask> val_tasks,
                  const ToyPolicy& initial) {
  config.validate();
  if (initial.verbosity_levels() != config.sim.verbosity_levels) {
    throw ConfigError("policy verbosity levels do not match the config");
  }
  TrainResult result{TrainStats{}, initial};
  ToyPolicy& policy = result.policy;
  const ObjectiveParams params{config.reward.epsilon, config.reward.beta};

  if (config.steps > 0 && train_tasks.empty()) {
    throw ConfigError("no training tasks");
  }
  std::vector<std::size_t> order(train_tasks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng order_rng(derive_seed({config.seed, 0x6f72646572ULL}));
  order_rng.shuffle(order);
  std::size_t cursor = 0;

  std::vector<SlotResult> slots(config.batch_size);
  std::vector<std::size_t> picks(config.batch_size);
  for (std::size_t step = 0; step < config.steps; ++step) {
    const double alpha = config.alpha_at(step);
    const double lambda = config.lambda();
    for (auto& p : picks) {
      if (cursor == order.size()) {
        order_rng.shuffle(order);
        cursor = 0;
      }
      p = order[cursor++];
    }

    parallel_for(config.batch_size, config.threads, [&](std::size_t j) {
      const SyntheticTask& task = train_tasks[picks[j]];
      const auto outcomes =
          sample_group(policy, task, config.group_size,
                       derive_seed({config.seed, step, j}), config.reward,
                       config.sim);
      SlotResult s;
      std::vector<double> r_t, r_a;
      s.batch.task = &task;
      for (const auto& o : outcomes) {
        r_t.push_back(o.region_reward);
        r_a.push_back(o.answer_reward);
        s.batch.choices.push_back(o.choice);
        s.batch.logp_old.push_back(o.logp.old);
        s.batch.logp_ref.push_back(o.logp.ref);
        s.sum_length += static_cast<double>(o.length);
      }
      const GroupRewards rewards(r_t, r_a, alpha);
      const GroupAdvantages adv = compute_advantages(rewards, lambda);
      s.batch.effective_advantage = adv.effective;
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        s.sum_mixed += rewards.mixed()[i];
        s.sum_region += r_t[i];
        s.sum_answer += r_a[i];
        if (adv.penalty[i] != 0.0) ++s.penalized;
      }
      s.clamped = adv.clamped;
      s.objective = group_value(policy, s.batch, params);
      s.gradient = group_gradient(policy, s.batch, params);
      slots[j] = std::move(s);
    });

    // Fixed-order reduction.
    StepRecord rec;
    rec.step = step;
    rec.alpha = alpha;
    std::vector<double> grad(policy.num_parameters(), 0.0);
    for (const auto& s : slots) {
      for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += s.gradient[k];
      rec.objective += s.objective;
      rec.mean_reward += s.sum_mixed;
      rec.mean_region_reward += s.sum_region;
      rec.train_acc += s.sum_answer;
      rec.mean_len += s.sum_length;
      rec.penalized += s.penalized;
      rec.clamped_groups += s.clamped ? 1 : 0;
    }
    const double groups = static_cast<double>(config.batch_size);
    const double rollouts = groups * static_cast<double>(config.group_size);
    rec.objective /= groups;
    rec.mean_reward /= rollouts;
    rec.mean_region_reward /= rollouts;
    rec.train_acc /= rollouts;
    rec.mean_len /= rollouts;

    if (!std::isfinite(rec.objective) || !all_finite(grad)) {
      throw DivergenceDetected(step, "non-finite objective or gradient");
    }
    auto& theta = policy.mutable_parameters();
    for (std::size_t k = 0; k < theta.size(); ++k) {
      theta[k] += config.learning_rate * grad[k] / groups;
    }
    if (!all_finite(theta)) {
      throw DivergenceDetected(step, "non-finite policy parameters");
    }

    const auto& hist = result.stats.steps;
    const double d = config.ema_decay;
    auto smooth = [&](double prev, double x) {
      return hist.empty() ? x : (1.0 - d) * prev + d * x;
    };
    const StepRecord* prev = hist.empty() ? nullptr : &hist.back();
    rec.ema_mean_reward = smooth(prev ? prev->ema_mean_reward : 0.0, rec.mean_reward);
    rec.ema_mean_region_reward =
        smooth(prev ? prev->ema_mean_region_reward : 0.0, rec.mean_region_reward);
    rec.ema_train_acc = smooth(prev ? prev->ema_train_acc : 0.0, rec.train_acc);
    rec.ema_mean_len = smooth(prev ? prev->ema_mean_len : 0.0, rec.mean_len);

    if (config.eval_every > 0 &&
        ((step + 1) % config.eval_every == 0 || step + 1 == config.steps)) {
      rec.val_acc = evaluate(policy, val_tasks, config.reward, config.sim).accuracy;
    }
    result.stats.steps.push_back(rec);
  }
  result.stats.final_validation =
      evaluate(policy, val_tasks, config.reward, config.sim);
  return result;
}

}  // namespace tarpo::sim
