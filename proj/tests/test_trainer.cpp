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
#include <vector>

#include "tarpo/errors.hpp"
#include "tarpo/sim_tasks.hpp"
#include "tarpo/toy_policy.hpp"
#include "tarpo/trainer.hpp"

using namespace tarpo;
using namespace tarpo::sim;

namespace {

struct Fixture {
  std::vector<SyntheticTask> tasks = generate_tasks(7, 100);
  std::span<const SyntheticTask> train() const {
    return std::span(tasks).subspan(0, 90);
  }
  std::span<const SyntheticTask> val() const {
    return std::span(tasks).subspan(90);
  }
};

TrainConfig small(Algorithm alg, std::size_t steps) {
  TrainConfig c;
  c.algorithm = alg;
  c.steps = steps;
  c.batch_size = 8;
  c.eval_every = 5;
  return c;
}

bool same_steps(const TrainStats& a, const TrainStats& b) {
  if (a.steps.size() != b.steps.size()) return false;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    const auto &x = a.steps[i], &y = b.steps[i];
    if (x.mean_reward != y.mean_reward || x.mean_len != y.mean_len ||
        x.train_acc != y.train_acc || x.objective != y.objective ||
        x.mean_region_reward != y.mean_region_reward || x.val_acc != y.val_acc)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("ema") {
  const std::vector<double> x = {0, 1, 1};
  const auto y = ema(x, 0.05);
  CHECK(y[0] == 0.0);
  CHECK(y[1] == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(y[2] == doctest::Approx(0.0975).epsilon(1e-15));
  const std::vector<double> c(10, 2.5);
  CHECK(ema(c, 0.3) == c);
  const std::vector<double> z = {3, -1, 4, 1, 5};
  CHECK(ema(z, 1.0) == z);
}

TEST_CASE("split and alpha per arm") {
  CHECK(train_split_size(500) == 450);
  CHECK(train_split_size(10) == 9);
  TrainConfig c;
  c.algorithm = Algorithm::kGrpo;
  CHECK(c.alpha_at(0) == 0.0);
  CHECK(c.lambda() == 0.0);
  c.algorithm = Algorithm::kTarpoFixed;
  CHECK(c.alpha_at(500) == 0.15);
  c.algorithm = Algorithm::kTarpo;
  CHECK(c.alpha_at(0) == 0.3);
  CHECK(parse_algorithm("tarpo-fixed") == Algorithm::kTarpoFixed);
  CHECK_THROWS_AS(parse_algorithm("ppo"), ConfigError);
}

TEST_CASE("zero steps leaves the policy unchanged") {
  Fixture f;
  const ToyPolicy init;
  const auto r = train(small(Algorithm::kTarpo, 0), f.train(), f.val(), init);
  CHECK(r.policy.parameters() == init.parameters());
  CHECK(r.stats.steps.empty());
}

TEST_CASE("training is deterministic and thread-count independent") {
  Fixture f;
  auto c = small(Algorithm::kTarpo, 15);
  const auto a = train(c, f.train(), f.val(), ToyPolicy());
  const auto b = train(c, f.train(), f.val(), ToyPolicy());
  c.threads = 4;
  const auto d = train(c, f.train(), f.val(), ToyPolicy());
  CHECK(same_steps(a.stats, b.stats));
  CHECK(same_steps(a.stats, d.stats));
  CHECK(a.policy.parameters() == d.policy.parameters());
}

TEST_CASE("logged quantities stay in range") {
  Fixture f;
  const auto r = train(small(Algorithm::kTarpo, 20), f.train(), f.val(), ToyPolicy());
  for (const auto& s : r.stats.steps) {
    CHECK(s.mean_reward >= 0.0);
    CHECK(s.mean_reward <= 1.0);
    CHECK(s.train_acc >= 0.0);
    CHECK(s.train_acc <= 1.0);
    if (s.val_acc) {
      CHECK(*s.val_acc >= 0.0);
      CHECK(*s.val_acc <= 1.0);
    }
  }
  CHECK(r.stats.steps[4].val_acc.has_value());
  CHECK_FALSE(r.stats.steps[3].val_acc.has_value());
}

TEST_CASE("evaluate is side-effect free") {
  Fixture f;
  const ToyPolicy p;
  const auto a = evaluate(p, f.val(), RewardConfig{});
  const auto b = evaluate(p, f.val(), RewardConfig{});
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.region_reward == b.region_reward);
  CHECK(a.mean_length == b.mean_length);
}

TEST_CASE("surrogate gradient matches central differences") {
  Fixture f;
  Rng rng(77);
  ObjectiveParams params{0.2, 0.001};
  std::vector<double> w(13);
  for (auto& x : w) x = rng.uniform() - 0.5;
  const ToyPolicy behaviour(w, std::vector<double>(13, 0.0), 4);

  std::vector<GroupBatch> batch;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& t = f.tasks[i];
    const auto out = sample_group(behaviour, t, 8, i, RewardConfig{}, SimConfig{});
    GroupBatch g;
    g.task = &t;
    std::vector<double> rt, ra;
    for (const auto& o : out) {
      g.choices.push_back(o.choice);
      g.logp_old.push_back(o.logp.old);
      g.logp_ref.push_back(o.logp.ref);
      rt.push_back(o.region_reward);
      ra.push_back(o.answer_reward);
    }
    g.effective_advantage = compute_advantages(GroupRewards(rt, ra, 0.3), 0.1).effective;
    batch.push_back(std::move(g));
  }

  // Move off the behaviour policy a little so ratios differ from 1.
  auto cur = w;
  for (auto& x : cur) x += 0.05 * (rng.uniform() - 0.5);
  const ToyPolicy pol(cur, std::vector<double>(13, 0.0), 4);
  const auto grad = surrogate_gradient(pol, batch, params);
  for (std::size_t k = 0; k < cur.size(); ++k) {
    auto up = cur, dn = cur;
    up[k] += 1e-6;
    dn[k] -= 1e-6;
    const double fd = (surrogate_value(ToyPolicy(up, pol.reference_parameters(), 4), batch, params) -
                       surrogate_value(ToyPolicy(dn, pol.reference_parameters(), 4), batch, params)) /
                      2e-6;
    CHECK(std::abs(fd - grad[k]) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("non-finite updates are reported as divergence") {
  Fixture f;
  auto c = small(Algorithm::kTarpo, 5);
  c.learning_rate = 1e308;
  CHECK_THROWS_AS(train(c, f.train(), f.val(), ToyPolicy()), DivergenceDetected);
}

TEST_CASE("config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.group_size = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.ema_decay = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.alpha_fixed = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("unrewarded verbosity only wanders") {
  // Mean |p_v - 1/V| after 200 steps with beta = 0. Observed 0.017-0.034 on
  // the default benchmark; the strategy factor, which is rewarded, moves far
  // more over the same run.
  constexpr double kDriftBound = 0.1;
  const auto tasks = generate_tasks(7, 500);
  const std::span<const SyntheticTask> all(tasks);
  for (std::uint64_t seed : {1, 2, 3}) {
    TrainConfig c;
    c.steps = 200;
    c.seed = seed;
    c.eval_every = 0;
    c.reward.beta = 0.0;
    const auto r = train(c, all.subspan(0, 450), all.subspan(450), ToyPolicy());
    const auto& p = r.policy.parameters();
    const auto verb = softmax(std::vector<double>(
        p.begin() + ToyPolicy::kVerbosityOffset, p.end()));
    double drift = 0.0;
    for (double x : verb) drift += std::abs(x - 0.25);
    drift /= static_cast<double>(verb.size());
    CHECK(drift < kDriftBound);

    const auto strat = softmax(std::vector<double>(
        p.begin() + ToyPolicy::kStrategyOffset, p.begin() + ToyPolicy::kVerbosityOffset));
    CHECK(strat[0] - 1.0 / 3.0 > kDriftBound);
  }
}
