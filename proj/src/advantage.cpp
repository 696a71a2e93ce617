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

#include "tarpo/advantage.hpp"

#include <algorithm>
#include <cmath>

#include "tarpo/errors.hpp"
#include "tarpo/reward.hpp"

namespace tarpo {

GroupRewards::GroupRewards(std::vector<double> region,
                           std::vector<double> answer, double alpha)
    : region_(std::move(region)), answer_(std::move(answer)), alpha_(alpha) {
  if (region_.size() != answer_.size()) {
    throw Error("region and answer reward counts differ");
  }
  mixed_.reserve(region_.size());
  for (std::size_t i = 0; i < region_.size(); ++i) {
    mixed_.push_back(mixed_reward(region_[i], answer_[i], alpha_));
  }
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

std::vector<double> deviations(std::span<const double> values) {
  const double m = mean(values);
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(v - m);
  return out;
}

GroupAdvantages normalize_group(const GroupRewards& rewards) {
  const std::size_t n = rewards.size();
  if (n < 2) throw GroupTooSmall(n);

  GroupAdvantages out;
  out.advantage.assign(n, 0.0);
  out.region_part.assign(n, 0.0);
  out.answer_part.assign(n, 0.0);
  out.penalty.assign(n, 0.0);
  out.effective.assign(n, 0.0);

  const auto& r = rewards.mixed();
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  if (*lo == *hi) {
    out.degenerate = true;
    return out;
  }

  double sd = population_std(r);
  if (sd < kMinStd) {
    sd = kMinStd;
    out.clamped = true;
  }
  const double alpha = rewards.alpha();
  const double mean_r = mean(r);
  const double mean_t = mean(rewards.region());
  const double mean_a = mean(rewards.answer());
  for (std::size_t i = 0; i < n; ++i) {
    out.advantage[i] = (r[i] - mean_r) / sd;
    out.region_part[i] = alpha * (rewards.region()[i] - mean_t) / sd;
    out.answer_part[i] = (1.0 - alpha) * (rewards.answer()[i] - mean_a) / sd;
  }
  out.effective = out.advantage;
  return out;
}

std::vector<double> consistency_penalty(const GroupAdvantages& advantages,
                                        std::span<const double> region_dev,
                                        std::span<const double> answer_dev,
                                        double lambda) {
  const std::size_t n = advantages.advantage.size();
  if (region_dev.size() != n || answer_dev.size() != n) {
    throw Error("deviation count does not match group size");
  }
  std::vector<double> penalty(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (region_dev[i] * answer_dev[i] < 0.0) {
      penalty[i] =
          -lambda * advantages.region_part[i] * advantages.answer_part[i];
    }
  }
  return penalty;
}

std::vector<double> effective_advantage(const GroupAdvantages& advantages) {
  std::vector<double> out(advantages.advantage.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = advantages.advantage[i] - advantages.penalty[i];
  }
  return out;
}

GroupAdvantages compute_advantages(const GroupRewards& rewards, double lambda) {
  GroupAdvantages out = normalize_group(rewards);
  if (!out.degenerate) {
    const auto dr_t = deviations(rewards.region());
    const auto dr_a = deviations(rewards.answer());
    out.penalty = consistency_penalty(out, dr_t, dr_a, lambda);
  }
  out.effective = effective_advantage(out);
  return out;
}

}  // namespace tarpo
