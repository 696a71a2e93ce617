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

#ifndef TARPO_ADVANTAGE_HPP_
#define TARPO_ADVANTAGE_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace tarpo {

/// Per-rollout region and answer rewards for one group, with the mixed
/// reward recomputed from them under a single weight.
class GroupRewards {
 public:
  GroupRewards(std::vector<double> region, std::vector<double> answer,
               double alpha);

  std::size_t size() const { return mixed_.size(); }
  double alpha() const { return alpha_; }
  const std::vector<double>& region() const { return region_; }
  const std::vector<double>& answer() const { return answer_; }
  const std::vector<double>& mixed() const { return mixed_; }

 private:
  std::vector<double> region_;
  std::vector<double> answer_;
  std::vector<double> mixed_;
  double alpha_;
};

struct GroupAdvantages {
  std::vector<double> advantage;         // A
  std::vector<double> region_part;       // ΔA^t
  std::vector<double> answer_part;       // ΔA^a
  std::vector<double> penalty;           // P
  std::vector<double> effective;         // A - P
  bool degenerate = false;  // every mixed reward identical
  bool clamped = false;     // std fell below kMinStd and was clamped
};

// Divisor floor for nearly uniform groups.
inline constexpr double kMinStd = 1e-8;

double mean(std::span<const double> values);
// Population standard deviation.
double population_std(std::span<const double> values);
// values[i] - mean(values)
std::vector<double> deviations(std::span<const double> values);

/// Group-relative normalization and its split into region and answer parts.
/// Fills advantage/region_part/answer_part; penalty is zero and effective
/// equals advantage. Throws GroupTooSmall for fewer than two rollouts.
GroupAdvantages normalize_group(const GroupRewards& rewards);

/// Penalty per rollout: zero when the raw region and answer deviations
/// agree in sign (or either is zero), otherwise -lambda * ΔA^t * ΔA^a.
std::vector<double> consistency_penalty(const GroupAdvantages& advantages,
                                        std::span<const double> region_dev,
                                        std::span<const double> answer_dev,
                                        double lambda);

/// A - P, elementwise.
std::vector<double> effective_advantage(const GroupAdvantages& advantages);

/// normalize_group, consistency_penalty and effective_advantage in one pass.
GroupAdvantages compute_advantages(const GroupRewards& rewards, double lambda);

}  // namespace tarpo

#endif  // TARPO_ADVANTAGE_HPP_
