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

#ifndef TARPO_OBJECTIVE_HPP_
#define TARPO_OBJECTIVE_HPP_

#include <span>
#include <vector>

namespace tarpo {

/// Sequence-level log-probabilities of one sampled response.
struct RolloutLogProbs {
  double current = 0.0;  // policy being optimized
  double old = 0.0;      // behaviour policy that sampled the response
  double ref = 0.0;      // frozen reference policy
};

/// pi_theta / pi_old. Not clamped; clipping belongs to the surrogate.
double importance_ratio(const RolloutLogProbs& lp);

/// min(ratio * a, clip(ratio, 1 - eps, 1 + eps) * a)
double clipped_term(double ratio, double advantage, double epsilon);

/// Non-negative per-sample KL estimate exp(d) - d - 1, d = ref - current.
double kl_penalty(const RolloutLogProbs& lp);

struct ObjectiveParams {
  double epsilon = 0.2;
  double beta = 0.001;
};

/// Group surrogate to be maximized:
///   mean_i clipped_term(ratio_i, A_eff_i) - beta * mean_i kl_penalty_i
double tarpo_objective(std::span<const RolloutLogProbs> logps,
                       std::span<const double> effective_advantage,
                       const ObjectiveParams& params);

/// d objective / d logp_current_i for every rollout i. Chaining with
/// grad(log pi(o_i)) gives the parameter gradient. At a clip boundary the
/// unclipped branch is taken.
std::vector<double> objective_logp_gradient(
    std::span<const RolloutLogProbs> logps,
    std::span<const double> effective_advantage, const ObjectiveParams& params);

}  // namespace tarpo

#endif  // TARPO_OBJECTIVE_HPP_
