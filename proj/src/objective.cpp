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

#include "tarpo/objective.hpp"

#include <algorithm>
#include <cmath>

#include "tarpo/errors.hpp"

namespace tarpo {
namespace {

void check_sizes(std::span<const RolloutLogProbs> logps,
                 std::span<const double> adv) {
  if (logps.size() != adv.size()) {
    throw Error("log-prob and advantage counts differ");
  }
}

}  // namespace

double importance_ratio(const RolloutLogProbs& lp) {
  return std::exp(lp.current - lp.old);
}

double clipped_term(double ratio, double advantage, double epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double kl_penalty(const RolloutLogProbs& lp) {
  const double d = lp.ref - lp.current;
  // expm1 keeps the estimate accurate (and >= 0) for small d.
  return std::max(0.0, std::expm1(d) - d);
}

double tarpo_objective(std::span<const RolloutLogProbs> logps,
                       std::span<const double> effective_advantage,
                       const ObjectiveParams& params) {
  check_sizes(logps, effective_advantage);
  if (logps.empty()) return 0.0;
  double surrogate = 0.0, kl = 0.0;
  for (std::size_t i = 0; i < logps.size(); ++i) {
    surrogate += clipped_term(importance_ratio(logps[i]),
                              effective_advantage[i], params.epsilon);
    kl += kl_penalty(logps[i]);
  }
  const double g = static_cast<double>(logps.size());
  return surrogate / g - params.beta * (kl / g);
}

std::vector<double> objective_logp_gradient(
    std::span<const RolloutLogProbs> logps,
    std::span<const double> effective_advantage, const ObjectiveParams& params) {
  check_sizes(logps, effective_advantage);
  std::vector<double> grad(logps.size(), 0.0);
  const double g = static_cast<double>(logps.size());
  for (std::size_t i = 0; i < logps.size(); ++i) {
    const double ratio = importance_ratio(logps[i]);
    const double a = effective_advantage[i];
    const double clipped =
        std::clamp(ratio, 1.0 - params.epsilon, 1.0 + params.epsilon);
    // d(ratio)/d(logp_current) = ratio; the clipped branch is flat.
    const double surrogate = ratio * a <= clipped * a ? a * ratio : 0.0;
    // d/d(logp_current) of -(exp(d) - d - 1), d = ref - current.
    const double kl = std::expm1(logps[i].ref - logps[i].current);
    grad[i] = (surrogate + params.beta * kl) / g;
  }
  return grad;
}

}  // namespace tarpo
