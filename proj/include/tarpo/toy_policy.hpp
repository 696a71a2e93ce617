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

#ifndef TARPO_TOY_POLICY_HPP_
#define TARPO_TOY_POLICY_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "tarpo/rng.hpp"
#include "tarpo/sim_tasks.hpp"

namespace tarpo::sim {

/// One composite action: indices into the task's column and row candidate
/// lists, an answer strategy and a verbosity level.
struct Choice {
  std::size_t column = 0;
  std::size_t row = 0;
  std::size_t strategy = 0;
  std::size_t verbosity = 0;

  friend bool operator==(const Choice&, const Choice&) = default;
};

/// Action probabilities of every factor for one task.
struct FactorDistributions {
  std::vector<double> column;
  std::vector<double> row;
  std::vector<double> strategy;
  std::vector<double> verbosity;
};

/// Factored log-linear softmax policy.
///
/// Parameter layout: column-feature weights, row-feature weights,
/// strategy logits, verbosity logits. Column and row candidates are scored
/// by weights . features, so one parameter vector serves every task.
class ToyPolicy {
 public:
  explicit ToyPolicy(std::size_t verbosity_levels = 4);
  ToyPolicy(std::vector<double> parameters, std::vector<double> reference,
            std::size_t verbosity_levels);

  std::size_t verbosity_levels() const { return verbosity_levels_; }
  std::size_t num_parameters() const { return parameters_.size(); }

  const std::vector<double>& parameters() const { return parameters_; }
  std::vector<double>& mutable_parameters() { return parameters_; }
  const std::vector<double>& reference_parameters() const { return reference_; }

  // A policy with the same layout that scores with the reference weights.
  ToyPolicy reference_policy() const;

  FactorDistributions distributions(const SyntheticTask& task) const;
  double log_prob(const SyntheticTask& task, const Choice& choice) const;
  double log_prob(const FactorDistributions& dist, const Choice& choice) const;

  /// Adds `scale * grad(log pi(choice))` into `grad`.
  void accumulate_log_prob_gradient(const SyntheticTask& task,
                                    const FactorDistributions& dist,
                                    const Choice& choice, double scale,
                                    std::span<double> grad) const;

  Choice sample(const FactorDistributions& dist, Rng& rng) const;
  // Per-factor argmax; ties go to the lowest index.
  Choice greedy(const FactorDistributions& dist) const;

  // Offsets into the parameter vector.
  static constexpr std::size_t kColumnOffset = 0;
  static constexpr std::size_t kRowOffset = kColumnFeatures;
  static constexpr std::size_t kStrategyOffset = kRowOffset + kRowFeatures;
  static constexpr std::size_t kVerbosityOffset = kStrategyOffset + kNumStrategies;

 private:
  std::vector<double> parameters_;
  std::vector<double> reference_;
  std::size_t verbosity_levels_;
};

std::vector<double> softmax(std::span<const double> logits);

}  // namespace tarpo::sim

#endif  // TARPO_TOY_POLICY_HPP_
