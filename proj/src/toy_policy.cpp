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

#include "tarpo/toy_policy.hpp"

#include <algorithm>
#include <cmath>

#include "tarpo/errors.hpp"

namespace tarpo::sim {
namespace {

std::size_t sample_index(std::span<const double> p, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return p.size() - 1;
}

std::size_t argmax(std::span<const double> p) {
  return static_cast<std::size_t>(
      std::max_element(p.begin(), p.end()) - p.begin());
}

template <std::size_t N>
std::vector<double> candidate_logits(const std::vector<Candidate<N>>& cands,
                                     const double* weights) {
  std::vector<double> logits;
  logits.reserve(cands.size());
  for (const auto& c : cands) {
    double z = 0.0;
    for (std::size_t k = 0; k < N; ++k) z += weights[k] * c.features[k];
    logits.push_back(z);
  }
  return logits;
}

// grad of log softmax over feature-scored candidates: phi(chosen) - E[phi].
template <std::size_t N>
void accumulate_candidate_gradient(const std::vector<Candidate<N>>& cands,
                                   std::span<const double> p,
                                   std::size_t chosen, double scale,
                                   double* grad) {
  for (std::size_t k = 0; k < N; ++k) {
    double expected = 0.0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      expected += p[i] * cands[i].features[k];
    }
    grad[k] += scale * (cands[chosen].features[k] - expected);
  }
}

void accumulate_onehot_gradient(std::span<const double> p, std::size_t chosen,
                                double scale, double* grad) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    grad[i] += scale * ((i == chosen ? 1.0 : 0.0) - p[i]);
  }
}

}  // namespace

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double z = 0.0;
  for (double& v : p) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

ToyPolicy::ToyPolicy(std::size_t verbosity_levels)
    : ToyPolicy(std::vector<double>(kVerbosityOffset + verbosity_levels, 0.0),
                std::vector<double>(kVerbosityOffset + verbosity_levels, 0.0),
                verbosity_levels) {}

ToyPolicy::ToyPolicy(std::vector<double> parameters,
                     std::vector<double> reference,
                     std::size_t verbosity_levels)
    : parameters_(std::move(parameters)),
      reference_(std::move(reference)),
      verbosity_levels_(verbosity_levels) {
  if (verbosity_levels_ == 0) throw Error("need at least one verbosity level");
  const std::size_t n = kVerbosityOffset + verbosity_levels_;
  if (parameters_.size() != n || reference_.size() != n) {
    throw Error("policy parameter vector has the wrong length");
  }
}

ToyPolicy ToyPolicy::reference_policy() const {
  return ToyPolicy(reference_, reference_, verbosity_levels_);
}

FactorDistributions ToyPolicy::distributions(const SyntheticTask& task) const {
  const double* w = parameters_.data();
  FactorDistributions d;
  d.column = softmax(candidate_logits(task.column_candidates, w + kColumnOffset));
  d.row = softmax(candidate_logits(task.row_candidates, w + kRowOffset));
  d.strategy = softmax(std::span<const double>(w + kStrategyOffset, kNumStrategies));
  d.verbosity =
      softmax(std::span<const double>(w + kVerbosityOffset, verbosity_levels_));
  return d;
}

double ToyPolicy::log_prob(const FactorDistributions& dist,
                           const Choice& choice) const {
  return std::log(dist.column[choice.column]) + std::log(dist.row[choice.row]) +
         std::log(dist.strategy[choice.strategy]) +
         std::log(dist.verbosity[choice.verbosity]);
}

double ToyPolicy::log_prob(const SyntheticTask& task,
                           const Choice& choice) const {
  return log_prob(distributions(task), choice);
}

void ToyPolicy::accumulate_log_prob_gradient(const SyntheticTask& task,
                                             const FactorDistributions& dist,
                                             const Choice& choice, double scale,
                                             std::span<double> grad) const {
  accumulate_candidate_gradient(task.column_candidates, dist.column,
                                choice.column, scale,
                                grad.data() + kColumnOffset);
  accumulate_candidate_gradient(task.row_candidates, dist.row, choice.row, scale,
                                grad.data() + kRowOffset);
  accumulate_onehot_gradient(dist.strategy, choice.strategy, scale,
                             grad.data() + kStrategyOffset);
  accumulate_onehot_gradient(dist.verbosity, choice.verbosity, scale,
                             grad.data() + kVerbosityOffset);
}

Choice ToyPolicy::sample(const FactorDistributions& dist, Rng& rng) const {
  Choice c;
  c.column = sample_index(dist.column, rng);
  c.row = sample_index(dist.row, rng);
  c.strategy = sample_index(dist.strategy, rng);
  c.verbosity = sample_index(dist.verbosity, rng);
  return c;
}

Choice ToyPolicy::greedy(const FactorDistributions& dist) const {
  return Choice{argmax(dist.column), argmax(dist.row), argmax(dist.strategy),
                argmax(dist.verbosity)};
}

}  // namespace tarpo::sim
