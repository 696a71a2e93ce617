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

#ifndef TARPO_REWARD_HPP_
#define TARPO_REWARD_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tarpo/table.hpp"

namespace tarpo {

/// Scalar hyperparameters shared by the reward, advantage and objective
/// stages. Defaults for zeta, gamma, rho and lambda are the published
/// TARPO settings; epsilon and beta were never published and are ours.
struct RewardConfig {
  double zeta = 0.6;     // Rouge-L acceptance threshold
  double gamma = 0.3;    // initial region weight
  double rho = 9e-4;     // decay per optimizer step
  double lambda = 0.1;   // consistency penalty strength
  double epsilon = 0.2;  // clip radius
  double beta = 0.001;   // KL coefficient
  double numeric_tolerance = 1e-9;
  // Text answers must score strictly above zeta; false accepts equality.
  bool strict_threshold = true;

  // Throws ConfigError when a field is outside its domain.
  void validate() const;
};

/// Gold answer. List answers are matched element-wise without regard to
/// order; each element uses the numeric rule if it parses as a number and
/// the Rouge-L rule otherwise.
struct AnswerSpec {
  enum class Kind { kNumeric, kText, kList };

  Kind kind = Kind::kText;
  double number = 0.0;              // kNumeric
  std::vector<std::string> values;  // kText: one entry; kList: all entries

  static AnswerSpec numeric(double value);
  static AnswerSpec text(std::string value);
  static AnswerSpec list(std::vector<std::string> values);

  // Canonical display string (numbers in shortest round-trip form).
  std::string to_string() const;

  friend bool operator==(const AnswerSpec&, const AnswerSpec&) = default;
};

/// Locale-free number parsing. Strips surrounding whitespace, thousands
/// separators (`,`), `%` and the currency symbols $ € £ ¥. Returns nullopt
/// unless the remainder is a complete finite real.
std::optional<double> parse_number(std::string_view text);

/// Formats a real the way predicted answers are expected to write it:
/// integers without a fractional part, other values in shortest form.
std::string format_number(double value);

/// 1 when `predicted` matches `gold`, else 0. Never throws.
double answer_reward(std::string_view predicted, const AnswerSpec& gold,
                     const RewardConfig& config);

/// |a ∩ b| / |a ∪ b| over sorted, duplicate-free index sets; 1 when both
/// are empty.
double set_iou(const std::vector<std::size_t>& a,
               const std::vector<std::size_t>& b);

/// Mean of the column IoU and the row IoU.
double region_reward(const TableRegion& predicted, const TableRegion& gold);

/// Region reward assigned to a response that declares no usable region.
constexpr double missing_region_reward() { return 0.0; }

/// region_reward when a region is present, missing_region_reward otherwise.
double region_reward(const std::optional<TableRegion>& predicted,
                     const TableRegion& gold);

/// Region weight at optimizer step `step`: gamma * exp(-rho * step).
double alpha_schedule(std::uint64_t step, const RewardConfig& config);

/// alpha * region + (1 - alpha) * answer.
double mixed_reward(double region, double answer, double alpha);

}  // namespace tarpo

#endif  // TARPO_REWARD_HPP_
