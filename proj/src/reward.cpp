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

#include "tarpo/reward.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>

#include "tarpo/errors.hpp"
#include "tarpo/rouge.hpp"

namespace tarpo {
namespace {

bool text_matches(std::string_view predicted, std::string_view gold,
                  const RewardConfig& config) {
  const double score = rouge_l(predicted, gold);
  return config.strict_threshold ? score > config.zeta : score >= config.zeta;
}

bool numeric_matches(std::string_view predicted, double gold,
                     const RewardConfig& config) {
  const auto value = parse_number(predicted);
  return value && std::abs(*value - gold) <= config.numeric_tolerance;
}

bool element_matches(std::string_view predicted, std::string_view gold,
                     const RewardConfig& config) {
  if (const auto g = parse_number(gold)) {
    return numeric_matches(predicted, *g, config);
  }
  return text_matches(predicted, gold, config);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = text.find(',', pos);
    std::string item = trim(text.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void RewardConfig::validate() const {
  require(zeta >= 0.0 && zeta <= 1.0, "zeta must lie in [0, 1]");
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(rho > 0.0 && std::isfinite(rho), "rho must be > 0");
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be >= 0");
  require(epsilon > 0.0, "epsilon must be > 0");
  require(beta >= 0.0 && std::isfinite(beta), "beta must be >= 0");
  require(numeric_tolerance >= 0.0, "numeric_tolerance must be >= 0");
}

AnswerSpec AnswerSpec::numeric(double value) {
  AnswerSpec a;
  a.kind = Kind::kNumeric;
  a.number = value;
  return a;
}

AnswerSpec AnswerSpec::text(std::string value) {
  AnswerSpec a;
  a.kind = Kind::kText;
  a.values.push_back(std::move(value));
  return a;
}

AnswerSpec AnswerSpec::list(std::vector<std::string> values) {
  AnswerSpec a;
  a.kind = Kind::kList;
  a.values = std::move(values);
  return a;
}

std::string AnswerSpec::to_string() const {
  switch (kind) {
    case Kind::kNumeric:
      return format_number(number);
    case Kind::kText:
      return values.empty() ? std::string() : values.front();
    case Kind::kList: {
      std::string out;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += values[i];
      }
      return out;
    }
  }
  return {};
}

std::optional<double> parse_number(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto u = static_cast<unsigned char>(text[i]);
    if (u == ',' || u == '%' || u == '$' || u == ' ' || u == '\t' ||
        u == '\n' || u == '\r') {
      continue;
    }
    // UTF-8: € = E2 82 AC, £ = C2 A3, ¥ = C2 A5.
    if (u == 0xE2 && i + 2 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0x82 &&
        static_cast<unsigned char>(text[i + 2]) == 0xAC) {
      i += 2;
      continue;
    }
    if (u == 0xC2 && i + 1 < text.size() &&
        (static_cast<unsigned char>(text[i + 1]) == 0xA3 ||
         static_cast<unsigned char>(text[i + 1]) == 0xA5)) {
      i += 1;
      continue;
    }
    cleaned.push_back(static_cast<char>(u));
  }
  if (cleaned.empty()) return std::nullopt;
  const char* first = cleaned.data();
  const char* last = cleaned.data() + cleaned.size();
  if (*first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string format_number(double value) {
  if (std::isfinite(value) && value == std::trunc(value) &&
      std::abs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(std::begin(buf), std::end(buf), value);
  return std::string(buf, ptr);
}

double answer_reward(std::string_view predicted, const AnswerSpec& gold,
                     const RewardConfig& config) {
  switch (gold.kind) {
    case AnswerSpec::Kind::kNumeric:
      return numeric_matches(predicted, gold.number, config) ? 1.0 : 0.0;
    case AnswerSpec::Kind::kText:
      if (gold.values.empty()) return 0.0;
      return text_matches(predicted, gold.values.front(), config) ? 1.0 : 0.0;
    case AnswerSpec::Kind::kList: {
      if (gold.values.empty()) return 0.0;
      const auto items = split_list(predicted);
      for (const auto& g : gold.values) {
        const bool found =
            std::any_of(items.begin(), items.end(), [&](const std::string& p) {
              return element_matches(p, g, config);
            });
        if (!found) return 0.0;
      }
      return 1.0;
    }
  }
  return 0.0;
}

double set_iou(const std::vector<std::size_t>& a,
               const std::vector<std::size_t>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double region_reward(const TableRegion& predicted, const TableRegion& gold) {
  return (set_iou(predicted.columns(), gold.columns()) +
          set_iou(predicted.rows(), gold.rows())) /
         2.0;
}

double region_reward(const std::optional<TableRegion>& predicted,
                     const TableRegion& gold) {
  return predicted ? region_reward(*predicted, gold) : missing_region_reward();
}

double alpha_schedule(std::uint64_t step, const RewardConfig& config) {
  return config.gamma * std::exp(-config.rho * static_cast<double>(step));
}

double mixed_reward(double region, double answer, double alpha) {
  return alpha * region + (1.0 - alpha) * answer;
}

}  // namespace tarpo
