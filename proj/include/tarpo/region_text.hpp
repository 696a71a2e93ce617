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

#ifndef TARPO_REGION_TEXT_HPP_
#define TARPO_REGION_TEXT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "tarpo/table.hpp"

namespace tarpo {

// Region declarations are recognized in two syntaxes:
//
//   T_reg = {["Single", "Year"], [1, 3]}
//   {"columns": ["Single", "Year"], "rows": [1, 3]}
//
// In the first form the marker is `T_reg` (or `T_{reg}`) followed by `=` or
// `:`. Column entries may be quoted names or bare integer indices.

struct RegionMatch {
  RawRegion region;
  std::size_t begin = 0;  // offset of the marker
  std::size_t end = 0;    // one past the closing brace
};

/// First region declaration in `text`, or nullopt when there is none.
/// Throws RegionSyntaxError when the first marker is followed by an
/// unparseable body.
std::optional<RegionMatch> parse_region_from_text(std::string_view text);

/// Number of declaration markers in `text` (well-formed or not).
std::size_t count_region_markers(std::string_view text);

enum class ReasoningKind { kDP, kTCoT, kSCoT, kPoT };

std::string_view to_string(ReasoningKind kind);
// Throws Error for anything other than DP, TCoT, SCoT, PoT.
ReasoningKind parse_reasoning_kind(std::string_view s);

/// Offset of the last `Final Answer:` marker (case-insensitive), or npos.
std::size_t find_answer_marker(std::string_view text);

/// Text after the last answer marker up to the end of that line, trimmed.
/// nullopt when there is no marker or nothing follows it.
std::optional<std::string> extract_answer(std::string_view text);

enum class RegionStatus { kFound, kAbsent, kSyntaxError, kUnbindable };

std::string_view to_string(RegionStatus status);

/// A model response with its region and final answer pulled out.
struct RegionAnnotatedResponse {
  std::string raw_text;
  std::optional<TableRegion> region;
  std::optional<std::string> answer_text;
  ReasoningKind reasoning_kind = ReasoningKind::kTCoT;
  RegionStatus region_status = RegionStatus::kAbsent;
  std::string diagnostic;  // set for kSyntaxError / kUnbindable
};

/// Never throws on malformed model output; problems are reported through
/// region_status so scoring can continue.
RegionAnnotatedResponse parse_response(std::string raw_text, ReasoningKind kind,
                                       const Table& table);

}  // namespace tarpo

#endif  // TARPO_REGION_TEXT_HPP_
