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

#ifndef TARPO_ROUGE_HPP_
#define TARPO_ROUGE_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tarpo {

// Lowercases, replaces ASCII punctuation with spaces and splits on
// whitespace. Non-ASCII bytes pass through unchanged.
std::vector<std::string> rouge_tokenize(std::string_view text);

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b);

/// Rouge-L F1 over normalized tokens: P = LCS/|pred|, R = LCS/|ref|,
/// 2PR/(P+R). Zero when either side has no tokens.
double rouge_l(std::string_view prediction, std::string_view reference);

}  // namespace tarpo

#endif  // TARPO_ROUGE_HPP_
