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

#include "tarpo/region_text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "tarpo/errors.hpp"

namespace tarpo {
namespace {

enum class MarkerKind { kTReg, kObject };

struct Marker {
  std::size_t begin = std::string_view::npos;
  std::size_t body = 0;  // where the `{` of the body is expected
  MarkerKind kind = MarkerKind::kTReg;
};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && is_space(s[i])) ++i;
  return i;
}

// `T_reg =` / `T_{reg}:` at or after `from`.
Marker find_treg_marker(std::string_view s, std::size_t from) {
  static constexpr std::string_view kNames[] = {"T_reg", "T_{reg}"};
  while (from < s.size()) {
    Marker best;
    std::size_t best_len = 0;
    for (auto name : kNames) {
      std::size_t p = s.find(name, from);
      if (p < best.begin) {
        best.begin = p;
        best_len = name.size();
      }
    }
    if (best.begin == std::string_view::npos) return best;
    std::size_t i = skip_space(s, best.begin + best_len);
    if (i < s.size() && (s[i] == '=' || s[i] == ':')) {
      best.body = skip_space(s, i + 1);
      best.kind = MarkerKind::kTReg;
      return best;
    }
    from = best.begin + 1;
  }
  return {};
}

// `{"columns":` at or after `from`.
Marker find_object_marker(std::string_view s, std::size_t from) {
  static constexpr std::string_view kKey = "\"columns\"";
  for (std::size_t p = s.find('{', from); p != std::string_view::npos;
       p = s.find('{', p + 1)) {
    std::size_t i = skip_space(s, p + 1);
    if (s.substr(i, kKey.size()) != kKey) continue;
    i = skip_space(s, i + kKey.size());
    if (i < s.size() && s[i] == ':') {
      return Marker{p, p, MarkerKind::kObject};
    }
  }
  return {};
}

Marker find_first_marker(std::string_view s, std::size_t from) {
  Marker a = find_treg_marker(s, from);
  Marker b = find_object_marker(s, from);
  return a.begin <= b.begin ? a : b;
}

class Cursor {
 public:
  Cursor(std::string_view s, std::size_t pos) : s_(s), pos_(pos) {}

  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw RegionSyntaxError(what, pos_);
  }

  void skip() { pos_ = skip_space(s_, pos_); }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool at_string() { return peek('"') || peek('\''); }

  std::string string() {
    skip();
    const char quote = s_[pos_++];
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != quote) {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out.push_back(s_[pos_++]);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  long long integer() {
    skip();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    std::string_view digits = s_.substr(start, pos_ - start);
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size() ||
        digits.empty()) {
      pos_ = start;
      fail("expected integer");
    }
    return v;
  }

  std::vector<RawRegion::ColumnRef> column_list() {
    expect('[');
    std::vector<RawRegion::ColumnRef> out;
    if (peek(']')) {
      ++pos_;
      return out;
    }
    for (;;) {
      if (at_string()) {
        out.emplace_back(string());
      } else {
        out.emplace_back(integer());
      }
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect(']');
      return out;
    }
  }

  std::vector<long long> row_list() {
    expect('[');
    std::vector<long long> out;
    if (peek(']')) {
      ++pos_;
      return out;
    }
    for (;;) {
      out.push_back(integer());
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect(']');
      return out;
    }
  }

 private:
  std::string_view s_;
  std::size_t pos_;
};

RegionMatch parse_treg_body(std::string_view s, const Marker& m) {
  Cursor cur(s, m.body);
  RegionMatch out;
  out.begin = m.begin;
  cur.expect('{');
  out.region.columns = cur.column_list();
  cur.expect(',');
  out.region.rows = cur.row_list();
  cur.expect('}');
  out.end = cur.pos();
  return out;
}

RegionMatch parse_object_body(std::string_view s, const Marker& m) {
  Cursor cur(s, m.body);
  RegionMatch out;
  out.begin = m.begin;
  cur.expect('{');
  bool have_cols = false, have_rows = false;
  for (int field = 0; field < 2; ++field) {
    if (field) cur.expect(',');
    if (!cur.at_string()) cur.fail("expected key");
    const std::string key = cur.string();
    cur.expect(':');
    if (key == "columns" && !have_cols) {
      out.region.columns = cur.column_list();
      have_cols = true;
    } else if (key == "rows" && !have_rows) {
      out.region.rows = cur.row_list();
      have_rows = true;
    } else {
      cur.fail("unexpected key \"" + key + "\"");
    }
  }
  cur.expect('}');
  out.end = cur.pos();
  return out;
}

char ascii_lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

}  // namespace

std::optional<RegionMatch> parse_region_from_text(std::string_view text) {
  const Marker m = find_first_marker(text, 0);
  if (m.begin == std::string_view::npos) return std::nullopt;
  return m.kind == MarkerKind::kTReg ? parse_treg_body(text, m)
                                     : parse_object_body(text, m);
}

std::size_t count_region_markers(std::string_view text) {
  std::size_t n = 0;
  for (Marker m = find_first_marker(text, 0); m.begin != std::string_view::npos;
       m = find_first_marker(text, m.begin + 1)) {
    ++n;
  }
  return n;
}

std::string_view to_string(ReasoningKind kind) {
  switch (kind) {
    case ReasoningKind::kDP:
      return "DP";
    case ReasoningKind::kTCoT:
      return "TCoT";
    case ReasoningKind::kSCoT:
      return "SCoT";
    case ReasoningKind::kPoT:
      return "PoT";
  }
  return "?";
}

ReasoningKind parse_reasoning_kind(std::string_view s) {
  if (s == "DP") return ReasoningKind::kDP;
  if (s == "TCoT") return ReasoningKind::kTCoT;
  if (s == "SCoT") return ReasoningKind::kSCoT;
  if (s == "PoT") return ReasoningKind::kPoT;
  throw Error("unknown reasoning kind: " + std::string(s));
}

std::size_t find_answer_marker(std::string_view text) {
  static constexpr std::string_view kMarker = "final answer:";
  if (text.size() < kMarker.size()) return std::string_view::npos;
  for (std::size_t p = text.size() - kMarker.size() + 1; p-- > 0;) {
    bool match = true;
    for (std::size_t k = 0; k < kMarker.size() && match; ++k) {
      match = ascii_lower(text[p + k]) == kMarker[k];
    }
    if (match) return p;
  }
  return std::string_view::npos;
}

std::optional<std::string> extract_answer(std::string_view text) {
  const std::size_t p = find_answer_marker(text);
  if (p == std::string_view::npos) return std::nullopt;
  std::string_view rest = text.substr(p + std::string_view("final answer:").size());
  rest = rest.substr(0, rest.find('\n'));
  std::string answer = trim(rest);
  if (answer.empty()) return std::nullopt;
  return answer;
}

std::string_view to_string(RegionStatus status) {
  switch (status) {
    case RegionStatus::kFound:
      return "found";
    case RegionStatus::kAbsent:
      return "absent";
    case RegionStatus::kSyntaxError:
      return "syntax-error";
    case RegionStatus::kUnbindable:
      return "unbindable";
  }
  return "?";
}

RegionAnnotatedResponse parse_response(std::string raw_text, ReasoningKind kind,
                                       const Table& table) {
  RegionAnnotatedResponse out;
  out.reasoning_kind = kind;
  out.answer_text = extract_answer(raw_text);
  try {
    if (auto match = parse_region_from_text(raw_text)) {
      out.region = canonicalize_region(match->region, table);
      out.region_status = RegionStatus::kFound;
    }
  } catch (const RegionSyntaxError& e) {
    out.region_status = RegionStatus::kSyntaxError;
    out.diagnostic = e.what();
  } catch (const Error& e) {
    out.region_status = RegionStatus::kUnbindable;
    out.diagnostic = e.what();
  }
  out.raw_text = std::move(raw_text);
  return out;
}

}  // namespace tarpo
