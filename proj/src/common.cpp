// Copyright 2026 The weakstance Authors
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

#include "stance/common.hpp"

#include <cctype>
#include <cstdio>
#include <utility>

namespace stance {

std::string_view to_string(Stance s) {
  switch (s) {
    case Stance::kPro:
      return "pro";
    case Stance::kAnti:
      return "anti";
    case Stance::kNone:
      break;
  }
  return "none";
}

std::string_view to_string(PairLabel l) {
  switch (l) {
    case PairLabel::kFavor:
      return "favor";
    case PairLabel::kOppose:
      return "oppose";
    case PairLabel::kUnknown:
      break;
  }
  return "unknown";
}

Stance parse_stance(std::string_view text) {
  const std::string t = to_lower(trim(text));
  if (t == "pro" || t == "+1" || t == "1" || t == "favor") return Stance::kPro;
  if (t == "anti" || t == "-1" || t == "con" || t == "against")
    return Stance::kAnti;
  if (t == "0" || t == "none" || t == "neutral" || t.empty())
    return Stance::kNone;
  throw InvalidInputError("unrecognized stance label '" + std::string(text) +
                          "'");
}

PairLabel parse_pair_label(std::string_view text) {
  const std::string t = to_lower(trim(text));
  if (t == "favor" || t == "support" || t == "agree" || t == "+1" || t == "1")
    return PairLabel::kFavor;
  if (t == "oppose" || t == "deny" || t == "against" || t == "-1")
    return PairLabel::kOppose;
  if (t == "0" || t == "unknown" || t == "comment" || t == "query" ||
      t == "queries" || t.empty())
    return PairLabel::kUnknown;
  throw InvalidInputError("unrecognized conversation label '" +
                          std::string(text) + "'");
}

DependencyError::DependencyError(std::string stage, std::string missing_stage,
                                 const std::string& detail)
    : Error("stage '" + stage + "' needs artifacts from stage '" +
            missing_stage + "' (" + detail + "); run '" + missing_stage +
            "' first"),
      stage_(std::move(stage)),
      missing_stage_(std::move(missing_stage)) {}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace stance
