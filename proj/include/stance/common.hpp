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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stance {

// Topic position of a user or an entity.
enum class Stance : std::int8_t { kAnti = -1, kNone = 0, kPro = 1 };

// Disposition of a reply toward its source tweet.
enum class PairLabel : std::int8_t { kOppose = -1, kUnknown = 0, kFavor = 1 };

inline int to_int(Stance s) { return static_cast<int>(s); }
inline int to_int(PairLabel l) { return static_cast<int>(l); }

inline Stance stance_from_int(int v) {
  return v > 0 ? Stance::kPro : (v < 0 ? Stance::kAnti : Stance::kNone);
}
inline PairLabel pair_label_from_int(int v) {
  return v > 0 ? PairLabel::kFavor
               : (v < 0 ? PairLabel::kOppose : PairLabel::kUnknown);
}
inline Stance negate(Stance s) { return stance_from_int(-to_int(s)); }

std::string_view to_string(Stance s);
std::string_view to_string(PairLabel l);

// Accepts "pro", "anti", "+1", "-1", "1", "0", "none" (case-insensitive).
Stance parse_stance(std::string_view text);
// Accepts "favor", "support", "agree", "oppose", "deny", "+1", "-1", "0",
// "comment", "query", "unknown". Comment and query map to kUnknown.
PairLabel parse_pair_label(std::string_view text);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage was asked to run before the stage it depends on.
class DependencyError : public Error {
 public:
  DependencyError(std::string stage, std::string missing_stage,
                  const std::string& detail);
  const std::string& stage() const { return stage_; }
  const std::string& missing_stage() const { return missing_stage_; }

 private:
  std::string stage_;
  std::string missing_stage_;
};

// ---- small string helpers shared across modules ----

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
bool starts_with_icase(std::string_view s, std::string_view prefix);

// Shortest round-trip representation; stable across runs.
std::string format_double(double v);
// Fixed-point with `digits` decimals.
std::string format_fixed(double v, int digits);

// 64-bit FNV-1a, used for manifest and config fingerprints.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

}  // namespace stance
