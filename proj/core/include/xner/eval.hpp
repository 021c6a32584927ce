// Copyright 2026 The xner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "xner/corpus.hpp"

namespace xner {

/// Precision, recall and F1 in [0, 1], with the counts behind them.
struct ScoreTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;

  /// Builds the ratios from counts; 0/0 is 0.
  static ScoreTriple from_counts(std::size_t gold, std::size_t predicted,
                                 std::size_t correct);
};

/// Exact span-and-type matching over all sentences. Throws ValidationError
/// when the corpora differ in sentence count or any sentence length.
ScoreTriple entity_f1(const Corpus& gold, const Corpus& predicted);

/// Entity length buckets: 1, 2 and >= 3 tokens.
struct LengthBuckets {
  static constexpr std::array<const char*, 3> kNames{"1", "2", ">=3"};
  std::array<ScoreTriple, 3> buckets;

  static std::size_t bucket_of(std::size_t length) {
    return length >= 3 ? 2 : length - 1;
  }
};

/// Per-length scores: precision buckets predicted spans by their length,
/// recall buckets gold spans by theirs; a correct match counts in the one
/// bucket both share.
LengthBuckets f1_by_length(const Corpus& gold, const Corpus& predicted);

/// Aligned plain-text table of overall and per-length scores (x100).
std::string format_score_report(const ScoreTriple& overall,
                                const LengthBuckets& lengths);

/// JSON record of the same.
std::string score_report_json(const ScoreTriple& overall,
                              const LengthBuckets& lengths);

}  // namespace xner
