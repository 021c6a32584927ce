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

#include <atomic>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xner/corpus.hpp"

namespace xner {

struct TransliterationRule {
  std::u32string key;       // NFC code points, non-empty
  std::string replacement;  // printable ASCII
};

/// Ordered grapheme -> Latin rules for one script or language.
class TransliterationTable {
 public:
  TransliterationTable() = default;
  explicit TransliterationTable(std::string language) : language_(std::move(language)) {}

  /// Validates and appends a rule. Throws ValidationError for an empty key
  /// or a non-ASCII replacement.
  void add(std::string_view key_utf8, std::string replacement);

  const std::vector<TransliterationRule>& rules() const { return rules_; }
  const std::string& language() const { return language_; }
  std::size_t size() const { return rules_.size(); }

  /// Keys that are pure ASCII; such rules break idempotence of romanize.
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Indices of rules whose key starts with `c`, longest key first, file
  /// order among equal lengths.
  const std::vector<std::size_t>* rules_starting_with(char32_t c) const;

 private:
  std::string language_;
  std::vector<TransliterationRule> rules_;
  std::vector<std::string> warnings_;
  std::unordered_map<char32_t, std::vector<std::size_t>> by_first_;
};

/// "key<TAB>replacement" per line; '#' lines and blank lines are skipped.
TransliterationTable load_transliteration_table(std::string_view text,
                                                std::string language = {});

/// Longest-match-first transliteration to printable ASCII.
///
/// Input is NFC-normalized first. Printable ASCII passes through; other
/// unmatched characters become `placeholder` (empty by default) and are
/// counted.
class Romanizer {
 public:
  explicit Romanizer(TransliterationTable table, std::string placeholder = {});

  std::string operator()(std::string_view word) const;

  std::size_t unmatched_count() const { return unmatched_.load(); }
  const TransliterationTable& table() const { return table_; }

 private:
  TransliterationTable table_;
  std::string placeholder_;
  mutable std::atomic<std::size_t> unmatched_{0};
};

std::string romanize(std::string_view word, const TransliterationTable& table);

/// One romanized surface per token, parallel to `corpus`.
using RomanizedCorpus = std::vector<std::vector<std::string>>;

RomanizedCorpus romanize_corpus(const Corpus& corpus, const Romanizer& romanizer);

}  // namespace xner
