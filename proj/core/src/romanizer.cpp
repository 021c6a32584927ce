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

#include "xner/romanizer.hpp"

#include <algorithm>

#include "xner/error.hpp"
#include "xner/text.hpp"

namespace xner {

void TransliterationTable::add(std::string_view key_utf8, std::string replacement) {
  const std::string key = text::nfc(key_utf8);
  if (key.empty()) throw ValidationError("transliteration key is empty");
  if (!text::is_printable_ascii(replacement)) {
    throw ValidationError("replacement for '" + key +
                          "' is not printable ASCII");
  }
  if (text::is_printable_ascii(key)) {
    warnings_.push_back("ASCII key '" + key + "' makes romanization non-idempotent");
  }
  const std::size_t index = rules_.size();
  rules_.push_back({text::decode_utf8(key), std::move(replacement)});

  auto& bucket = by_first_[rules_.back().key.front()];
  bucket.push_back(index);
  std::stable_sort(bucket.begin(), bucket.end(), [this](std::size_t a, std::size_t b) {
    return rules_[a].key.size() > rules_[b].key.size();
  });
}

const std::vector<std::size_t>* TransliterationTable::rules_starting_with(
    char32_t c) const {
  const auto it = by_first_.find(c);
  return it == by_first_.end() ? nullptr : &it->second;
}

TransliterationTable load_transliteration_table(std::string_view content,
                                                std::string language) {
  TransliterationTable table(std::move(language));
  std::size_t n = 0;
  for (std::string_view line : text::split_lines(content)) {
    ++n;
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      throw ParseError("expected 'grapheme<TAB>replacement'", n);
    }
    try {
      table.add(line.substr(0, tab), std::string(line.substr(tab + 1)));
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return table;
}

Romanizer::Romanizer(TransliterationTable table, std::string placeholder)
    : table_(std::move(table)), placeholder_(std::move(placeholder)) {
  if (!text::is_printable_ascii(placeholder_)) {
    throw ValidationError("romanization placeholder must be printable ASCII");
  }
}

std::string Romanizer::operator()(std::string_view word) const {
  const std::u32string input = text::decode_utf8(text::nfc(word));
  const auto& rules = table_.rules();
  std::string out;
  out.reserve(input.size());
  std::size_t i = 0;
  while (i < input.size()) {
    bool matched = false;
    if (const auto* candidates = table_.rules_starting_with(input[i])) {
      for (std::size_t r : *candidates) {
        const auto& key = rules[r].key;
        if (input.compare(i, key.size(), key) == 0) {
          out += rules[r].replacement;
          i += key.size();
          matched = true;
          break;
        }
      }
    }
    if (matched) continue;
    const char32_t c = input[i++];
    if (c >= 0x20 && c <= 0x7e) {
      out.push_back(static_cast<char>(c));
    } else {
      out += placeholder_;
      unmatched_.fetch_add(1, std::memory_order_relaxed);
    }
  }
  return out;
}

std::string romanize(std::string_view word, const TransliterationTable& table) {
  return Romanizer(table)(word);
}

RomanizedCorpus romanize_corpus(const Corpus& corpus, const Romanizer& romanizer) {
  RomanizedCorpus out;
  out.reserve(corpus.sentences.size());
  for (const auto& sentence : corpus.sentences) {
    auto& row = out.emplace_back();
    row.reserve(sentence.size());
    for (const auto& token : sentence.tokens) row.push_back(romanizer(token.surface));
  }
  return out;
}

}  // namespace xner
