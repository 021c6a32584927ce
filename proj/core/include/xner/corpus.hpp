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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace xner {

enum class Position : std::uint8_t { kO, kB, kI, kE, kS };

enum class EntityType : std::uint8_t { kNone, kPer, kOrg, kLoc, kMisc };

enum class Schema : std::uint8_t { kBio, kBiose };

/// One NER tag. `type` is kNone exactly when `position` is kO.
struct Label {
  Position position = Position::kO;
  EntityType type = EntityType::kNone;

  static constexpr Label outside() { return {}; }
  static constexpr Label make(Position p, EntityType t) { return {p, t}; }

  bool is_outside() const { return position == Position::kO; }
  friend bool operator==(const Label&, const Label&) = default;
};

/// "O", "B-PER", "S-LOC", ... Returns nullopt for anything else.
std::optional<Label> parse_label(std::string_view text);
std::string to_string(Label label);
std::string_view to_string(EntityType type);
std::optional<EntityType> parse_entity_type(std::string_view text);
std::string_view to_string(Schema schema);

struct Token {
  std::string surface;
  Label label;
  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  std::vector<Label> labels() const;
  /// Replaces every label; sizes must match.
  void set_labels(const std::vector<Label>& labels);
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Corpus {
  std::vector<Sentence> sentences;
  std::string language;
  Schema schema = Schema::kBio;

  std::size_t token_count() const;
  friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Inclusive token range [start, end] of one typed entity.
struct EntitySpan {
  std::size_t sentence_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  EntityType type = EntityType::kNone;

  std::size_t length() const { return end - start + 1; }
  friend auto operator<=>(const EntitySpan&, const EntitySpan&) = default;
};

/// Reads CoNLL column text. Blank lines separate sentences and -DOCSTART-
/// lines are skipped. The schema is BIO unless an S- or E- tag occurs, in
/// which case the file is taken to be BIOSE already.
Corpus parse_conll(std::string_view text, std::size_t token_column = 0,
                   std::size_t label_column = std::size_t(-1),
                   std::string language = {});

/// "token label" per line, blank line after every sentence.
std::string write_conll(const Corpus& corpus);

/// Numeric iff non-empty after removing . , % - / + and all remaining
/// characters are ASCII digits.
bool is_numeric_token(std::string_view surface);

/// http://, https://, ftp:// or www. prefix.
bool is_url_token(std::string_view surface);

/// Lowercases every surface, then maps numbers to "num" and URLs to "url".
Corpus normalize_tokens(const Corpus& corpus);

/// Entity spans of one label sequence. Stray I-X/E-X (no open entity of
/// type X) opens a new entity; the result is disjoint, ordered, and covers
/// exactly the non-O positions.
std::vector<EntitySpan> extract_spans(std::size_t sentence_index,
                                      const std::vector<Label>& labels);

std::vector<EntitySpan> extract_spans(const Corpus& corpus);

std::vector<Label> bio_to_biose(const std::vector<Label>& labels);
std::vector<Label> biose_to_bio(const std::vector<Label>& labels);

/// Schema conversion at corpus level; a no-op when already in `target`.
Corpus convert_schema(const Corpus& corpus, Schema target);

/// Labels whose type is outside `keep` become O. Labels of the surviving
/// entities are untouched.
Corpus filter_tags(const Corpus& corpus, const std::set<EntityType>& keep);

/// Within each sentence, permutes units (whole entity spans and single O
/// tokens) uniformly at random. Token order inside every entity is kept.
Corpus shuffle_ablation(const Corpus& corpus, std::uint64_t seed);

}  // namespace xner
