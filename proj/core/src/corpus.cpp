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

#include "xner/corpus.hpp"

#include <algorithm>
#include <array>

#include "xner/error.hpp"
#include "xner/random.hpp"
#include "xner/text.hpp"

namespace xner {

namespace {

constexpr std::array<std::pair<EntityType, std::string_view>, 4> kTypeNames{{
    {EntityType::kPer, "PER"},
    {EntityType::kOrg, "ORG"},
    {EntityType::kLoc, "LOC"},
    {EntityType::kMisc, "MISC"},
}};

char position_char(Position p) {
  switch (p) {
    case Position::kB: return 'B';
    case Position::kI: return 'I';
    case Position::kE: return 'E';
    case Position::kS: return 'S';
    case Position::kO: break;
  }
  return 'O';
}

// Encodes spans into labels of the requested schema.
std::vector<Label> encode_spans(const std::vector<EntitySpan>& spans,
                                std::size_t length, Schema schema) {
  std::vector<Label> out(length, Label::outside());
  for (const auto& span : spans) {
    if (span.length() == 1) {
      out[span.start] = Label::make(
          schema == Schema::kBiose ? Position::kS : Position::kB, span.type);
      continue;
    }
    out[span.start] = Label::make(Position::kB, span.type);
    for (std::size_t i = span.start + 1; i < span.end; ++i) {
      out[i] = Label::make(Position::kI, span.type);
    }
    out[span.end] = Label::make(
        schema == Schema::kBiose ? Position::kE : Position::kI, span.type);
  }
  return out;
}

}  // namespace

std::string_view to_string(EntityType type) {
  for (const auto& [t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "";
}

std::optional<EntityType> parse_entity_type(std::string_view text) {
  for (const auto& [t, name] : kTypeNames) {
    if (name == text) return t;
  }
  return std::nullopt;
}

std::string_view to_string(Schema schema) {
  return schema == Schema::kBio ? "BIO" : "BIOSE";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "O") return Label::outside();
  if (text.size() < 3 || text[1] != '-') return std::nullopt;
  Position position;
  switch (text[0]) {
    case 'B': position = Position::kB; break;
    case 'I': position = Position::kI; break;
    case 'E': position = Position::kE; break;
    case 'S': position = Position::kS; break;
    default: return std::nullopt;
  }
  const auto type = parse_entity_type(text.substr(2));
  if (!type) return std::nullopt;
  return Label::make(position, *type);
}

std::string to_string(Label label) {
  if (label.is_outside()) return "O";
  std::string out(1, position_char(label.position));
  out += '-';
  out += to_string(label.type);
  return out;
}

std::vector<Label> Sentence::labels() const {
  std::vector<Label> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) out.push_back(token.label);
  return out;
}

void Sentence::set_labels(const std::vector<Label>& labels) {
  if (labels.size() != tokens.size()) {
    throw ValidationError("label count does not match sentence length");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) tokens[i].label = labels[i];
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

Corpus parse_conll(std::string_view text, std::size_t token_column,
                   std::size_t label_column, std::string language) {
  Corpus corpus;
  corpus.language = std::move(language);
  Sentence current;
  bool saw_biose_tag = false;
  std::size_t line_number = 0;

  const auto flush = [&] {
    if (!current.tokens.empty()) {
      corpus.sentences.push_back(std::move(current));
      current = Sentence{};
    }
  };

  for (std::string_view line : text::split_lines(text)) {
    ++line_number;
    const auto fields = text::split_fields(line);
    if (fields.empty()) {
      flush();
      continue;
    }
    if (fields.front().starts_with("-DOCSTART-")) continue;

    const bool label_is_last = label_column == std::size_t(-1);
    const std::size_t required =
        std::max<std::size_t>(2, std::max(token_column, label_is_last ? 0 : label_column) + 1);
    if (fields.size() < required) {
      throw ParseError("expected at least " + std::to_string(required) +
                           " columns, found " + std::to_string(fields.size()),
                       line_number);
    }
    const std::size_t label_index = label_is_last ? fields.size() - 1 : label_column;
    if (label_index == token_column) {
      throw ParseError("token and label columns coincide", line_number);
    }
    const auto label = parse_label(fields[label_index]);
    if (!label) {
      throw ParseError("unknown label '" + std::string(fields[label_index]) + "'",
                       line_number);
    }
    if (label->position == Position::kS || label->position == Position::kE) {
      saw_biose_tag = true;
    }
    current.tokens.push_back(Token{std::string(fields[token_column]), *label});
  }
  flush();
  corpus.schema = saw_biose_tag ? Schema::kBiose : Schema::kBio;
  return corpus;
}

std::string write_conll(const Corpus& corpus) {
  std::string out;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& token : sentence.tokens) {
      out += token.surface;
      out += ' ';
      out += to_string(token.label);
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

bool is_numeric_token(std::string_view surface) {
  bool any_digit = false;
  for (char c : surface) {
    switch (c) {
      case '.': case ',': case '%': case '-': case '/': case '+':
        continue;
      default:
        if (c < '0' || c > '9') return false;
        any_digit = true;
    }
  }
  return any_digit;
}

bool is_url_token(std::string_view surface) {
  return surface.starts_with("http://") || surface.starts_with("https://") ||
         surface.starts_with("ftp://") || surface.starts_with("www.");
}

Corpus normalize_tokens(const Corpus& corpus) {
  Corpus out = corpus;
  for (auto& sentence : out.sentences) {
    for (auto& token : sentence.tokens) {
      std::string lowered = text::to_lower(token.surface);
      if (is_numeric_token(lowered)) {
        token.surface = "num";
      } else if (is_url_token(lowered)) {
        token.surface = "url";
      } else {
        token.surface = std::move(lowered);
      }
    }
  }
  return out;
}

std::vector<EntitySpan> extract_spans(std::size_t sentence_index,
                                      const std::vector<Label>& labels) {
  std::vector<EntitySpan> spans;
  std::optional<EntitySpan> open;
  const auto close = [&](std::size_t end) {
    if (open) {
      open->end = end;
      spans.push_back(*open);
      open.reset();
    }
  };
  const auto start = [&](std::size_t i, EntityType type) {
    open = EntitySpan{sentence_index, i, i, type};
  };

  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Label label = labels[i];
    const bool continues = open && open->type == label.type;
    switch (label.position) {
      case Position::kO:
        if (open) close(i - 1);
        break;
      case Position::kB:
        if (open) close(i - 1);
        start(i, label.type);
        break;
      case Position::kI:
        if (!continues) {
          if (open) close(i - 1);
          start(i, label.type);
        }
        break;
      case Position::kE:
        if (!continues) {
          if (open) close(i - 1);
          start(i, label.type);
        }
        close(i);
        break;
      case Position::kS:
        if (open) close(i - 1);
        start(i, label.type);
        close(i);
        break;
    }
  }
  if (open) close(labels.size() - 1);
  return spans;
}

std::vector<EntitySpan> extract_spans(const Corpus& corpus) {
  std::vector<EntitySpan> all;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    auto spans = extract_spans(s, corpus.sentences[s].labels());
    all.insert(all.end(), spans.begin(), spans.end());
  }
  return all;
}

std::vector<Label> bio_to_biose(const std::vector<Label>& labels) {
  return encode_spans(extract_spans(0, labels), labels.size(), Schema::kBiose);
}

std::vector<Label> biose_to_bio(const std::vector<Label>& labels) {
  return encode_spans(extract_spans(0, labels), labels.size(), Schema::kBio);
}

Corpus convert_schema(const Corpus& corpus, Schema target) {
  if (corpus.schema == target) return corpus;
  Corpus out = corpus;
  for (auto& sentence : out.sentences) {
    const auto labels = sentence.labels();
    sentence.set_labels(target == Schema::kBiose ? bio_to_biose(labels)
                                                 : biose_to_bio(labels));
  }
  out.schema = target;
  return out;
}

Corpus filter_tags(const Corpus& corpus, const std::set<EntityType>& keep) {
  Corpus out = corpus;
  for (auto& sentence : out.sentences) {
    for (auto& token : sentence.tokens) {
      if (!token.label.is_outside() && !keep.contains(token.label.type)) {
        token.label = Label::outside();
      }
    }
  }
  return out;
}

Corpus shuffle_ablation(const Corpus& corpus, std::uint64_t seed) {
  Corpus out = corpus;
  Rng rng(seed);
  for (std::size_t s = 0; s < out.sentences.size(); ++s) {
    const Sentence& original = corpus.sentences[s];
    const auto spans = extract_spans(s, original.labels());

    // Units as [first, last] token ranges in original order.
    std::vector<std::pair<std::size_t, std::size_t>> units;
    std::size_t next_span = 0;
    for (std::size_t i = 0; i < original.size();) {
      if (next_span < spans.size() && spans[next_span].start == i) {
        units.emplace_back(i, spans[next_span].end);
        i = spans[next_span].end + 1;
        ++next_span;
      } else {
        units.emplace_back(i, i);
        ++i;
      }
    }
    rng.shuffle(units.begin(), units.end());

    auto& tokens = out.sentences[s].tokens;
    tokens.clear();
    for (const auto& [first, last] : units) {
      for (std::size_t i = first; i <= last; ++i) {
        tokens.push_back(original.tokens[i]);
      }
    }
  }
  return out;
}

}  // namespace xner
