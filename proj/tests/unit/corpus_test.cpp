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

#include <algorithm>
#include <map>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xner/corpus.hpp"
#include "xner/error.hpp"

namespace xner {
namespace {

using testing::corpus_of;
using testing::labels_of;

TEST(ParseConll, ReadsTokensAndLabels) {
  const Corpus c = parse_conll("EU B-ORG\nrejects O\n\n");
  ASSERT_EQ(c.sentences.size(), 1u);
  ASSERT_EQ(c.sentences[0].size(), 2u);
  EXPECT_EQ(c.sentences[0].tokens[0].surface, "EU");
  EXPECT_EQ(c.sentences[0].tokens[0].label, Label::make(Position::kB, EntityType::kOrg));
  EXPECT_EQ(c.sentences[0].tokens[1].surface, "rejects");
  EXPECT_TRUE(c.sentences[0].tokens[1].label.is_outside());
  EXPECT_EQ(c.schema, Schema::kBio);
}

TEST(ParseConll, EmptyInputHasNoSentences) {
  EXPECT_TRUE(parse_conll("").sentences.empty());
  EXPECT_TRUE(parse_conll("\n\n\n").sentences.empty());
}

TEST(ParseConll, SkipsDocstartMarker) {
  const std::string text =
      "-DOCSTART- O\n\n"
      "a O\nb B-PER\n\n"
      "c B-LOC\nd I-LOC\n\n"
      "e O\n";
  const Corpus c = parse_conll(text);
  ASSERT_EQ(c.sentences.size(), 3u);
  for (const auto& s : c.sentences) {
    for (const auto& t : s.tokens) EXPECT_NE(t.surface, "-DOCSTART-");
  }
  EXPECT_EQ(c.token_count(), 5u);
}

TEST(ParseConll, MultiColumnUsesLastColumnByDefault) {
  const Corpus c = parse_conll("EU NNP I-NP B-ORG\nrejects VBZ I-VP O\n");
  ASSERT_EQ(c.sentences.size(), 1u);
  EXPECT_EQ(c.sentences[0].tokens[0].label, Label::make(Position::kB, EntityType::kOrg));
  const Corpus d = parse_conll("x EU B-ORG\n", 1, 2);
  EXPECT_EQ(d.sentences[0].tokens[0].surface, "EU");
}

TEST(ParseConll, HandlesCrlf) {
  const Corpus c = parse_conll("a O\r\nb B-PER\r\n\r\nc O\r\n");
  ASSERT_EQ(c.sentences.size(), 2u);
  EXPECT_EQ(c.sentences[0].tokens[1].surface, "b");
}

TEST(ParseConll, TooFewColumnsReportsLine) {
  try {
    parse_conll("a O\nb\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_conll("a b c\n", 5, 1), ParseError);
}

TEST(ParseConll, UnknownLabelReportsLine) {
  try {
    parse_conll("a O\n\nb B-FOO\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseConll, DetectsBioseInput) {
  EXPECT_EQ(parse_conll("a S-PER\n").schema, Schema::kBiose);
  EXPECT_EQ(parse_conll("a B-PER\nb I-PER\n").schema, Schema::kBio);
}

TEST(WriteConll, RoundTrips) {
  const Corpus c = corpus_of({{{"Anna", "B-PER"}, {"lebt", "O"}}, {{"Bonn", "B-LOC"}}});
  EXPECT_EQ(write_conll(c), "Anna B-PER\nlebt O\n\nBonn B-LOC\n\n");
  EXPECT_EQ(parse_conll(write_conll(c)), c);
}

TEST(Labels, ParseAndPrint) {
  for (const char* tag : {"O", "B-PER", "I-ORG", "E-LOC", "S-MISC"}) {
    const auto label = parse_label(tag);
    ASSERT_TRUE(label.has_value()) << tag;
    EXPECT_EQ(to_string(*label), tag);
  }
  EXPECT_FALSE(parse_label("B-").has_value());
  EXPECT_FALSE(parse_label("O-PER").has_value());
  EXPECT_FALSE(parse_label("X-PER").has_value());
  EXPECT_FALSE(parse_label("b-per").has_value());
}

TEST(Normalize, LowercasesAndMapsSpecialTokens) {
  const Corpus c = corpus_of({{{"Berlin", "B-LOC"},
                               {"1996", "O"},
                               {"http://a.b/c", "O"},
                               {"3.5%", "O"},
                               {"GRÜNEN", "O"},
                               {"www.x.org", "O"},
                               {"-", "O"}}});
  const Corpus normalized = normalize_tokens(c);
  const auto& t = normalized.sentences[0].tokens;
  EXPECT_EQ(t[0].surface, "berlin");
  EXPECT_EQ(t[1].surface, "num");
  EXPECT_EQ(t[2].surface, "url");
  EXPECT_EQ(t[3].surface, "num");
  EXPECT_EQ(t[4].surface, "grünen");
  EXPECT_EQ(t[5].surface, "url");
  EXPECT_EQ(t[6].surface, "-");
  EXPECT_EQ(t[0].label, Label::make(Position::kB, EntityType::kLoc));
}

TEST(Normalize, NumericClassifier) {
  EXPECT_TRUE(is_numeric_token("1,000.50"));
  EXPECT_TRUE(is_numeric_token("12/05/1999"));
  EXPECT_TRUE(is_numeric_token("+7"));
  EXPECT_FALSE(is_numeric_token("%"));
  EXPECT_FALSE(is_numeric_token("3a"));
  EXPECT_FALSE(is_numeric_token(""));
  EXPECT_TRUE(is_url_token("https://x"));
  EXPECT_TRUE(is_url_token("ftp://x"));
  EXPECT_FALSE(is_url_token("http"));
}

TEST(Normalize, Idempotent) {
  const Corpus c = corpus_of({{{"Mixed", "O"}, {"42", "O"}, {"www.A.com", "O"}}});
  EXPECT_EQ(normalize_tokens(normalize_tokens(c)), normalize_tokens(c));
}

TEST(Schema, BioToBiose) {
  EXPECT_EQ(bio_to_biose(labels_of({"B-PER"})), labels_of({"S-PER"}));
  EXPECT_EQ(bio_to_biose(labels_of({"B-LOC", "I-LOC"})), labels_of({"B-LOC", "E-LOC"}));
  EXPECT_EQ(bio_to_biose(labels_of({"B-ORG", "I-ORG", "I-ORG", "O", "B-PER"})),
            labels_of({"B-ORG", "I-ORG", "E-ORG", "O", "S-PER"}));
  EXPECT_EQ(bio_to_biose(labels_of({"B-PER", "B-PER"})), labels_of({"S-PER", "S-PER"}));
  EXPECT_TRUE(bio_to_biose({}).empty());
}

TEST(Schema, BioseToBio) {
  EXPECT_EQ(biose_to_bio(labels_of({"S-PER"})), labels_of({"B-PER"}));
  EXPECT_EQ(biose_to_bio(labels_of({"B-LOC", "E-LOC"})), labels_of({"B-LOC", "I-LOC"}));
}

TEST(Schema, RandomRoundTrips) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto bio = testing::random_bio(rng, 1 + rng.index(12));
    const auto biose = bio_to_biose(bio);
    EXPECT_EQ(biose_to_bio(biose), bio);
    EXPECT_EQ(bio_to_biose(biose_to_bio(biose)), biose);
    EXPECT_EQ(extract_spans(0, bio), extract_spans(0, biose));
  }
}

TEST(Schema, ConvertCorpusIsNoOpInTargetSchema) {
  const Corpus bio = corpus_of({{{"a", "B-PER"}, {"b", "I-PER"}}});
  const Corpus biose = convert_schema(bio, Schema::kBiose);
  EXPECT_EQ(biose.schema, Schema::kBiose);
  EXPECT_EQ(biose.sentences[0].labels(), labels_of({"B-PER", "E-PER"}));
  EXPECT_EQ(convert_schema(biose, Schema::kBiose), biose);
  EXPECT_EQ(convert_schema(biose, Schema::kBio), bio);
}

TEST(Spans, DirectReading) {
  const auto spans = extract_spans(0, labels_of({"B-PER", "E-PER", "O"}));
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0], (EntitySpan{0, 0, 1, EntityType::kPer}));
  EXPECT_TRUE(extract_spans(0, labels_of({"O", "O"})).empty());
}

TEST(Spans, StrayTagsOpenNewEntities) {
  const auto spans = extract_spans(0, labels_of({"I-LOC", "O", "E-ORG"}));
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0], (EntitySpan{0, 0, 0, EntityType::kLoc}));
  EXPECT_EQ(spans[1], (EntitySpan{0, 2, 2, EntityType::kOrg}));

  // Type change inside an entity starts a new one.
  const auto split = extract_spans(3, labels_of({"B-PER", "I-LOC", "E-LOC"}));
  ASSERT_EQ(split.size(), 2u);
  EXPECT_EQ(split[0], (EntitySpan{3, 0, 0, EntityType::kPer}));
  EXPECT_EQ(split[1], (EntitySpan{3, 1, 2, EntityType::kLoc}));
}

TEST(Spans, CoverExactlyNonOutsidePositions) {
  Rng rng(5);
  for (int i = 0; i < 3000; ++i) {
    const auto labels = testing::random_biose_noisy(rng, 1 + rng.index(10));
    const auto spans = extract_spans(0, labels);
    std::vector<int> cover(labels.size(), 0);
    std::size_t previous_end = 0;
    for (std::size_t k = 0; k < spans.size(); ++k) {
      if (k > 0) EXPECT_GT(spans[k].start, previous_end);
      previous_end = spans[k].end;
      for (std::size_t p = spans[k].start; p <= spans[k].end; ++p) {
        ++cover[p];
        EXPECT_EQ(labels[p].type, spans[k].type);
      }
    }
    for (std::size_t p = 0; p < labels.size(); ++p) {
      EXPECT_EQ(cover[p], labels[p].is_outside() ? 0 : 1);
    }
  }
}

TEST(FilterTags, DropsUnkeptTypes) {
  const Corpus c = corpus_of({{{"x", "B-MISC"}, {"y", "E-MISC"}, {"z", "S-PER"}}});
  const Corpus f = filter_tags(c, {EntityType::kPer, EntityType::kOrg, EntityType::kLoc});
  EXPECT_EQ(f.sentences[0].labels(), labels_of({"O", "O", "S-PER"}));
  EXPECT_EQ(filter_tags(c, {}).sentences[0].labels(), labels_of({"O", "O", "O"}));
  EXPECT_EQ(filter_tags(c, {EntityType::kPer, EntityType::kOrg, EntityType::kLoc,
                            EntityType::kMisc}),
            c);
}

TEST(Shuffle, SingleUnitIsUnchanged) {
  const Corpus c = corpus_of({{{"a", "B-PER"}, {"b", "E-PER"}}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) EXPECT_EQ(shuffle_ablation(c, seed), c);
}

TEST(Shuffle, TwoUnitsEitherStayOrSwap) {
  const Corpus c = corpus_of({{{"w1", "O"}, {"w2", "B-LOC"}, {"w3", "E-LOC"}}});
  const Corpus swapped = corpus_of({{{"w2", "B-LOC"}, {"w3", "E-LOC"}, {"w1", "O"}}});
  int swaps = 0;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const Corpus s = shuffle_ablation(c, seed);
    if (s == swapped) {
      ++swaps;
    } else {
      EXPECT_EQ(s, c) << "seed " << seed;
    }
  }
  // Both permutations occur across seeds.
  EXPECT_GT(swaps, 0);
  EXPECT_LT(swaps, 64);
}

TEST(Shuffle, PreservesTokenMultisetAndEntities) {
  Rng rng(3);
  Corpus c;
  for (int i = 0; i < 200; ++i) {
    Sentence s;
    const auto labels = bio_to_biose(testing::random_bio(rng, 1 + rng.index(9)));
    for (std::size_t k = 0; k < labels.size(); ++k) {
      s.tokens.push_back({"t" + std::to_string(i) + "_" + std::to_string(k), labels[k]});
    }
    c.sentences.push_back(std::move(s));
  }
  c.schema = Schema::kBiose;
  const Corpus s = shuffle_ablation(c, 99);
  ASSERT_EQ(s.sentences.size(), c.sentences.size());
  for (std::size_t i = 0; i < c.sentences.size(); ++i) {
    auto a = c.sentences[i].tokens;
    auto b = s.sentences[i].tokens;
    const auto by_surface = [](const Token& x, const Token& y) { return x.surface < y.surface; };
    std::sort(a.begin(), a.end(), by_surface);
    std::sort(b.begin(), b.end(), by_surface);
    EXPECT_EQ(a, b);
    // Every entity survives as a contiguous block with the same tokens.
    const auto spans_of = [](const Sentence& sentence) {
      std::multiset<std::string> out;
      for (const auto& span : extract_spans(0, sentence.labels())) {
        std::string joined;
        for (std::size_t p = span.start; p <= span.end; ++p) {
          joined += sentence.tokens[p].surface + " ";
        }
        out.insert(joined);
      }
      return out;
    };
    EXPECT_EQ(spans_of(c.sentences[i]), spans_of(s.sentences[i]));
  }
  EXPECT_EQ(shuffle_ablation(c, 99), s);
}

}  // namespace
}  // namespace xner
