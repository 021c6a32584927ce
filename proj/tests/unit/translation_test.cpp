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

#include <cmath>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xner/embeddings.hpp"
#include "xner/error.hpp"
#include "xner/translation.hpp"

namespace xner {
namespace {

TEST(Dictionary, LoadsCandidatesInOrder) {
  const auto d = load_dictionary("green grün\ngreen grünen\n");
  ASSERT_NE(d.candidates("green"), nullptr);
  EXPECT_EQ(*d.candidates("green"), (std::vector<std::string>{"grün", "grünen"}));
  EXPECT_EQ(d.candidates("red"), nullptr);
  EXPECT_TRUE(load_dictionary("").empty());
  EXPECT_EQ(*load_dictionary("a x\na x\n").candidates("a"), std::vector<std::string>{"x"});
  EXPECT_THROW(load_dictionary("a x y\n"), ParseError);
}

TEST(Dictionary, MalformedLineNamesLine) {
  try {
    load_dictionary("a x\nlonely\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Score, EmptyContextIsPairSimilarity) {
  const auto t = load_embeddings("w 1 2\nt 1 2\n");
  EXPECT_NEAR(score_candidate({"w", {}, 0.5}, "t", t), 0.5, 1e-12);
}

TEST(Score, OneContextWordHandComputed) {
  const auto t = load_embeddings("w 1 0\nt 0 1\nc 0 1\n");
  // 0.5 * cos(w,t) + 0.5 * cos(t,c) / (1+1)^2 = 0 + 0.5 * 1/4
  EXPECT_NEAR(score_candidate({"w", {{"c", 1}}, 0.5}, "t", t), 0.125, 1e-12);
}

TEST(Score, AlphaOneIgnoresContext) {
  const auto t = load_embeddings("w 1 0\nt 0.6 0.8\nc 0 1\nd -1 0\n");
  const double pair = 0.6;
  EXPECT_NEAR(score_candidate({"w", {{"c", 1}, {"d", 3}}, 1.0}, "t", t), pair, 1e-12);
  EXPECT_NEAR(score_candidate({"w", {}, 1.0}, "t", t), pair, 1e-12);
}

TEST(Score, DistanceWeighting) {
  const auto t = load_embeddings("w 1 0\nt 0 1\nc 0 1\n");
  for (std::size_t d = 1; d < 6; ++d) {
    const double expected = 0.7 * (1.0 / static_cast<double>((d + 1) * (d + 1)));
    EXPECT_NEAR(score_candidate({"w", {{"c", d}}, 0.3}, "t", t), expected, 1e-12);
  }
}

TEST(Score, MissingEmbeddings) {
  const auto t = load_embeddings("w 1 0\nt 0 1\n");
  EXPECT_EQ(score_candidate({"w", {}, 0.5}, "nope", t), kUnscorable);
  EXPECT_EQ(score_candidate({"absent", {{"also_absent", 1}}, 0.5}, "t", t), 0.0);
}

TEST(Select, SingletonAndTies) {
  const auto t = load_embeddings("w 1 0\na 1 0\nb 1 0\n");
  EXPECT_EQ(select_candidate({"w", {}, 0.5}, {"zzz"}, t), 0u);
  EXPECT_EQ(select_candidate({"w", {}, 0.5}, {"a", "b"}, t), 0u);
  EXPECT_EQ(select_candidate({"w", {}, 0.5}, {"x", "y"}, t), 0u);
  EXPECT_EQ(select_candidate({"w", {}, 0.5}, {"x", "b"}, t), 1u);
}

EmbeddingTable polysemy_table() {
  // green = [1,0]; g1 leans away from bank, g2 towards it.
  return load_embeddings(
      "green 1 0\n"
      "bank 0 1\n"
      "g1 0.8 -0.6\n"
      "g2 0.8 0.6\n");
}

TEST(Translate, ContextPicksMatchingSense) {
  const auto t = polysemy_table();
  BilingualDictionary d;
  d.add("green", "g1");
  d.add("green", "g2");
  // g1: 0.4 - 0.5 * 0.6 / 4 = 0.325; g2: 0.4 + 0.075 = 0.475.
  EXPECT_NEAR(score_candidate({"green", {{"bank", 1}}, 0.5}, "g1", t), 0.325, 1e-12);
  EXPECT_NEAR(score_candidate({"green", {{"bank", 1}}, 0.5}, "g2", t), 0.475, 1e-12);
  const Corpus c = testing::corpus_of({{{"green", "B-ORG"}, {"bank", "E-ORG"}}});
  const Sentence out = translate_sentence(c.sentences[0], d, t, 0.5);
  EXPECT_EQ(out.tokens[0].surface, "g2");
  EXPECT_EQ(out.tokens[1].surface, "bank");
  EXPECT_EQ(out.labels(), c.sentences[0].labels());
}

TEST(Translate, ScalingEmbeddingsKeepsSelections) {
  Rng rng(13);
  EmbeddingTable t(4);
  EmbeddingTable scaled(4);
  std::vector<std::string> words;
  for (int i = 0; i < 30; ++i) {
    const Eigen::VectorXd v = testing::random_gaussian(4, 1, rng).col(0);
    const Eigen::VectorXd s = 7.0 * v;
    words.push_back("w" + std::to_string(i));
    t.insert(words.back(), std::span<const double>(v.data(), 4));
    scaled.insert(words.back(), std::span<const double>(s.data(), 4));
  }
  for (int trial = 0; trial < 200; ++trial) {
    ScoringContext ctx{words[rng.index(30)], {}, rng.uniform()};
    for (std::size_t k = 0; k < 1 + rng.index(4); ++k) {
      ctx.context.push_back({words[rng.index(30)], 1 + rng.index(5)});
    }
    std::vector<std::string> candidates;
    for (std::size_t k = 0; k < 2 + rng.index(4); ++k) candidates.push_back(words[rng.index(30)]);
    EXPECT_EQ(select_candidate(ctx, candidates, t), select_candidate(ctx, candidates, scaled));
  }
}

TEST(TranslateCorpus, Statistics) {
  const auto t = polysemy_table();
  const Corpus c = testing::corpus_of({{{"green", "S-PER"}, {"bank", "O"}, {"x", "O"}}});
  const auto empty = translate_corpus(c, BilingualDictionary{}, t);
  EXPECT_EQ(empty.corpus, c);
  EXPECT_EQ(empty.stats.replaced, 0u);
  EXPECT_EQ(empty.stats.kept, 3u);

  BilingualDictionary all;
  all.add("green", "g1");
  all.add("bank", "b1");
  all.add("x", "y");
  const auto full = translate_corpus(c, all, t);
  EXPECT_EQ(full.stats.replaced, c.token_count());
  EXPECT_EQ(full.stats.replaced + full.stats.kept, c.token_count());
  EXPECT_EQ(full.stats.per_type.at("PER").first, 1u);
  EXPECT_EQ(full.stats.per_type.at("O").first, 2u);
  EXPECT_EQ(full.corpus.sentences[0].tokens[2].surface, "y");
}

TEST(TranslateCorpus, Deterministic) {
  const auto t = polysemy_table();
  BilingualDictionary d;
  d.add("green", "g1");
  d.add("green", "g2");
  const Corpus c = testing::corpus_of({{{"bank", "O"}, {"green", "O"}, {"green", "O"}}});
  EXPECT_EQ(translate_corpus(c, d, t).corpus, translate_corpus(c, d, t).corpus);
}

}  // namespace
}  // namespace xner
