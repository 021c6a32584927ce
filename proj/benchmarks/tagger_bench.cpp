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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "xner/random.hpp"
#include "xner/romanizer.hpp"
#include "xner/tagger.hpp"

namespace {

struct Fixture {
  xner::TaggerModel model;
  std::vector<xner::PreparedSentence> data;
};

Fixture make_fixture(std::size_t hidden) {
  constexpr std::size_t kDim = 50;
  xner::Rng rng(11);
  xner::EmbeddingTable table(kDim);
  std::vector<double> v(kDim);
  xner::Corpus corpus;
  xner::Sentence sentence;
  for (int i = 0; i < 20; ++i) {
    std::string word = "word" + std::to_string(i);
    for (auto& x : v) x = rng.normal();
    table.insert(word, v);
    const auto label = i % 5 == 0 ? xner::Label::make(xner::Position::kS, xner::EntityType::kPer)
                                  : xner::Label::outside();
    sentence.tokens.push_back({word, label});
  }
  corpus.sentences.push_back(sentence);
  corpus.schema = xner::Schema::kBiose;

  const auto labels = xner::biose_label_set(
      {xner::EntityType::kPer, xner::EntityType::kOrg, xner::EntityType::kLoc});
  xner::Hyperparams h;
  h.word_dim = kDim;
  h.char_dim = hidden;
  h.char_hidden = hidden;
  h.token_hidden = hidden;
  h.seed = 1;
  xner::OovStore oov(kDim, 1);
  const xner::Romanizer romanizer(xner::load_transliteration_table(""));
  return {xner::TaggerModel::initialize(h, labels),
          xner::prepare_corpus(corpus, xner::romanize_corpus(corpus, romanizer), table,
                               oov, labels)};
}

void BM_TaggerLossAndGradient(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)));
  auto grad = f.model.params.zeros_like();
  xner::Rng rng(5);
  for (auto _ : state) {
    grad.set_zero();
    benchmark::DoNotOptimize(xner::loss_and_gradient(f.model, f.data[0], true, &rng, &grad));
  }
}
BENCHMARK(BM_TaggerLossAndGradient)->Arg(16)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TaggerDecode(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(xner::predict_labels(f.model, f.data[0]));
  }
}
BENCHMARK(BM_TaggerDecode)->Arg(16)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
