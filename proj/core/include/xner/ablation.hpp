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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xner/corpus.hpp"
#include "xner/embeddings.hpp"
#include "xner/eval.hpp"
#include "xner/romanizer.hpp"
#include "xner/tagger.hpp"
#include "xner/translation.hpp"

namespace xner {

enum class Variant : std::uint8_t { kFull, kShuffle, kWordOnly, kCharOnly };

/// "Full Model", "Shuffle", "Word-only", "Char-only".
std::string_view display_name(Variant variant);
/// "full", "shuffle", "word_only", "char_only".
std::string_view to_string(Variant variant);
std::optional<Variant> parse_variant(std::string_view text);

struct AblationConfig {
  Variant variant = Variant::kFull;
  std::uint64_t seed = 0;
  Hyperparams hyper;
};

/// Everything a pipeline run needs besides the corpora.
struct PipelineResources {
  const EmbeddingTable* embeddings = nullptr;  // merged bilingual table
  const BilingualDictionary* dictionary = nullptr;
  const Romanizer* romanizer = nullptr;
  double alpha = 0.5;
  std::string embedding_hash;
  TrainOptions train_options;
};

/// Types occurring in any of the corpora, as a BIOSE label set.
std::vector<Label> label_set_for(const std::vector<const Corpus*>& corpora);

/// Trains a tagger on already-prepared (translated, BIOSE) corpora.
TrainResult fit_tagger(const Corpus& train, const Corpus& dev,
                       const Hyperparams& hyper, const PipelineResources& res);

/// Predicted copy of `corpus` using the model's seed for OOV vectors.
Corpus tag_corpus(const TaggerModel& model, const Corpus& corpus,
                  const PipelineResources& res);

struct AblationRow {
  Variant variant = Variant::kFull;
  ScoreTriple test;
  std::size_t selected_epoch = 0;
  double dev_f1 = 0.0;
  std::string model_checksum;
};

/// For each config: translate the training corpus, shuffle it for the
/// Shuffle variant, train with the variant's input mode and score on the
/// untouched test corpus. Rows come back in the fixed order Full Model,
/// Shuffle, Word-only, Char-only.
std::vector<AblationRow> run_ablation(const Corpus& train, const Corpus& dev,
                                      const Corpus& test,
                                      const std::vector<AblationConfig>& configs,
                                      const PipelineResources& res);

std::string format_ablation_table(const std::vector<AblationRow>& rows);
std::string ablation_json(const std::vector<AblationRow>& rows);

}  // namespace xner
