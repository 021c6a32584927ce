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

#include "xner/ablation.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "xner/error.hpp"

namespace xner {

std::string_view display_name(Variant variant) {
  switch (variant) {
    case Variant::kShuffle: return "Shuffle";
    case Variant::kWordOnly: return "Word-only";
    case Variant::kCharOnly: return "Char-only";
    case Variant::kFull: break;
  }
  return "Full Model";
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::kShuffle: return "shuffle";
    case Variant::kWordOnly: return "word_only";
    case Variant::kCharOnly: return "char_only";
    case Variant::kFull: break;
  }
  return "full";
}

std::optional<Variant> parse_variant(std::string_view text) {
  for (Variant v : {Variant::kFull, Variant::kShuffle, Variant::kWordOnly,
                    Variant::kCharOnly}) {
    if (text == to_string(v)) return v;
  }
  return std::nullopt;
}

std::vector<Label> label_set_for(const std::vector<const Corpus*>& corpora) {
  std::set<EntityType> types;
  for (const Corpus* corpus : corpora) {
    for (const auto& sentence : corpus->sentences) {
      for (const auto& token : sentence.tokens) {
        if (!token.label.is_outside()) types.insert(token.label.type);
      }
    }
  }
  return biose_label_set(types);
}

namespace {

void check_resources(const PipelineResources& res) {
  if (res.embeddings == nullptr || res.romanizer == nullptr) {
    throw ValidationError("pipeline needs an embedding table and a romanizer");
  }
}

}  // namespace

TrainResult fit_tagger(const Corpus& train_corpus, const Corpus& dev,
                       const Hyperparams& hyper, const PipelineResources& res) {
  check_resources(res);
  const Corpus train_biose = convert_schema(train_corpus, Schema::kBiose);
  const Corpus dev_biose = convert_schema(dev, Schema::kBiose);
  const auto labels = label_set_for({&train_biose, &dev_biose});

  Hyperparams h = hyper;
  h.word_dim = res.embeddings->dim();
  TaggerModel model = TaggerModel::initialize(h, labels);
  model.embedding_hash = res.embedding_hash;

  OovStore oov(res.embeddings->dim(), h.seed);
  const auto train_data =
      prepare_corpus(train_biose, romanize_corpus(train_biose, *res.romanizer),
                     *res.embeddings, oov, labels);
  const auto dev_data =
      prepare_corpus(dev_biose, romanize_corpus(dev_biose, *res.romanizer),
                     *res.embeddings, oov, labels);
  return train(std::move(model), train_data, dev_biose, dev_data, res.train_options);
}

Corpus tag_corpus(const TaggerModel& model, const Corpus& corpus,
                  const PipelineResources& res) {
  check_resources(res);
  OovStore oov(res.embeddings->dim(), model.hyper.seed);
  const auto prepared =
      prepare_corpus(corpus, romanize_corpus(corpus, *res.romanizer),
                     *res.embeddings, oov, model.labels);
  return predict(model, corpus, prepared);
}

std::vector<AblationRow> run_ablation(const Corpus& train_corpus, const Corpus& dev,
                                      const Corpus& test,
                                      const std::vector<AblationConfig>& configs,
                                      const PipelineResources& res) {
  check_resources(res);
  if (res.dictionary == nullptr) throw ValidationError("ablation needs a dictionary");
  std::vector<AblationConfig> ordered = configs;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const AblationConfig& a, const AblationConfig& b) {
                     return a.variant < b.variant;
                   });

  const Corpus source = convert_schema(train_corpus, Schema::kBiose);
  const Corpus translated =
      translate_corpus(source, *res.dictionary, *res.embeddings, res.alpha).corpus;
  const Corpus test_biose = convert_schema(test, Schema::kBiose);

  std::vector<AblationRow> rows;
  for (const auto& config : ordered) {
    Hyperparams h = config.hyper;
    h.seed = config.seed;
    h.mode = config.variant == Variant::kWordOnly   ? InputMode::kWordOnly
             : config.variant == Variant::kCharOnly ? InputMode::kCharOnly
                                                    : InputMode::kFull;
    const Corpus training = config.variant == Variant::kShuffle
                                ? shuffle_ablation(translated, config.seed)
                                : translated;
    auto fitted = fit_tagger(training, dev, h, res);
    const Corpus predicted = tag_corpus(fitted.model, test_biose, res);

    AblationRow row;
    row.variant = config.variant;
    row.test = entity_f1(test_biose, predicted);
    row.selected_epoch = fitted.report.selected_epoch;
    row.dev_f1 = fitted.report.best_dev_f1;
    row.model_checksum = fitted.report.model_checksum;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_ablation_table(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(12) << "Models" << std::right << std::setw(10)
      << "P" << std::setw(10) << "R" << std::setw(10) << "F1" << '\n';
  for (const auto& row : rows) {
    out << std::left << std::setw(12) << display_name(row.variant) << std::right
        << std::setw(10) << 100.0 * row.test.precision << std::setw(10)
        << 100.0 * row.test.recall << std::setw(10) << 100.0 * row.test.f1
        << '\n';
  }
  return out.str();
}

std::string ablation_json(const std::vector<AblationRow>& rows) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    j.push_back({{"variant", to_string(row.variant)},
                 {"name", display_name(row.variant)},
                 {"precision", row.test.precision},
                 {"recall", row.test.recall},
                 {"f1", row.test.f1},
                 {"gold", row.test.gold},
                 {"predicted", row.test.predicted},
                 {"correct", row.test.correct},
                 {"selected_epoch", row.selected_epoch},
                 {"dev_f1", row.dev_f1},
                 {"model_checksum", row.model_checksum}});
  }
  return j.dump(2) + "\n";
}

}  // namespace xner
