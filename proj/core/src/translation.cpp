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

#include "xner/translation.hpp"

#include <algorithm>

#include "json.hpp"
#include "xner/error.hpp"
#include "xner/text.hpp"

namespace xner {

void BilingualDictionary::add(const std::string& source,
                              const std::string& target) {
  auto& list = entries_[source];
  if (std::find(list.begin(), list.end(), target) == list.end()) {
    list.push_back(target);
  }
}

const std::vector<std::string>* BilingualDictionary::candidates(
    std::string_view source) const {
  const auto it = entries_.find(std::string(source));
  return it == entries_.end() ? nullptr : &it->second;
}

BilingualDictionary load_dictionary(std::string_view content) {
  BilingualDictionary dict;
  std::size_t n = 0;
  for (std::string_view line : text::split_lines(content)) {
    ++n;
    const auto fields = text::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw ParseError("expected 'source target', found " +
                           std::to_string(fields.size()) + " fields",
                       n);
    }
    dict.add(std::string(fields[0]), std::string(fields[1]));
  }
  return dict;
}

double score_candidate(const ScoringContext& ctx, std::string_view candidate,
                       const EmbeddingTable& table) {
  const auto target = table.find(candidate);
  if (target.empty()) return kUnscorable;

  double pair_term = 0.0;
  if (const auto source = table.find(ctx.word); !source.empty()) {
    pair_term = cosine(source, target);
  }
  double context_term = 0.0;
  for (const auto& c : ctx.context) {
    const auto context = table.find(c.word);
    if (context.empty()) continue;
    const double decay = static_cast<double>(c.distance + 1);
    context_term += cosine(target, context) / (decay * decay);
  }
  return ctx.alpha * pair_term + (1.0 - ctx.alpha) * context_term;
}

std::size_t select_candidate(const ScoringContext& ctx,
                             const std::vector<std::string>& candidates,
                             const EmbeddingTable& table) {
  std::size_t best = 0;
  double best_score = kUnscorable;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double score = score_candidate(ctx, candidates[i], table);
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

Sentence translate_sentence(const Sentence& sentence,
                            const BilingualDictionary& dict,
                            const EmbeddingTable& table, double alpha) {
  Sentence out = sentence;
  const std::size_t n = sentence.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto* candidates = dict.candidates(sentence.tokens[i].surface);
    if (candidates == nullptr || candidates->empty()) continue;
    if (candidates->size() == 1) {
      out.tokens[i].surface = candidates->front();
      continue;
    }
    ScoringContext ctx{sentence.tokens[i].surface, {}, alpha};
    ctx.context.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      ctx.context.push_back({sentence.tokens[j].surface, i > j ? i - j : j - i});
    }
    out.tokens[i].surface = (*candidates)[select_candidate(ctx, *candidates, table)];
  }
  return out;
}

std::string TranslationStats::to_json() const {
  nlohmann::ordered_json j;
  j["replaced"] = replaced;
  j["kept"] = kept;
  j["total"] = replaced + kept;
  nlohmann::ordered_json types = nlohmann::ordered_json::object();
  for (const auto& [type, counts] : per_type) {
    types[type] = {{"replaced", counts.first}, {"kept", counts.second}};
  }
  j["per_type"] = types;
  return j.dump(2) + "\n";
}

TranslatedCorpus translate_corpus(const Corpus& corpus,
                                  const BilingualDictionary& dict,
                                  const EmbeddingTable& table, double alpha) {
  TranslatedCorpus result{corpus, {}};
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const Sentence& original = corpus.sentences[s];
    result.corpus.sentences[s] = translate_sentence(original, dict, table, alpha);
    for (const auto& token : original.tokens) {
      const bool replaced = dict.candidates(token.surface) != nullptr;
      auto& counts = result.stats.per_type[token.label.is_outside()
                                               ? std::string("O")
                                               : std::string(to_string(token.label.type))];
      if (replaced) {
        ++result.stats.replaced;
        ++counts.first;
      } else {
        ++result.stats.kept;
        ++counts.second;
      }
    }
  }
  return result;
}

}  // namespace xner
