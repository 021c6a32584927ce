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
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xner/corpus.hpp"
#include "xner/embeddings.hpp"

namespace xner {

/// Source word -> ordered, duplicate-free list of target candidates.
class BilingualDictionary {
 public:
  /// Appends `target` to the candidates of `source` unless already listed.
  void add(const std::string& source, const std::string& target);

  /// Candidates in file order, or nullptr when `source` has no entry.
  const std::vector<std::string>* candidates(std::string_view source) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
};

/// "source<sep>target" per line, sep = tab or spaces. Repeated sources
/// accumulate candidates in file order.
BilingualDictionary load_dictionary(std::string_view text);

struct ContextWord {
  std::string word;
  std::size_t distance = 1;  // >= 1
};

struct ScoringContext {
  std::string word;
  std::vector<ContextWord> context;
  double alpha = 0.5;
};

inline constexpr double kUnscorable = -std::numeric_limits<double>::infinity();

/// Context-weighted translation score of `candidate` for `ctx.word`:
///
///   alpha * cos(E(w), E(t)) + (1 - alpha) * sum_j cos(E(t), E(c_j)) / (d_j + 1)^2
///
/// Context words without an embedding contribute nothing. A candidate
/// without an embedding scores kUnscorable. If the source word itself has
/// no embedding its cosine term is 0.
double score_candidate(const ScoringContext& ctx, std::string_view candidate,
                       const EmbeddingTable& table);

/// Index of the best-scoring candidate; earliest wins ties, and the first
/// candidate is used when none has an embedding.
std::size_t select_candidate(const ScoringContext& ctx,
                             const std::vector<std::string>& candidates,
                             const EmbeddingTable& table);

/// Replaces every token that has a dictionary entry by its best candidate.
/// Context is every other token of the sentence (original surfaces) at its
/// absolute index distance. Labels are copied unchanged.
Sentence translate_sentence(const Sentence& sentence,
                            const BilingualDictionary& dict,
                            const EmbeddingTable& table, double alpha = 0.5);

struct TranslationStats {
  std::size_t replaced = 0;
  std::size_t kept = 0;
  /// Entity type name ("O" for outside tokens) -> {replaced, kept}.
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_type;

  std::string to_json() const;
};

struct TranslatedCorpus {
  Corpus corpus;
  TranslationStats stats;
};

TranslatedCorpus translate_corpus(const Corpus& corpus,
                                  const BilingualDictionary& dict,
                                  const EmbeddingTable& table,
                                  double alpha = 0.5);

}  // namespace xner
