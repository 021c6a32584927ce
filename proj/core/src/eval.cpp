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

#include "xner/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "xner/error.hpp"

namespace xner {

namespace {

void check_alignment(const Corpus& gold, const Corpus& predicted) {
  if (gold.sentences.size() != predicted.sentences.size()) {
    throw ValidationError("gold has " + std::to_string(gold.sentences.size()) +
                          " sentences, prediction has " +
                          std::to_string(predicted.sentences.size()));
  }
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    if (gold.sentences[s].size() != predicted.sentences[s].size()) {
      throw ValidationError("sentence " + std::to_string(s) +
                            " differs in length between gold and prediction");
    }
  }
}

nlohmann::ordered_json to_json(const ScoreTriple& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
          {"gold", s.gold},           {"predicted", s.predicted},
          {"correct", s.correct}};
}

}  // namespace

ScoreTriple ScoreTriple::from_counts(std::size_t gold, std::size_t predicted,
                                     std::size_t correct) {
  ScoreTriple s;
  s.gold = gold;
  s.predicted = predicted;
  s.correct = correct;
  s.precision = predicted == 0 ? 0.0 : static_cast<double>(correct) / predicted;
  s.recall = gold == 0 ? 0.0 : static_cast<double>(correct) / gold;
  const double sum = s.precision + s.recall;
  s.f1 = sum == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / sum;
  return s;
}

ScoreTriple entity_f1(const Corpus& gold, const Corpus& predicted) {
  check_alignment(gold, predicted);
  const auto gold_spans = extract_spans(gold);
  const auto pred_spans = extract_spans(predicted);
  const std::set<EntitySpan> gold_set(gold_spans.begin(), gold_spans.end());
  std::size_t correct = 0;
  for (const auto& span : pred_spans) correct += gold_set.contains(span);
  return ScoreTriple::from_counts(gold_spans.size(), pred_spans.size(), correct);
}

LengthBuckets f1_by_length(const Corpus& gold, const Corpus& predicted) {
  check_alignment(gold, predicted);
  const auto gold_spans = extract_spans(gold);
  const auto pred_spans = extract_spans(predicted);
  const std::set<EntitySpan> gold_set(gold_spans.begin(), gold_spans.end());

  std::array<std::size_t, 3> g{}, p{}, c{};
  for (const auto& span : gold_spans) ++g[LengthBuckets::bucket_of(span.length())];
  for (const auto& span : pred_spans) {
    const auto b = LengthBuckets::bucket_of(span.length());
    ++p[b];
    if (gold_set.contains(span)) ++c[b];
  }
  LengthBuckets out;
  for (std::size_t b = 0; b < 3; ++b) {
    out.buckets[b] = ScoreTriple::from_counts(g[b], p[b], c[b]);
  }
  return out;
}

std::string format_score_report(const ScoreTriple& overall,
                                 const LengthBuckets& lengths) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  const auto row = [&](const std::string& name, const ScoreTriple& s) {
    out << std::left << std::setw(10) << name << std::right << std::setw(10)
        << 100.0 * s.precision << std::setw(10) << 100.0 * s.recall
        << std::setw(10) << 100.0 * s.f1 << std::setw(8) << s.gold
        << std::setw(8) << s.predicted << std::setw(8) << s.correct << '\n';
  };
  out << std::left << std::setw(10) << "Entities" << std::right << std::setw(10)
      << "P" << std::setw(10) << "R" << std::setw(10) << "F1" << std::setw(8)
      << "gold" << std::setw(8) << "pred" << std::setw(8) << "correct" << '\n';
  row("all", overall);
  for (std::size_t b = 0; b < 3; ++b) {
    row(std::string("len ") + LengthBuckets::kNames[b], lengths.buckets[b]);
  }
  return out.str();
}

std::string score_report_json(const ScoreTriple& overall,
                              const LengthBuckets& lengths) {
  nlohmann::ordered_json j;
  j["overall"] = to_json(overall);
  nlohmann::ordered_json by_length = nlohmann::ordered_json::object();
  for (std::size_t b = 0; b < 3; ++b) {
    by_length[LengthBuckets::kNames[b]] = to_json(lengths.buckets[b]);
  }
  j["by_length"] = by_length;
  return j.dump(2) + "\n";
}

}  // namespace xner
