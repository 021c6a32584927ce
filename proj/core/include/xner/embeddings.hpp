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

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xner/corpus.hpp"

namespace xner {

/// Word -> dense vector store. Entries keep insertion order; keys are unique
/// and every vector has length `dim()`.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  bool contains(std::string_view word) const;
  /// Row for `word`, or an empty span when absent.
  std::span<const double> find(std::string_view word) const;
  std::span<const double> row(std::size_t index) const;
  const std::string& word(std::size_t index) const { return words_[index]; }
  const std::vector<std::string>& words() const { return words_; }

  /// Adds `word` unless already present; returns false on duplicate.
  bool insert(std::string word, std::span<const double> vector);

  /// Overwrites the vector of entry `index`.
  void set_row(std::size_t index, std::span<const double> vector);

  /// Row-major copy as a (size x dim) matrix.
  Eigen::MatrixXd to_matrix() const;

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.dim_ == b.dim_ && a.words_ == b.words_ && a.data_ == b.data_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Text vector format: optional "count dim" header, then "word v1 ... vd"
/// per line. First occurrence of a word wins.
EmbeddingTable load_embeddings(std::string_view text);

/// Writes the same format with a header and shortest round-trip reals.
std::string write_embeddings(const EmbeddingTable& table);

struct NormalizedTable {
  EmbeddingTable table;
  std::size_t dropped = 0;  // zero vectors before or after centering
};

/// Unit-norm, mean-center, unit-norm. Tables with fewer than two usable
/// entries are rejected.
NormalizedTable normalize_table(const EmbeddingTable& table);

/// dim x dim matrix with W^T W = I.
struct OrthogonalMap {
  Eigen::MatrixXd matrix;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
  OrthogonalMap transpose() const { return {matrix.transpose()}; }
  /// max |W^T W - I|.
  double orthogonality_error() const;
};

/// Ordered (source word, target word) supervision pairs.
struct SeedDictionary {
  std::vector<std::pair<std::string, std::string>> pairs;
};

/// One pair per line, separated by a tab or spaces.
SeedDictionary load_seed_dictionary(std::string_view text);

struct AlignmentResult {
  OrthogonalMap map;
  std::size_t pairs_used = 0;
};

/// Orthogonal Procrustes: W minimizing sum ||W x_i - y_i||^2 over the seed
/// pairs (x from `source`, y from `target`), W = U V^T from the SVD of
/// Y X^T. Pairs with a word missing from either table are skipped.
/// `min_pairs` of 0 means `source.dim()`.
AlignmentResult procrustes_align(const EmbeddingTable& source,
                                 const EmbeddingTable& target,
                                 const SeedDictionary& seeds,
                                 std::size_t min_pairs = 0);

/// Replaces every vector v by W v.
EmbeddingTable apply_alignment(const EmbeddingTable& table,
                               const OrthogonalMap& map);

struct MergedTable {
  EmbeddingTable table;
  std::size_t collisions = 0;
};

/// Union of both tables; `a` wins on key collision.
MergedTable merge_tables(const EmbeddingTable& a, const EmbeddingTable& b);

/// u.v / (|u||v|); 0 when either norm is 0.
double cosine(std::span<const double> u, std::span<const double> v);

/// Word of `table` whose vector has the highest cosine with `query`
/// (earliest entry on ties).
std::string nearest_word(const EmbeddingTable& table,
                         std::span<const double> query);

/// Lookup with per-run random vectors for out-of-vocabulary words.
///
/// OOV vectors are drawn uniformly from [-0.1, 0.1] by a generator seeded
/// from (run seed, word), so the value for a word does not depend on which
/// other words were looked up before it. Thread-safe.
class OovStore {
 public:
  OovStore(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {}

  OovStore(const OovStore&) = delete;
  OovStore& operator=(const OovStore&) = delete;

  std::vector<double> vector_for(std::string_view word);
  std::size_t size() const;
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::vector<double>> cache_;
};

/// Stored vector for in-vocabulary words, cached OOV vector otherwise.
std::vector<double> lookup(const EmbeddingTable& table, std::string_view word,
                           OovStore& oov);

struct OovReport {
  double type_rate = 0.0;   // percent of distinct surfaces missing
  double token_rate = 0.0;  // percent of token occurrences missing
  std::size_t types = 0;
  std::size_t oov_types = 0;
  std::size_t tokens = 0;
  std::size_t oov_tokens = 0;
};

OovReport oov_rate(const Corpus& corpus, const EmbeddingTable& table);

/// "Type  Token" two-column text.
std::string format_oov_report(const OovReport& report);
/// JSON record.
std::string oov_report_json(const OovReport& report);

}  // namespace xner
