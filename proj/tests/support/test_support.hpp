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
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xner/corpus.hpp"
#include "xner/random.hpp"

namespace xner::testing {

/// Labels from tag strings; aborts the test binary on a typo.
std::vector<Label> labels_of(const std::vector<std::string>& tags);

using TaggedToken = std::pair<std::string, std::string>;

/// Corpus from (surface, tag) pairs per sentence. The schema is BIOSE when
/// any S- or E- tag is present.
Corpus corpus_of(const std::vector<std::vector<TaggedToken>>& sentences);

/// Path enumeration over all L^T label sequences.
struct CrfEnumeration {
  double log_partition = 0.0;
  double best_score = 0.0;
  std::vector<std::size_t> best_path;
  std::vector<std::vector<std::size_t>> paths;
  std::vector<double> scores;
};
CrfEnumeration enumerate_crf(const Eigen::MatrixXd& emissions,
                             const Eigen::MatrixXd& transitions);

Eigen::MatrixXd random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-distributed orthogonal matrix (QR of a Gaussian with sign fix).
Eigen::MatrixXd random_orthogonal(Eigen::Index dim, Rng& rng);

/// Random valid BIO sequence of length `n` over PER/ORG/LOC/MISC.
std::vector<Label> random_bio(Rng& rng, std::size_t n);

/// Random BIOSE sequence that may contain stray I-/E- tags.
std::vector<Label> random_biose_noisy(Rng& rng, std::size_t n);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Twenty short sentences whose surfaces reveal their labels.
Corpus overfit_corpus();

/// Two synthetic languages over a shared latent space.
///
/// Source vectors are z + noise; target vectors are R z + noise for a
/// planted rotation R, with two target synonyms per concept. Training
/// sentences are in the source language; dev and test are in the target
/// language and use the synonym the bilingual dictionary does not list.
/// Half of the sentences carry two names of different types whose type is
/// given only by the word right before them; in the rest a name's type is
/// given only by its suffix.
struct TransferFiles {
  std::filesystem::path source_embeddings;
  std::filesystem::path target_embeddings;
  std::filesystem::path seed_dictionary;
  std::filesystem::path dictionary;
  std::filesystem::path train;
  std::filesystem::path dev;
  std::filesystem::path test;
  Eigen::MatrixXd rotation;
};

struct TransferOptions {
  std::size_t dim = 16;
  std::size_t train_sentences = 200;
  std::size_t dev_sentences = 40;
  std::size_t test_sentences = 120;
  double source_noise = 0.05;
  double target_noise = 0.1;
};

TransferFiles write_transfer_benchmark(const std::filesystem::path& dir,
                                       std::uint64_t seed,
                                       const TransferOptions& options = {});

/// Path of a file under the repository's romanization data directory.
std::filesystem::path romanization_table(const std::string& language);

}  // namespace xner::testing
