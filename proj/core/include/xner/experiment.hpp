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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xner/ablation.hpp"
#include "xner/corpus.hpp"
#include "xner/tagger.hpp"

namespace xner {

/// Toolkit version written into provenance records.
std::string_view toolkit_version();

/// Plain-text "key = value" configuration. Blank lines and lines starting
/// with '#' are ignored; later assignments override earlier ones.
///
/// Recognized keys (see README for the full schema):
///   paths:   train dev test corpus source_embeddings target_embeddings
///            embeddings seed_dictionary dictionary romanization model
///            output_dir
///   corpus:  language token_column label_column keep_tags
///   tagger:  char_dim char_hidden token_hidden dropout epochs
///            learning_rate decay_rate momentum clip input_mode
///            stop_at_dev_f1
///   other:   seed alpha min_pairs variants placeholder
class ExperimentConfig {
 public:
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);
  static const std::vector<std::string_view>& known_keys();

  /// Sets or overrides a key; unknown keys are rejected.
  void set(std::string_view key, std::string value);
  std::optional<std::string> get(std::string_view key) const;
  bool has(std::string_view key) const { return get(key).has_value(); }
  std::string require(std::string_view key) const;
  /// Required path that must exist.
  std::filesystem::path require_path(std::string_view key) const;
  std::optional<std::filesystem::path> optional_path(std::string_view key) const;

  std::uint64_t seed() const;
  double alpha() const;
  Hyperparams hyperparams() const;
  std::set<EntityType> keep_tags() const;
  std::vector<Variant> variants() const;
  std::filesystem::path output_dir() const;

  /// Sorted "key = value" lines; the effective merged configuration.
  std::string canonical_text() const;
  std::string hash() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

/// Files written by a command, in the order they were written.
struct CommandOutput {
  std::vector<std::filesystem::path> files;
};

CommandOutput cmd_preprocess(const ExperimentConfig& config);
CommandOutput cmd_align(const ExperimentConfig& config);
CommandOutput cmd_translate(const ExperimentConfig& config);
CommandOutput cmd_train(const ExperimentConfig& config);
CommandOutput cmd_predict(const ExperimentConfig& config);
CommandOutput cmd_evaluate(const ExperimentConfig& config);
CommandOutput cmd_ablate(const ExperimentConfig& config);
CommandOutput cmd_oov_report(const ExperimentConfig& config);

/// Dispatch by command name ("preprocess", "align", ..., "oov-report").
CommandOutput run_command(std::string_view command, const ExperimentConfig& config);
const std::vector<std::string_view>& command_names();

}  // namespace xner
