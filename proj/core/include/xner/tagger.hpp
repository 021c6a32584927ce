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
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xner/corpus.hpp"
#include "xner/embeddings.hpp"
#include "xner/lstm.hpp"
#include "xner/random.hpp"
#include "xner/romanizer.hpp"

namespace xner {

/// Which token features feed the token-level Bi-LSTM.
enum class InputMode : std::uint8_t { kFull, kWordOnly, kCharOnly };

std::string_view to_string(InputMode mode);
std::optional<InputMode> parse_input_mode(std::string_view text);

struct Hyperparams {
  std::size_t word_dim = 300;
  std::size_t char_dim = 300;
  std::size_t char_hidden = 300;   // per direction
  std::size_t token_hidden = 300;  // per direction
  double dropout = 0.5;
  std::size_t epochs = 200;
  double learning_rate = 0.01;
  double decay_rate = 0.05;
  double momentum = 0.9;
  double clip = 5.0;
  std::uint64_t seed = 0;
  InputMode mode = InputMode::kFull;

  /// Throws ValidationError on out-of-range values.
  void validate() const;
  std::size_t token_input_dim() const;
  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

/// Rate used during epoch `epoch` (0-based): lr / (1 + epoch * dr).
double learning_rate_for_epoch(const Hyperparams& hyper, std::size_t epoch);

// Character inventory: blank, unknown, then printable ASCII 0x20..0x7e.
inline constexpr std::size_t kBlankChar = 0;
inline constexpr std::size_t kUnknownChar = 1;
inline constexpr std::size_t kCharInventorySize = 2 + 95;

/// Inventory indices of a romanized word; an empty word maps to [blank].
std::vector<std::size_t> char_indices(std::string_view romanized);

/// O followed by B, I, E, S for each type, in enum order.
std::vector<Label> biose_label_set(const std::set<EntityType>& types);

/// Trainable tensors. Every tensor is visited in a fixed order with a
/// stable name, which serialization, optimizer and gradient checks share.
struct TaggerParameters {
  Eigen::MatrixXd char_embeddings;  // char_dim x kCharInventorySize
  LstmParams char_forward;
  LstmParams char_backward;
  LstmParams token_forward;
  LstmParams token_backward;
  Eigen::MatrixXd projection;       // L x 2H
  Eigen::MatrixXd projection_bias;  // L x 1
  Eigen::MatrixXd transitions;      // (L+2) x (L+2)

  template <class Self, class Fn>
  static void visit(Self& self, Fn&& fn) {
    fn("char_embeddings", self.char_embeddings);
    fn("char_lstm_forward.weights", self.char_forward.weights);
    fn("char_lstm_forward.bias", self.char_forward.bias);
    fn("char_lstm_backward.weights", self.char_backward.weights);
    fn("char_lstm_backward.bias", self.char_backward.bias);
    fn("token_lstm_forward.weights", self.token_forward.weights);
    fn("token_lstm_forward.bias", self.token_forward.bias);
    fn("token_lstm_backward.weights", self.token_backward.weights);
    fn("token_lstm_backward.bias", self.token_backward.bias);
    fn("projection.weights", self.projection);
    fn("projection.bias", self.projection_bias);
    fn("transitions", self.transitions);
  }
  template <class Fn>
  void for_each(Fn&& fn) { visit(*this, fn); }
  template <class Fn>
  void for_each(Fn&& fn) const { visit(*this, fn); }

  /// Same shapes, all zeros.
  TaggerParameters zeros_like() const;
  void set_zero();
  std::size_t count() const;
};

/// Bi-LSTM-CRF tagger: frozen word vectors and a character Bi-LSTM over
/// romanized characters feed a token Bi-LSTM, a linear projection to label
/// scores, and a linear-chain CRF.
struct TaggerModel {
  Hyperparams hyper;
  std::vector<Label> labels;
  TaggerParameters params;
  /// SHA-256 of the word-embedding file the model was trained with.
  std::string embedding_hash;

  /// Every trainable value uniform in [-0.1, 0.1], drawn from hyper.seed.
  static TaggerModel initialize(const Hyperparams& hyper, std::vector<Label> labels);

  std::size_t num_labels() const { return labels.size(); }
  std::optional<std::size_t> label_index(Label label) const;
};

/// One sentence ready for the network: word vectors (frozen copies),
/// romanized character indices and gold label indices.
struct PreparedSentence {
  Eigen::MatrixXd words;                       // word_dim x T
  std::vector<std::vector<std::size_t>> chars;  // per token
  std::vector<std::size_t> gold;                // empty when unlabeled

  std::size_t size() const { return chars.size(); }
};

/// Looks up word vectors by surface (OOV vectors from `oov`) and character
/// indices by romanized surface. Gold indices are filled when every label is
/// in `labels`; otherwise `gold` stays empty.
PreparedSentence prepare_sentence(const Sentence& sentence,
                                  const std::vector<std::string>& romanized,
                                  const EmbeddingTable& table, OovStore& oov,
                                  const std::vector<Label>& labels);

std::vector<PreparedSentence> prepare_corpus(const Corpus& corpus,
                                             const RomanizedCorpus& romanized,
                                             const EmbeddingTable& table,
                                             OovStore& oov,
                                             const std::vector<Label>& labels);

/// Summary vector of one word: [final forward state; final backward state]
/// of the character Bi-LSTM, length 2 * char_hidden.
Eigen::VectorXd char_encode(const TaggerModel& model,
                            std::string_view romanized_word);

/// T x L emission scores. Dropout draws from `rng` when `training`.
Eigen::MatrixXd encode_sentence(const TaggerModel& model,
                                const PreparedSentence& sentence, bool training,
                                Rng* rng = nullptr);

/// CRF negative log-likelihood of the gold path; when `grad` is non-null
/// the parameter gradients are accumulated into it.
double loss_and_gradient(const TaggerModel& model, const PreparedSentence& sentence,
                         bool training, Rng* rng, TaggerParameters* grad);

/// Viterbi labels for one sentence (no dropout).
std::vector<Label> predict_labels(const TaggerModel& model,
                                  const PreparedSentence& sentence);

/// Copy of `corpus` (BIOSE) with predicted labels.
Corpus predict(const TaggerModel& model, const Corpus& corpus,
               const std::vector<PreparedSentence>& prepared);

/// Clamps every component to [-bound, bound].
void clip_gradients(TaggerParameters& grad, double bound);

struct EpochRecord {
  std::size_t epoch = 0;
  double learning_rate = 0.0;
  double loss = 0.0;
  double dev_f1 = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t selected_epoch = 0;
  double best_dev_f1 = 0.0;
  double momentum = 0.0;
  std::string model_checksum;

  /// One line per epoch plus a selection line.
  std::string to_log() const;
  std::string to_json() const;
};

struct TrainOptions {
  /// Stop once dev F1 reaches this value.
  std::optional<double> stop_at_dev_f1;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
  TaggerModel model;
  TrainReport report;
};

/// Per-sentence SGD with momentum, component-wise gradient clipping and a
/// decaying learning rate; returns the parameters of the best dev epoch
/// (earliest on ties). Throws NumericError on a non-finite loss.
TrainResult train(TaggerModel init, const std::vector<PreparedSentence>& train_data,
                  const Corpus& dev_gold, const std::vector<PreparedSentence>& dev_data,
                  const TrainOptions& options = {});

struct GradientCheckGroup {
  std::string name;
  std::size_t checked = 0;
  double max_relative_error = 0.0;
  double max_abs_gradient = 0.0;
};

struct GradientCheckReport {
  std::vector<GradientCheckGroup> groups;
  double max_relative_error = 0.0;
};

/// Compares backpropagated gradients with central differences
/// (f(x+eps) - f(x-eps)) / (2 eps) on up to `samples_per_group` entries of
/// every tensor. Dropout, when enabled, uses an identical mask for every
/// evaluation. Relative error is |a - n| / max(|a|, |n|, 1e-6 * max(1, |f|)),
/// where f is the unperturbed loss.
GradientCheckReport check_gradients(const TaggerModel& model,
                                    const PreparedSentence& sentence,
                                    double epsilon = 1e-5,
                                    std::size_t samples_per_group = 32,
                                    std::uint64_t seed = 0,
                                    bool with_dropout = true);

/// Self-describing binary container: magic line, JSON header (hyperparams,
/// labels, character inventory, seed, embedding hash, tensor shapes), then
/// little-endian float64 tensor data.
std::string serialize_model(const TaggerModel& model);
TaggerModel deserialize_model(std::string_view bytes);
void save_model(const std::filesystem::path& path, const TaggerModel& model);
TaggerModel load_model(const std::filesystem::path& path);

/// SHA-256 of the serialized model.
std::string model_checksum(const TaggerModel& model);

}  // namespace xner
