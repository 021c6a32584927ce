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

#include "xner/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "xner/crf.hpp"
#include "xner/error.hpp"
#include "xner/eval.hpp"
#include "xner/text.hpp"

namespace xner {

std::string_view to_string(InputMode mode) {
  switch (mode) {
    case InputMode::kWordOnly: return "word_only";
    case InputMode::kCharOnly: return "char_only";
    case InputMode::kFull: break;
  }
  return "full";
}

std::optional<InputMode> parse_input_mode(std::string_view text) {
  if (text == "full") return InputMode::kFull;
  if (text == "word_only") return InputMode::kWordOnly;
  if (text == "char_only") return InputMode::kCharOnly;
  return std::nullopt;
}

void Hyperparams::validate() const {
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ValidationError("dropout must lie in [0, 1)");
  }
  if (!(clip > 0.0)) throw ValidationError("gradient clip bound must be positive");
  if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (!(decay_rate >= 0.0)) throw ValidationError("decay rate must be non-negative");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ValidationError("momentum must lie in [0, 1)");
  }
  if (char_dim == 0 || char_hidden == 0 || token_hidden == 0 || word_dim == 0) {
    throw ValidationError("layer sizes must be positive");
  }
}

std::size_t Hyperparams::token_input_dim() const {
  switch (mode) {
    case InputMode::kWordOnly: return word_dim;
    case InputMode::kCharOnly: return 2 * char_hidden;
    case InputMode::kFull: break;
  }
  return word_dim + 2 * char_hidden;
}

double learning_rate_for_epoch(const Hyperparams& hyper, std::size_t epoch) {
  return hyper.learning_rate /
         (1.0 + static_cast<double>(epoch) * hyper.decay_rate);
}

std::vector<std::size_t> char_indices(std::string_view romanized) {
  if (romanized.empty()) return {kBlankChar};
  std::vector<std::size_t> out;
  out.reserve(romanized.size());
  for (char c : romanized) {
    const auto u = static_cast<unsigned char>(c);
    out.push_back(u >= 0x20 && u <= 0x7e ? 2 + (u - 0x20) : kUnknownChar);
  }
  return out;
}

std::vector<Label> biose_label_set(const std::set<EntityType>& types) {
  std::vector<Label> labels{Label::outside()};
  for (EntityType t : {EntityType::kPer, EntityType::kOrg, EntityType::kLoc,
                       EntityType::kMisc}) {
    if (!types.contains(t)) continue;
    for (Position p : {Position::kB, Position::kI, Position::kE, Position::kS}) {
      labels.push_back(Label::make(p, t));
    }
  }
  return labels;
}

TaggerParameters TaggerParameters::zeros_like() const {
  TaggerParameters out = *this;
  out.set_zero();
  return out;
}

void TaggerParameters::set_zero() {
  for_each([](std::string_view, Eigen::MatrixXd& m) { m.setZero(); });
}

std::size_t TaggerParameters::count() const {
  std::size_t n = 0;
  for_each([&](std::string_view, const Eigen::MatrixXd& m) {
    n += static_cast<std::size_t>(m.size());
  });
  return n;
}

TaggerModel TaggerModel::initialize(const Hyperparams& hyper,
                                    std::vector<Label> labels) {
  hyper.validate();
  if (labels.empty()) throw ValidationError("label set is empty");
  TaggerModel model;
  model.hyper = hyper;
  model.labels = std::move(labels);

  const auto L = static_cast<Eigen::Index>(model.labels.size());
  const auto H = static_cast<Eigen::Index>(hyper.token_hidden);
  auto& p = model.params;
  p.char_embeddings.resize(static_cast<Eigen::Index>(hyper.char_dim),
                           static_cast<Eigen::Index>(kCharInventorySize));
  p.char_forward = LstmParams::zeros(hyper.char_dim, hyper.char_hidden);
  p.char_backward = LstmParams::zeros(hyper.char_dim, hyper.char_hidden);
  p.token_forward = LstmParams::zeros(hyper.token_input_dim(), hyper.token_hidden);
  p.token_backward = LstmParams::zeros(hyper.token_input_dim(), hyper.token_hidden);
  p.projection.resize(L, 2 * H);
  p.projection_bias.resize(L, 1);
  p.transitions.resize(L + 2, L + 2);

  Rng rng(mix_seed(hyper.seed, 0));
  p.for_each([&](std::string_view, Eigen::MatrixXd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-0.1, 0.1);
    }
  });
  return model;
}

std::optional<std::size_t> TaggerModel::label_index(Label label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

PreparedSentence prepare_sentence(const Sentence& sentence,
                                  const std::vector<std::string>& romanized,
                                  const EmbeddingTable& table, OovStore& oov,
                                  const std::vector<Label>& labels) {
  if (romanized.size() != sentence.size()) {
    throw ValidationError("romanized surfaces do not match sentence length");
  }
  if (oov.dim() != table.dim()) {
    throw ValidationError("OOV store and embedding table differ in dimension");
  }
  const auto T = static_cast<Eigen::Index>(sentence.size());
  PreparedSentence out;
  out.words.resize(static_cast<Eigen::Index>(table.dim()), T);
  out.chars.reserve(sentence.size());
  bool all_known = true;
  std::vector<std::size_t> gold;
  for (Eigen::Index t = 0; t < T; ++t) {
    const auto& token = sentence.tokens[t];
    const auto v = lookup(table, token.surface, oov);
    out.words.col(t) = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    out.chars.push_back(char_indices(romanized[t]));
    const auto it = std::find(labels.begin(), labels.end(), token.label);
    if (it == labels.end()) {
      all_known = false;
    } else {
      gold.push_back(static_cast<std::size_t>(it - labels.begin()));
    }
  }
  if (all_known) out.gold = std::move(gold);
  return out;
}

std::vector<PreparedSentence> prepare_corpus(const Corpus& corpus,
                                             const RomanizedCorpus& romanized,
                                             const EmbeddingTable& table,
                                             OovStore& oov,
                                             const std::vector<Label>& labels) {
  if (romanized.size() != corpus.sentences.size()) {
    throw ValidationError("romanized corpus does not match corpus");
  }
  std::vector<PreparedSentence> out;
  out.reserve(corpus.sentences.size());
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    out.push_back(prepare_sentence(corpus.sentences[s], romanized[s], table, oov,
                                   labels));
  }
  return out;
}

namespace {

struct CharTrace {
  Eigen::MatrixXd inputs;  // char_dim x n
  LstmTrace forward;
  LstmTrace backward;
};

struct ForwardPass {
  std::vector<CharTrace> chars;
  Eigen::MatrixXd char_mask;  // 2Hc x T
  Eigen::MatrixXd token_in;   // input_dim x T
  LstmTrace token_forward;
  LstmTrace token_backward;
  Eigen::MatrixXd token_mask;  // 2H x T
  Eigen::MatrixXd token_out;   // 2H x T after dropout
  Eigen::MatrixXd emissions;   // T x L
};

Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                             bool training, Rng* rng) {
  if (!training || rate == 0.0) return Eigen::MatrixXd::Ones(rows, cols);
  if (rng == nullptr) throw ValidationError("training-mode dropout needs an Rng");
  const double keep_scale = 1.0 / (1.0 - rate);
  Eigen::MatrixXd mask(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      mask(i, j) = rng->uniform() >= rate ? keep_scale : 0.0;
    }
  }
  return mask;
}

CharTrace run_char_lstm(const TaggerModel& model,
                        const std::vector<std::size_t>& chars) {
  const auto& p = model.params;
  CharTrace trace;
  trace.inputs.resize(p.char_embeddings.rows(), static_cast<Eigen::Index>(chars.size()));
  for (std::size_t k = 0; k < chars.size(); ++k) {
    trace.inputs.col(static_cast<Eigen::Index>(k)) =
        p.char_embeddings.col(static_cast<Eigen::Index>(chars[k]));
  }
  trace.forward = lstm_forward(p.char_forward, trace.inputs, false);
  trace.backward = lstm_forward(p.char_backward, trace.inputs, true);
  return trace;
}

ForwardPass run_forward(const TaggerModel& model, const PreparedSentence& s,
                        bool training, Rng* rng) {
  const auto& hp = model.hyper;
  const auto& p = model.params;
  const auto T = static_cast<Eigen::Index>(s.size());
  if (T == 0) throw ValidationError("cannot encode an empty sentence");
  const bool use_words = hp.mode != InputMode::kCharOnly;
  const bool use_chars = hp.mode != InputMode::kWordOnly;
  const auto Hc = static_cast<Eigen::Index>(hp.char_hidden);
  const auto H = static_cast<Eigen::Index>(hp.token_hidden);
  const auto word_dim = static_cast<Eigen::Index>(hp.word_dim);
  if (use_words && (s.words.rows() != word_dim || s.words.cols() != T)) {
    throw ValidationError("word vectors have dimension " +
                          std::to_string(s.words.rows()) + ", model expects " +
                          std::to_string(word_dim));
  }

  ForwardPass f;
  f.token_in.resize(static_cast<Eigen::Index>(hp.token_input_dim()), T);
  if (use_words) f.token_in.topRows(word_dim) = s.words;
  if (use_chars) {
    Eigen::MatrixXd char_out(2 * Hc, T);
    f.chars.reserve(s.size());
    for (Eigen::Index t = 0; t < T; ++t) {
      f.chars.push_back(run_char_lstm(model, s.chars[t]));
      const auto& c = f.chars.back();
      char_out.col(t).head(Hc) = c.forward.hidden.col(c.forward.last());
      char_out.col(t).tail(Hc) = c.backward.hidden.col(c.backward.last());
    }
    f.char_mask = dropout_mask(2 * Hc, T, hp.dropout, training, rng);
    f.token_in.bottomRows(2 * Hc) = char_out.cwiseProduct(f.char_mask);
  }

  f.token_forward = lstm_forward(p.token_forward, f.token_in, false);
  f.token_backward = lstm_forward(p.token_backward, f.token_in, true);
  Eigen::MatrixXd token_raw(2 * H, T);
  token_raw.topRows(H) = f.token_forward.hidden;
  token_raw.bottomRows(H) = f.token_backward.hidden;
  f.token_mask = dropout_mask(2 * H, T, hp.dropout, training, rng);
  f.token_out = token_raw.cwiseProduct(f.token_mask);

  Eigen::MatrixXd scores = p.projection * f.token_out;
  scores.colwise() += p.projection_bias.col(0);
  f.emissions = scores.transpose();
  return f;
}

void run_backward(const TaggerModel& model, const PreparedSentence& s,
                  const ForwardPass& f, const Eigen::MatrixXd& d_emissions,
                  TaggerParameters& grad) {
  const auto& hp = model.hyper;
  const auto& p = model.params;
  const bool use_chars = hp.mode != InputMode::kWordOnly;
  const auto Hc = static_cast<Eigen::Index>(hp.char_hidden);
  const auto H = static_cast<Eigen::Index>(hp.token_hidden);
  const Eigen::MatrixXd d_scores = d_emissions.transpose();  // L x T

  grad.projection.noalias() += d_scores * f.token_out.transpose();
  grad.projection_bias.col(0) += d_scores.rowwise().sum();

  const Eigen::MatrixXd d_token_raw =
      (p.projection.transpose() * d_scores).cwiseProduct(f.token_mask);
  Eigen::MatrixXd d_in = lstm_backward(p.token_forward, f.token_forward,
                                       d_token_raw.topRows(H), grad.token_forward);
  d_in += lstm_backward(p.token_backward, f.token_backward,
                        d_token_raw.bottomRows(H), grad.token_backward);
  if (!use_chars) return;

  const Eigen::MatrixXd d_char =
      d_in.bottomRows(2 * Hc).cwiseProduct(f.char_mask);
  for (std::size_t t = 0; t < s.size(); ++t) {
    const auto& c = f.chars[t];
    const auto col = static_cast<Eigen::Index>(t);
    const Eigen::Index n = c.inputs.cols();
    Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(Hc, n);
    dh.col(c.forward.last()) = d_char.col(col).head(Hc);
    Eigen::MatrixXd dx = lstm_backward(p.char_forward, c.forward, dh, grad.char_forward);
    dh.setZero();
    dh.col(c.backward.last()) = d_char.col(col).tail(Hc);
    dx += lstm_backward(p.char_backward, c.backward, dh, grad.char_backward);
    for (Eigen::Index k = 0; k < n; ++k) {
      grad.char_embeddings.col(static_cast<Eigen::Index>(s.chars[t][k])) += dx.col(k);
    }
  }
}

std::vector<Eigen::MatrixXd*> tensors_of(TaggerParameters& p) {
  std::vector<Eigen::MatrixXd*> out;
  p.for_each([&](std::string_view, Eigen::MatrixXd& m) { out.push_back(&m); });
  return out;
}

double dev_f1(const TaggerModel& model, const Corpus& dev_gold,
              const std::vector<PreparedSentence>& dev_data) {
  return entity_f1(dev_gold, predict(model, dev_gold, dev_data)).f1;
}

}  // namespace

Eigen::VectorXd char_encode(const TaggerModel& model,
                            std::string_view romanized_word) {
  const auto trace = run_char_lstm(model, char_indices(romanized_word));
  const auto Hc = static_cast<Eigen::Index>(model.hyper.char_hidden);
  Eigen::VectorXd out(2 * Hc);
  out.head(Hc) = trace.forward.hidden.col(trace.forward.last());
  out.tail(Hc) = trace.backward.hidden.col(trace.backward.last());
  return out;
}

Eigen::MatrixXd encode_sentence(const TaggerModel& model,
                                const PreparedSentence& sentence, bool training,
                                Rng* rng) {
  return run_forward(model, sentence, training, rng).emissions;
}

double loss_and_gradient(const TaggerModel& model, const PreparedSentence& sentence,
                         bool training, Rng* rng, TaggerParameters* grad) {
  if (sentence.gold.size() != sentence.size()) {
    throw ValidationError("sentence has labels outside the model's label set");
  }
  const ForwardPass f = run_forward(model, sentence, training, rng);
  if (grad == nullptr) {
    return crf::neg_log_likelihood(f.emissions, model.params.transitions,
                                   sentence.gold);
  }
  auto crf_grad = crf::neg_log_likelihood_gradients(
      f.emissions, model.params.transitions, sentence.gold);
  grad->transitions += crf_grad.transitions;
  run_backward(model, sentence, f, crf_grad.emissions, *grad);
  return crf_grad.loss;
}

std::vector<Label> predict_labels(const TaggerModel& model,
                                  const PreparedSentence& sentence) {
  const auto emissions = encode_sentence(model, sentence, false);
  const auto path = crf::viterbi_decode(emissions, model.params.transitions);
  std::vector<Label> out;
  out.reserve(path.size());
  for (std::size_t y : path) out.push_back(model.labels[y]);
  return out;
}

Corpus predict(const TaggerModel& model, const Corpus& corpus,
               const std::vector<PreparedSentence>& prepared) {
  if (prepared.size() != corpus.sentences.size()) {
    throw ValidationError("prepared sentences do not match corpus");
  }
  Corpus out = corpus;
  out.schema = Schema::kBiose;
  for (std::size_t s = 0; s < prepared.size(); ++s) {
    out.sentences[s].set_labels(predict_labels(model, prepared[s]));
  }
  return out;
}

void clip_gradients(TaggerParameters& grad, double bound) {
  grad.for_each([bound](std::string_view, Eigen::MatrixXd& m) {
    m = m.cwiseMax(-bound).cwiseMin(bound);
  });
}

std::string TrainReport::to_log() const {
  std::ostringstream out;
  for (const auto& e : epochs) {
    out << "epoch " << e.epoch << " lr " << text::format_double(e.learning_rate)
        << " loss " << text::format_double(e.loss) << " dev_f1 "
        << text::format_double(e.dev_f1) << '\n';
  }
  out << "selected_epoch " << selected_epoch << " dev_f1 "
      << text::format_double(best_dev_f1) << " checksum " << model_checksum
      << '\n';
  return out.str();
}

std::string TrainReport::to_json() const {
  nlohmann::ordered_json j;
  j["selected_epoch"] = selected_epoch;
  j["best_dev_f1"] = best_dev_f1;
  j["momentum"] = momentum;
  j["epochs_run"] = epochs.size();
  j["model_checksum"] = model_checksum;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& e : epochs) {
    rows.push_back({{"epoch", e.epoch},
                    {"learning_rate", e.learning_rate},
                    {"loss", e.loss},
                    {"dev_f1", e.dev_f1}});
  }
  j["epochs"] = rows;
  return j.dump(2) + "\n";
}

TrainResult train(TaggerModel init, const std::vector<PreparedSentence>& train_data,
                  const Corpus& dev_gold, const std::vector<PreparedSentence>& dev_data,
                  const TrainOptions& options) {
  const Hyperparams hp = init.hyper;
  hp.validate();
  if (dev_gold.sentences.empty()) throw ValidationError("dev corpus is empty");
  if (train_data.empty()) throw ValidationError("training corpus is empty");
  for (std::size_t s = 0; s < train_data.size(); ++s) {
    if (train_data[s].gold.size() != train_data[s].size()) {
      throw ValidationError("training sentence " + std::to_string(s) +
                            " has labels outside the label set");
    }
  }

  TaggerModel model = std::move(init);
  TaggerParameters grad = model.params.zeros_like();
  TaggerParameters velocity = model.params.zeros_like();
  const auto params = tensors_of(model.params);
  const auto grads = tensors_of(grad);
  const auto velocities = tensors_of(velocity);

  Rng order_rng(mix_seed(hp.seed, 1));
  Rng dropout_rng(mix_seed(hp.seed, 2));
  std::vector<std::size_t> order(train_data.size());
  std::iota(order.begin(), order.end(), 0);

  TrainReport report;
  report.momentum = hp.momentum;
  TaggerParameters best = model.params;
  double best_f1 = -1.0;

  for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
    const double lr = learning_rate_for_epoch(hp, epoch);
    order_rng.shuffle(order.begin(), order.end());
    double epoch_loss = 0.0;
    for (std::size_t index : order) {
      grad.set_zero();
      const double loss =
          loss_and_gradient(model, train_data[index], true, &dropout_rng, &grad);
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                           ", sentence " + std::to_string(index));
      }
      epoch_loss += loss;
      for (std::size_t k = 0; k < params.size(); ++k) {
        *grads[k] = grads[k]->cwiseMax(-hp.clip).cwiseMin(hp.clip);
        *velocities[k] = hp.momentum * *velocities[k] + *grads[k];
        *params[k] -= lr * *velocities[k];
      }
    }

    EpochRecord record{epoch, lr, epoch_loss, dev_f1(model, dev_gold, dev_data)};
    report.epochs.push_back(record);
    if (record.dev_f1 > best_f1) {
      best_f1 = record.dev_f1;
      best = model.params;
      report.selected_epoch = epoch;
    }
    if (options.on_epoch) options.on_epoch(record);
    if (options.stop_at_dev_f1 && record.dev_f1 >= *options.stop_at_dev_f1) break;
  }

  model.params = std::move(best);
  report.best_dev_f1 = std::max(best_f1, 0.0);
  report.model_checksum = model_checksum(model);
  return {std::move(model), std::move(report)};
}

GradientCheckReport check_gradients(const TaggerModel& model,
                                    const PreparedSentence& sentence,
                                    double epsilon, std::size_t samples_per_group,
                                    std::uint64_t seed, bool with_dropout) {
  TaggerModel probe = model;
  TaggerParameters analytic = model.params.zeros_like();
  double base_loss = 0.0;
  {
    Rng rng(seed);
    base_loss = loss_and_gradient(probe, sentence, with_dropout, &rng, &analytic);
  }
  // A difference quotient cannot resolve gradients much below u * |f| / eps.
  const double floor = 1e-6 * std::max(1.0, std::abs(base_loss));
  const auto loss_at = [&] {
    Rng rng(seed);
    return loss_and_gradient(probe, sentence, with_dropout, &rng, nullptr);
  };

  std::vector<std::pair<std::string, Eigen::MatrixXd*>> tensors;
  probe.params.for_each([&](std::string_view name, Eigen::MatrixXd& m) {
    tensors.emplace_back(std::string(name), &m);
  });
  const auto analytic_tensors = tensors_of(analytic);

  GradientCheckReport report;
  Rng sampler(mix_seed(seed, 7));
  for (std::size_t g = 0; g < tensors.size(); ++g) {
    auto& [name, tensor] = tensors[g];
    std::vector<Eigen::Index> indices(static_cast<std::size_t>(tensor->size()));
    std::iota(indices.begin(), indices.end(), 0);
    sampler.shuffle(indices.begin(), indices.end());
    if (indices.size() > samples_per_group) indices.resize(samples_per_group);
    std::sort(indices.begin(), indices.end());

    GradientCheckGroup group{name, indices.size(), 0.0, 0.0};
    for (Eigen::Index k : indices) {
      double& value = tensor->data()[k];
      const double original = value;
      value = original + epsilon;
      const double plus = loss_at();
      value = original - epsilon;
      const double minus = loss_at();
      value = original;
      const double numeric = (plus - minus) / (2.0 * epsilon);
      const double a = analytic_tensors[g]->data()[k];
      const double denom = std::max({std::abs(a), std::abs(numeric), floor});
      group.max_relative_error =
          std::max(group.max_relative_error, std::abs(a - numeric) / denom);
      group.max_abs_gradient = std::max(group.max_abs_gradient, std::abs(a));
    }
    report.max_relative_error =
        std::max(report.max_relative_error, group.max_relative_error);
    report.groups.push_back(std::move(group));
  }
  return report;
}

}  // namespace xner
