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

#include "xner/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

#include "json.hpp"
#include "xner/embeddings.hpp"
#include "xner/error.hpp"
#include "xner/eval.hpp"
#include "xner/hash.hpp"
#include "xner/romanizer.hpp"
#include "xner/text.hpp"
#include "xner/translation.hpp"

#ifndef XNER_VERSION_STRING
#define XNER_VERSION_STRING "0.0.0"
#endif

namespace xner {

namespace fs = std::filesystem;

std::string_view toolkit_version() { return XNER_VERSION_STRING; }

namespace {

const std::vector<std::string_view> kPathKeys = {
    "train",     "dev",       "test",         "corpus",     "source_embeddings",
    "target_embeddings", "embeddings", "seed_dictionary", "dictionary",
    "romanization", "model"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto r = std::from_chars(value.data(), value.data() + value.size(), out);
  if (r.ec != std::errc() || r.ptr != value.data() + value.size()) {
    throw ValidationError("config key '" + std::string(key) +
                          "' expects a non-negative integer, got '" +
                          std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0;
  if (!text::parse_double(value, out)) {
    throw ValidationError("config key '" + std::string(key) +
                          "' expects a real number, got '" + std::string(value) +
                          "'");
  }
  return out;
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto item = trim(value.substr(
        start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Corpus load_corpus(const ExperimentConfig& config, std::string_view key) {
  const fs::path path = config.require_path(key);
  const std::size_t token_column =
      config.has("token_column")
          ? parse_unsigned("token_column", *config.get("token_column"))
          : 0;
  const std::size_t label_column =
      config.has("label_column")
          ? parse_unsigned("label_column", *config.get("label_column"))
          : std::size_t(-1);
  try {
    return parse_conll(read_file(path), token_column, label_column,
                       config.get("language").value_or(""));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

Corpus load_biose(const ExperimentConfig& config, std::string_view key) {
  Corpus corpus = convert_schema(load_corpus(config, key), Schema::kBiose);
  if (corpus.sentences.empty()) {
    throw ValidationError("corpus '" + std::string(key) + "' has no sentences");
  }
  return corpus;
}

EmbeddingTable load_table(const ExperimentConfig& config, std::string_view key) {
  const fs::path path = config.require_path(key);
  try {
    return load_embeddings(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

Romanizer load_romanizer(const ExperimentConfig& config) {
  TransliterationTable table;
  if (const auto path = config.optional_path("romanization")) {
    table = load_transliteration_table(read_file(*path), path->stem().string());
  }
  return Romanizer(std::move(table), config.get("placeholder").value_or(""));
}

// Provenance: command, version, effective config and its hash, the content
// hash of every path-valued input that exists, and the seed.
fs::path write_provenance(const ExperimentConfig& config, std::string_view command) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["toolkit_version"] = toolkit_version();
  j["config_sha256"] = config.hash();
  j["seed"] = config.seed();
  auto inputs = nlohmann::ordered_json::object();
  std::vector<std::string_view> keys = kPathKeys;
  std::sort(keys.begin(), keys.end());
  for (std::string_view key : keys) {
    const auto value = config.get(key);
    if (value && fs::is_regular_file(*value)) inputs[std::string(key)] = sha256_file(*value);
  }
  j["inputs"] = inputs;
  j["config"] = config.canonical_text();
  const fs::path path = config.output_dir() / (std::string(command) + ".provenance.json");
  write_file(path, j.dump(2) + "\n");
  return path;
}

PipelineResources resources_for(const ExperimentConfig& config,
                                const EmbeddingTable& table,
                                const Romanizer& romanizer,
                                const BilingualDictionary* dictionary) {
  PipelineResources res;
  res.embeddings = &table;
  res.romanizer = &romanizer;
  res.dictionary = dictionary;
  res.alpha = config.alpha();
  res.embedding_hash = sha256_file(config.require_path("embeddings"));
  if (const auto stop = config.get("stop_at_dev_f1")) {
    res.train_options.stop_at_dev_f1 = parse_real("stop_at_dev_f1", *stop);
  }
  return res;
}

TaggerModel load_checked_model(const ExperimentConfig& config) {
  TaggerModel model = load_model(config.require_path("model"));
  const std::string hash = sha256_file(config.require_path("embeddings"));
  if (model.embedding_hash != hash) {
    throw ValidationError("embedding file hash " + hash +
                          " does not match the model's " + model.embedding_hash);
  }
  return model;
}

}  // namespace

const std::vector<std::string_view>& ExperimentConfig::known_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> k = kPathKeys;
    for (std::string_view extra :
         {"output_dir", "language", "token_column", "label_column", "keep_tags",
          "char_dim", "char_hidden", "token_hidden", "dropout", "epochs",
          "learning_rate", "decay_rate", "momentum", "clip", "input_mode",
          "stop_at_dev_f1", "seed", "alpha", "min_pairs", "variants",
          "placeholder"}) {
      k.push_back(extra);
    }
    return k;
  }();
  return keys;
}

ExperimentConfig ExperimentConfig::parse(std::string_view content) {
  ExperimentConfig config;
  std::size_t n = 0;
  for (std::string_view line : text::split_lines(content)) {
    ++n;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", n);
    const auto key = trim(line.substr(0, eq));
    try {
      config.set(key, std::string(trim(line.substr(eq + 1))));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), n);
    }
  }
  return config;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  return parse(read_file(path));
}

void ExperimentConfig::set(std::string_view key, std::string value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ValidationError("unknown config key '" + std::string(key) + "'");
  }
  values_.insert_or_assign(std::string(key), std::move(value));
}

std::optional<std::string> ExperimentConfig::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::string ExperimentConfig::require(std::string_view key) const {
  auto value = get(key);
  if (!value) throw ValidationError("missing required config key '" + std::string(key) + "'");
  return *value;
}

fs::path ExperimentConfig::require_path(std::string_view key) const {
  const fs::path path = require(key);
  if (!fs::exists(path)) {
    throw ValidationError("path for '" + std::string(key) +
                          "' does not exist: " + path.string());
  }
  return path;
}

std::optional<fs::path> ExperimentConfig::optional_path(std::string_view key) const {
  if (!has(key)) return std::nullopt;
  return require_path(key);
}

std::uint64_t ExperimentConfig::seed() const {
  return parse_unsigned("seed", require("seed"));
}

double ExperimentConfig::alpha() const {
  const auto value = get("alpha");
  const double alpha = value ? parse_real("alpha", *value) : 0.5;
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  return alpha;
}

Hyperparams ExperimentConfig::hyperparams() const {
  Hyperparams h;
  const auto size = [&](std::string_view key, std::size_t& field) {
    if (const auto v = get(key)) field = parse_unsigned(key, *v);
  };
  const auto real = [&](std::string_view key, double& field) {
    if (const auto v = get(key)) field = parse_real(key, *v);
  };
  size("char_dim", h.char_dim);
  size("char_hidden", h.char_hidden);
  size("token_hidden", h.token_hidden);
  size("epochs", h.epochs);
  real("dropout", h.dropout);
  real("learning_rate", h.learning_rate);
  real("decay_rate", h.decay_rate);
  real("momentum", h.momentum);
  real("clip", h.clip);
  if (const auto v = get("input_mode")) {
    const auto mode = parse_input_mode(*v);
    if (!mode) throw ValidationError("unknown input_mode '" + *v + "'");
    h.mode = *mode;
  }
  h.seed = seed();
  h.validate();
  return h;
}

std::set<EntityType> ExperimentConfig::keep_tags() const {
  const auto value = get("keep_tags");
  if (!value) return {EntityType::kPer, EntityType::kOrg, EntityType::kLoc, EntityType::kMisc};
  std::set<EntityType> keep;
  if (*value == "none") return keep;
  for (const auto& item : split_list(*value)) {
    const auto type = parse_entity_type(item);
    if (!type) throw ValidationError("unknown entity type '" + item + "' in keep_tags");
    keep.insert(*type);
  }
  return keep;
}

std::vector<Variant> ExperimentConfig::variants() const {
  const auto value = get("variants");
  if (!value) {
    return {Variant::kFull, Variant::kShuffle, Variant::kWordOnly, Variant::kCharOnly};
  }
  std::vector<Variant> out;
  for (const auto& item : split_list(*value)) {
    const auto v = parse_variant(item);
    if (!v) throw ValidationError("unknown variant '" + item + "'");
    if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
  }
  if (out.empty()) throw ValidationError("variants list is empty");
  return out;
}

fs::path ExperimentConfig::output_dir() const { return require("output_dir"); }

std::string ExperimentConfig::canonical_text() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

std::string ExperimentConfig::hash() const { return sha256_hex(canonical_text()); }

CommandOutput cmd_preprocess(const ExperimentConfig& config) {
  config.seed();
  const fs::path out_dir = config.output_dir();
  const auto keep = config.keep_tags();
  CommandOutput out;
  bool any = false;
  for (std::string_view key : {"train", "dev", "test"}) {
    if (!config.has(key)) continue;
    any = true;
    Corpus corpus = load_corpus(config, key);
    if (corpus.sentences.empty()) {
      throw ValidationError("corpus '" + std::string(key) + "' is empty");
    }
    corpus = convert_schema(normalize_tokens(filter_tags(corpus, keep)), Schema::kBiose);
    const fs::path path = out_dir / (std::string(key) + ".conll");
    write_file(path, write_conll(corpus));
    out.files.push_back(path);
  }
  if (!any) throw ValidationError("preprocess needs at least one of train, dev, test");
  out.files.push_back(write_provenance(config, "preprocess"));
  return out;
}

CommandOutput cmd_align(const ExperimentConfig& config) {
  config.seed();
  const fs::path out_dir = config.output_dir();
  const EmbeddingTable source = load_table(config, "source_embeddings");
  const EmbeddingTable target = load_table(config, "target_embeddings");
  const SeedDictionary seeds =
      load_seed_dictionary(read_file(config.require_path("seed_dictionary")));
  const std::size_t min_pairs =
      config.has("min_pairs") ? parse_unsigned("min_pairs", *config.get("min_pairs")) : 0;

  const auto source_norm = normalize_table(source);
  const auto target_norm = normalize_table(target);
  // W maps source -> target; its transpose brings the target table into the
  // source space, where the merged table lives.
  const auto alignment =
      procrustes_align(source_norm.table, target_norm.table, seeds, min_pairs);
  const auto merged = merge_tables(
      source_norm.table,
      apply_alignment(target_norm.table, alignment.map.transpose()));

  CommandOutput out;
  const fs::path table_path = out_dir / "merged.vec";
  write_file(table_path, write_embeddings(merged.table));
  out.files.push_back(table_path);

  nlohmann::ordered_json j;
  j["dim"] = source.dim();
  j["pairs_used"] = alignment.pairs_used;
  j["orthogonality_error"] = alignment.map.orthogonality_error();
  j["dropped_source"] = source_norm.dropped;
  j["dropped_target"] = target_norm.dropped;
  j["merged_size"] = merged.table.size();
  j["collisions"] = merged.collisions;
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < alignment.map.matrix.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < alignment.map.matrix.cols(); ++k) {
      row.push_back(alignment.map.matrix(i, k));
    }
    rows.push_back(std::move(row));
  }
  j["source_to_target"] = rows;
  const fs::path info_path = out_dir / "alignment.json";
  write_file(info_path, j.dump(2) + "\n");
  out.files.push_back(info_path);
  out.files.push_back(write_provenance(config, "align"));
  return out;
}

CommandOutput cmd_translate(const ExperimentConfig& config) {
  config.seed();
  const fs::path out_dir = config.output_dir();
  const Corpus train_corpus = load_biose(config, "train");
  const auto dict = load_dictionary(read_file(config.require_path("dictionary")));
  const EmbeddingTable table = load_table(config, "embeddings");
  const auto translated = translate_corpus(train_corpus, dict, table, config.alpha());

  CommandOutput out;
  const fs::path corpus_path = out_dir / "train.translated.conll";
  write_file(corpus_path, write_conll(translated.corpus));
  out.files.push_back(corpus_path);
  const fs::path stats_path = out_dir / "translation_stats.json";
  write_file(stats_path, translated.stats.to_json());
  out.files.push_back(stats_path);
  out.files.push_back(write_provenance(config, "translate"));
  return out;
}

CommandOutput cmd_train(const ExperimentConfig& config) {
  const Hyperparams hyper = config.hyperparams();
  const fs::path out_dir = config.output_dir();
  const Corpus train_corpus = load_biose(config, "train");
  if (!config.has("dev")) throw ValidationError("train needs a dev corpus ('dev')");
  const Corpus dev = load_biose(config, "dev");
  const EmbeddingTable table = load_table(config, "embeddings");
  const Romanizer romanizer = load_romanizer(config);
  const auto res = resources_for(config, table, romanizer, nullptr);

  const auto result = fit_tagger(train_corpus, dev, hyper, res);
  CommandOutput out;
  const fs::path model_path = out_dir / "model.bin";
  save_model(model_path, result.model);
  out.files.push_back(model_path);
  const fs::path log_path = out_dir / "train_report.log";
  write_file(log_path, result.report.to_log());
  out.files.push_back(log_path);
  const fs::path json_path = out_dir / "train_report.json";
  write_file(json_path, result.report.to_json());
  out.files.push_back(json_path);
  out.files.push_back(write_provenance(config, "train"));
  return out;
}

CommandOutput cmd_predict(const ExperimentConfig& config) {
  config.seed();
  const fs::path out_dir = config.output_dir();
  const TaggerModel model = load_checked_model(config);
  const Corpus test = load_biose(config, "test");
  const EmbeddingTable table = load_table(config, "embeddings");
  const Romanizer romanizer = load_romanizer(config);
  const auto res = resources_for(config, table, romanizer, nullptr);

  CommandOutput out;
  const fs::path path = out_dir / "predictions.conll";
  write_file(path, write_conll(tag_corpus(model, test, res)));
  out.files.push_back(path);
  out.files.push_back(write_provenance(config, "predict"));
  return out;
}

CommandOutput cmd_evaluate(const ExperimentConfig& config) {
  config.seed();
  const fs::path out_dir = config.output_dir();
  const TaggerModel model = load_checked_model(config);
  const Corpus test = load_biose(config, "test");
  const EmbeddingTable table = load_table(config, "embeddings");
  const Romanizer romanizer = load_romanizer(config);
  const auto res = resources_for(config, table, romanizer, nullptr);

  const Corpus predicted = tag_corpus(model, test, res);
  const ScoreTriple overall = entity_f1(test, predicted);
  const LengthBuckets lengths = f1_by_length(test, predicted);
  const OovReport oov = oov_rate(test, table);

  CommandOutput out;
  const fs::path text_path = out_dir / "score_report.txt";
  write_file(text_path, format_score_report(overall, lengths) + "\nOOV rate (%)\n" +
                            format_oov_report(oov));
  out.files.push_back(text_path);

  nlohmann::ordered_json j = nlohmann::ordered_json::parse(score_report_json(overall, lengths));
  j["oov"] = nlohmann::ordered_json::parse(oov_report_json(oov));
  const fs::path json_path = out_dir / "score_report.json";
  write_file(json_path, j.dump(2) + "\n");
  out.files.push_back(json_path);
  out.files.push_back(write_provenance(config, "evaluate"));
  return out;
}

CommandOutput cmd_ablate(const ExperimentConfig& config) {
  const Hyperparams hyper = config.hyperparams();
  const fs::path out_dir = config.output_dir();
  const Corpus train_corpus = load_biose(config, "train");
  const Corpus dev = load_biose(config, "dev");
  const Corpus test = load_biose(config, "test");
  const EmbeddingTable table = load_table(config, "embeddings");
  const auto dict = load_dictionary(read_file(config.require_path("dictionary")));
  const Romanizer romanizer = load_romanizer(config);
  const auto res = resources_for(config, table, romanizer, &dict);

  std::vector<AblationConfig> configs;
  for (Variant v : config.variants()) configs.push_back({v, hyper.seed, hyper});
  const auto rows = run_ablation(train_corpus, dev, test, configs, res);

  CommandOutput out;
  const fs::path text_path = out_dir / "ablation.txt";
  write_file(text_path, format_ablation_table(rows));
  out.files.push_back(text_path);
  const fs::path json_path = out_dir / "ablation.json";
  write_file(json_path, ablation_json(rows));
  out.files.push_back(json_path);
  out.files.push_back(write_provenance(config, "ablate"));
  return out;
}

CommandOutput cmd_oov_report(const ExperimentConfig& config) {
  config.seed();
  const fs::path out_dir = config.output_dir();
  const std::string_view key = config.has("corpus") ? "corpus" : "test";
  const Corpus corpus = load_corpus(config, key);
  const EmbeddingTable table = load_table(config, "embeddings");
  const OovReport report = oov_rate(corpus, table);

  CommandOutput out;
  const fs::path text_path = out_dir / "oov_report.txt";
  write_file(text_path, format_oov_report(report));
  out.files.push_back(text_path);
  const fs::path json_path = out_dir / "oov_report.json";
  write_file(json_path, oov_report_json(report));
  out.files.push_back(json_path);
  out.files.push_back(write_provenance(config, "oov-report"));
  return out;
}

const std::vector<std::string_view>& command_names() {
  static const std::vector<std::string_view> names = {
      "preprocess", "align", "translate", "train",
      "predict",    "evaluate", "ablate", "oov-report"};
  return names;
}

CommandOutput run_command(std::string_view command, const ExperimentConfig& config) {
  using Fn = CommandOutput (*)(const ExperimentConfig&);
  static const std::map<std::string_view, Fn> table = {
      {"preprocess", &cmd_preprocess}, {"align", &cmd_align},
      {"translate", &cmd_translate},   {"train", &cmd_train},
      {"predict", &cmd_predict},       {"evaluate", &cmd_evaluate},
      {"ablate", &cmd_ablate},         {"oov-report", &cmd_oov_report}};
  const auto it = table.find(command);
  if (it == table.end()) throw ValidationError("unknown command '" + std::string(command) + "'");
  return it->second(config);
}

}  // namespace xner
