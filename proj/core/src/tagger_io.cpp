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

#include <bit>
#include <cstring>

#include "json.hpp"
#include "xner/error.hpp"
#include "xner/hash.hpp"
#include "xner/tagger.hpp"

namespace xner {

static_assert(std::endian::native == std::endian::little,
              "model container stores little-endian float64");

namespace {

constexpr std::string_view kMagic = "XNER-TAGGER 1\n";

nlohmann::ordered_json hyper_to_json(const Hyperparams& h) {
  return {{"word_dim", h.word_dim},
          {"char_dim", h.char_dim},
          {"char_hidden", h.char_hidden},
          {"token_hidden", h.token_hidden},
          {"dropout", h.dropout},
          {"epochs", h.epochs},
          {"learning_rate", h.learning_rate},
          {"decay_rate", h.decay_rate},
          {"momentum", h.momentum},
          {"clip", h.clip},
          {"seed", h.seed},
          {"input_mode", std::string(to_string(h.mode))}};
}

Hyperparams hyper_from_json(const nlohmann::json& j) {
  Hyperparams h;
  h.word_dim = j.at("word_dim").get<std::size_t>();
  h.char_dim = j.at("char_dim").get<std::size_t>();
  h.char_hidden = j.at("char_hidden").get<std::size_t>();
  h.token_hidden = j.at("token_hidden").get<std::size_t>();
  h.dropout = j.at("dropout").get<double>();
  h.epochs = j.at("epochs").get<std::size_t>();
  h.learning_rate = j.at("learning_rate").get<double>();
  h.decay_rate = j.at("decay_rate").get<double>();
  h.momentum = j.at("momentum").get<double>();
  h.clip = j.at("clip").get<double>();
  h.seed = j.at("seed").get<std::uint64_t>();
  const auto mode = parse_input_mode(j.at("input_mode").get<std::string>());
  if (!mode) throw ParseError("unknown input_mode in model header", 0);
  h.mode = *mode;
  return h;
}

}  // namespace

std::string serialize_model(const TaggerModel& model) {
  nlohmann::ordered_json header;
  header["format"] = "xner-tagger";
  header["version"] = 1;
  header["hyperparams"] = hyper_to_json(model.hyper);
  auto labels = nlohmann::ordered_json::array();
  for (const auto& l : model.labels) labels.push_back(to_string(l));
  header["labels"] = labels;
  header["char_inventory"] = {{"blank", kBlankChar},
                              {"unknown", kUnknownChar},
                              {"ascii_first", 0x20},
                              {"ascii_last", 0x7e},
                              {"size", kCharInventorySize}};
  header["seed"] = model.hyper.seed;
  header["embedding_sha256"] = model.embedding_hash;
  auto tensors = nlohmann::ordered_json::array();
  std::size_t values = 0;
  model.params.for_each([&](std::string_view name, const Eigen::MatrixXd& m) {
    tensors.push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}});
    values += static_cast<std::size_t>(m.size());
  });
  header["tensors"] = tensors;
  const std::string header_text = header.dump();

  std::string out;
  out.reserve(kMagic.size() + 32 + header_text.size() + values * sizeof(double));
  out += kMagic;
  out += std::to_string(header_text.size());
  out += '\n';
  out += header_text;
  out += '\n';
  model.params.for_each([&](std::string_view, const Eigen::MatrixXd& m) {
    const auto* bytes = reinterpret_cast<const char*>(m.data());
    out.append(bytes, static_cast<std::size_t>(m.size()) * sizeof(double));
  });
  return out;
}

TaggerModel deserialize_model(std::string_view bytes) {
  if (!bytes.starts_with(kMagic)) throw ParseError("not an xner model file", 0);
  bytes.remove_prefix(kMagic.size());
  const auto newline = bytes.find('\n');
  if (newline == std::string_view::npos) throw ParseError("truncated model header", 0);
  std::size_t header_size = 0;
  try {
    header_size = std::stoul(std::string(bytes.substr(0, newline)));
  } catch (const std::exception&) {
    throw ParseError("bad model header length", 0);
  }
  bytes.remove_prefix(newline + 1);
  if (bytes.size() < header_size + 1) throw ParseError("truncated model header", 0);

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, header_size));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad model header: ") + e.what(), 0);
  }
  bytes.remove_prefix(header_size + 1);

  TaggerModel model;
  try {
    model.hyper = hyper_from_json(header.at("hyperparams"));
    for (const auto& l : header.at("labels")) {
      const auto label = parse_label(l.get<std::string>());
      if (!label) throw ParseError("bad label in model header", 0);
      model.labels.push_back(*label);
    }
    if (header.at("char_inventory").at("size").get<std::size_t>() !=
        kCharInventorySize) {
      throw ParseError("character inventory mismatch", 0);
    }
    model.embedding_hash = header.at("embedding_sha256").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad model header: ") + e.what(), 0);
  }

  // Shapes come from the hyperparameters; the header must agree.
  model.params = TaggerModel::initialize(model.hyper, model.labels).params;
  const auto& tensors = header.at("tensors");
  std::size_t index = 0;
  model.params.for_each([&](std::string_view name, Eigen::MatrixXd& m) {
    if (index >= tensors.size()) throw ParseError("missing tensor " + std::string(name), 0);
    const auto& t = tensors[index++];
    if (t.at("name").get<std::string>() != name ||
        t.at("rows").get<Eigen::Index>() != m.rows() ||
        t.at("cols").get<Eigen::Index>() != m.cols()) {
      throw ParseError("tensor " + std::string(name) + " has unexpected shape", 0);
    }
    const std::size_t size = static_cast<std::size_t>(m.size()) * sizeof(double);
    if (bytes.size() < size) throw ParseError("truncated tensor data", 0);
    std::memcpy(m.data(), bytes.data(), size);
    bytes.remove_prefix(size);
  });
  if (!bytes.empty()) throw ParseError("trailing bytes after tensor data", 0);
  return model;
}

void save_model(const std::filesystem::path& path, const TaggerModel& model) {
  write_file(path, serialize_model(model));
}

TaggerModel load_model(const std::filesystem::path& path) {
  return deserialize_model(read_file(path));
}

std::string model_checksum(const TaggerModel& model) {
  return sha256_hex(serialize_model(model));
}

}  // namespace xner
