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

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xner/error.hpp"
#include "xner/experiment.hpp"
#include "xner/hash.hpp"
#include "xner/romanizer.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::string flag_name(std::string_view key) {
  std::string out = "--";
  for (char c : key) out += c == '_' ? '-' : c;
  return out;
}

struct PipelineCommand {
  std::string name;
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

void add_pipeline_command(CLI::App& root, std::string_view name,
                          std::string_view description, PipelineCommand& cmd) {
  cmd.name = std::string(name);
  cmd.app = root.add_subcommand(cmd.name, std::string(description));
  cmd.app->add_option("-c,--config", cmd.config_path, "key = value configuration file");
  for (std::string_view key : xner::ExperimentConfig::known_keys()) {
    cmd.app->add_option(flag_name(key), cmd.overrides[std::string(key)],
                        "override config key '" + std::string(key) + "'");
  }
}

int run_pipeline(const PipelineCommand& cmd) {
  xner::ExperimentConfig config;
  if (!cmd.config_path.empty()) config = xner::ExperimentConfig::load(cmd.config_path);
  for (const auto& [key, value] : cmd.overrides) {
    if (cmd.app->count(flag_name(key)) > 0) config.set(key, value);
  }
  const auto out = xner::run_command(cmd.name, config);
  for (const auto& path : out.files) std::cout << path.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-lingual named entity recognition toolkit"};
  app.set_version_flag("--version", std::string(xner::toolkit_version()));
  app.require_subcommand(1);

  const std::vector<std::pair<std::string_view, std::string_view>> commands = {
      {"preprocess", "filter tags, normalize tokens and convert to BIOSE"},
      {"align", "align two embedding tables and merge them"},
      {"translate", "word-by-word translate the training corpus"},
      {"train", "train a tagger and write the model with its report"},
      {"predict", "tag a corpus with a trained model"},
      {"evaluate", "score a model: overall, per length and OOV rates"},
      {"ablate", "run the ablation variants and print the comparison table"},
      {"oov-report", "type and token OOV rates of a corpus"}};
  std::vector<PipelineCommand> pipeline(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    add_pipeline_command(app, commands[i].first, commands[i].second, pipeline[i]);
  }

  std::string table_path;
  std::string placeholder;
  std::vector<std::string> words;
  auto* romanize_cmd = app.add_subcommand("romanize", "romanize words with a rule table");
  romanize_cmd->add_option("-t,--table", table_path, "transliteration table (key<TAB>value)")
      ->required();
  romanize_cmd->add_option("--placeholder", placeholder,
                           "replacement for characters without a rule");
  romanize_cmd->add_option("words", words, "words to romanize")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (romanize_cmd->parsed()) {
      const xner::Romanizer romanizer(
          xner::load_transliteration_table(xner::read_file(table_path)), placeholder);
      for (const auto& warning : romanizer.table().warnings()) {
        std::cerr << "warning: ASCII rule key '" << warning << "'\n";
      }
      for (const auto& word : words) std::cout << word << '\t' << romanizer(word) << '\n';
      return kExitOk;
    }
    for (const auto& cmd : pipeline) {
      if (cmd.app->parsed()) return run_pipeline(cmd);
    }
  } catch (const xner::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const xner::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
