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

#include "xner/embeddings.hpp"

#include <Eigen/SVD>
#include "json.hpp"

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "xner/error.hpp"
#include "xner/random.hpp"
#include "xner/text.hpp"

namespace xner {

bool EmbeddingTable::contains(std::string_view word) const {
  return index_.contains(std::string(word));
}

std::span<const double> EmbeddingTable::find(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return {};
  return row(it->second);
}

std::span<const double> EmbeddingTable::row(std::size_t index) const {
  return {data_.data() + index * dim_, dim_};
}

bool EmbeddingTable::insert(std::string word, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw ValidationError("vector for '" + word + "' has length " +
                          std::to_string(vector.size()) + ", expected " +
                          std::to_string(dim_));
  }
  if (index_.contains(word)) return false;
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

void EmbeddingTable::set_row(std::size_t index, std::span<const double> vector) {
  if (vector.size() != dim_) throw ValidationError("row length mismatch");
  std::copy(vector.begin(), vector.end(), data_.begin() + index * dim_);
}

Eigen::MatrixXd EmbeddingTable::to_matrix() const {
  Eigen::MatrixXd m(size(), dim_);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < dim_; ++j) m(i, j) = data_[i * dim_ + j];
  }
  return m;
}

EmbeddingTable load_embeddings(std::string_view content) {
  const auto lines = text::split_lines(content);
  std::size_t dim = 0;
  std::size_t first = 0;
  if (!lines.empty()) {
    const auto header = text::split_fields(lines[0]);
    double count = 0, d = 0;
    if (header.size() == 2 && text::parse_double(header[0], count) &&
        text::parse_double(header[1], d) && d >= 1 && d == std::floor(d) &&
        count == std::floor(count)) {
      dim = static_cast<std::size_t>(d);
      first = 1;
    }
  }

  EmbeddingTable table;
  bool initialized = dim != 0;
  if (initialized) table = EmbeddingTable(dim);
  std::vector<double> values;
  for (std::size_t n = first; n < lines.size(); ++n) {
    const auto fields = text::split_fields(lines[n]);
    if (fields.empty()) continue;
    if (!initialized) {
      if (fields.size() < 2) throw ParseError("row has no vector values", n + 1);
      dim = fields.size() - 1;
      table = EmbeddingTable(dim);
      initialized = true;
    }
    if (fields.size() - 1 != dim) {
      throw ParseError("vector has " + std::to_string(fields.size() - 1) +
                           " values, expected " + std::to_string(dim),
                       n + 1);
    }
    values.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!text::parse_double(fields[j + 1], values[j]) ||
          !std::isfinite(values[j])) {
        throw ParseError("unparseable real '" + std::string(fields[j + 1]) + "'",
                         n + 1);
      }
    }
    table.insert(std::string(fields[0]), values);
  }
  return table;
}

std::string write_embeddings(const EmbeddingTable& table) {
  std::string out = std::to_string(table.size()) + " " +
                    std::to_string(table.dim()) + "\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    out += table.word(i);
    for (double v : table.row(i)) {
      out += ' ';
      out += text::format_double(v);
    }
    out += '\n';
  }
  return out;
}

NormalizedTable normalize_table(const EmbeddingTable& table) {
  const std::size_t dim = table.dim();
  NormalizedTable result{EmbeddingTable(dim), 0};

  std::vector<std::size_t> kept;
  std::vector<Eigen::VectorXd> unit;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto row = table.row(i);
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(row.data(), dim);
    const double norm = v.norm();
    if (norm == 0.0) {
      ++result.dropped;
      continue;
    }
    kept.push_back(i);
    unit.push_back(v / norm);
  }
  if (unit.size() < 2) {
    throw ValidationError(
        "normalization needs at least two non-zero vectors (mean-centering a "
        "single vector yields zero)");
  }

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& v : unit) mean += v;
  mean /= static_cast<double>(unit.size());

  for (std::size_t k = 0; k < unit.size(); ++k) {
    Eigen::VectorXd v = unit[k] - mean;
    const double norm = v.norm();
    if (norm == 0.0) {
      ++result.dropped;
      continue;
    }
    v /= norm;
    result.table.insert(table.word(kept[k]),
                        std::span<const double>(v.data(), dim));
  }
  if (result.table.size() < 2) {
    throw ValidationError("normalization left fewer than two vectors");
  }
  return result;
}

double OrthogonalMap::orthogonality_error() const {
  const Eigen::MatrixXd gram = matrix.transpose() * matrix;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
      .cwiseAbs()
      .maxCoeff();
}

SeedDictionary load_seed_dictionary(std::string_view content) {
  SeedDictionary dict;
  std::size_t n = 0;
  for (std::string_view line : text::split_lines(content)) {
    ++n;
    const auto fields = text::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw ParseError("expected 'source target', found " +
                           std::to_string(fields.size()) + " fields",
                       n);
    }
    dict.pairs.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  return dict;
}

AlignmentResult procrustes_align(const EmbeddingTable& source,
                                 const EmbeddingTable& target,
                                 const SeedDictionary& seeds,
                                 std::size_t min_pairs) {
  if (source.dim() != target.dim()) {
    throw ValidationError("alignment tables differ in dimension");
  }
  const std::size_t dim = source.dim();
  if (min_pairs == 0) min_pairs = dim;

  // M = sum y_i x_i^T = Y X^T with x, y as columns.
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(dim, dim);
  std::size_t used = 0;
  for (const auto& [src, tgt] : seeds.pairs) {
    const auto x = source.find(src);
    const auto y = target.find(tgt);
    if (x.empty() || y.empty()) continue;
    cross.noalias() += Eigen::Map<const Eigen::VectorXd>(y.data(), dim) *
                       Eigen::Map<const Eigen::VectorXd>(x.data(), dim).transpose();
    ++used;
  }
  if (used < min_pairs) {
    throw ValidationError("insufficient supervision: " + std::to_string(used) +
                          " usable seed pairs, need " +
                          std::to_string(min_pairs));
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw NumericError("SVD did not converge");
  }
  AlignmentResult result{{svd.matrixU() * svd.matrixV().transpose()}, used};
  if (!result.map.matrix.allFinite()) {
    throw NumericError("alignment produced non-finite values");
  }
  return result;
}

EmbeddingTable apply_alignment(const EmbeddingTable& table,
                               const OrthogonalMap& map) {
  if (map.dim() != table.dim()) {
    throw ValidationError("alignment map dimension " + std::to_string(map.dim()) +
                          " does not match table dimension " +
                          std::to_string(table.dim()));
  }
  const std::size_t dim = table.dim();
  EmbeddingTable out(dim);
  Eigen::VectorXd mapped(dim);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto row = table.row(i);
    mapped.noalias() =
        map.matrix * Eigen::Map<const Eigen::VectorXd>(row.data(), dim);
    out.insert(table.word(i), std::span<const double>(mapped.data(), dim));
  }
  return out;
}

MergedTable merge_tables(const EmbeddingTable& a, const EmbeddingTable& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("cannot merge tables of dimension " +
                          std::to_string(a.dim()) + " and " +
                          std::to_string(b.dim()));
  }
  MergedTable merged{EmbeddingTable(a.dim()), 0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    merged.table.insert(a.word(i), a.row(i));
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!merged.table.insert(b.word(i), b.row(i))) ++merged.collisions;
  }
  return merged;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ValidationError("cosine of vectors with different lengths");
  }
  double dot = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return dot / (std::sqrt(uu) * std::sqrt(vv));
}

std::string nearest_word(const EmbeddingTable& table,
                         std::span<const double> query) {
  std::size_t best = 0;
  double best_score = -2.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double score = cosine(table.row(i), query);
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return table.empty() ? std::string() : table.word(best);
}

std::vector<double> OovStore::vector_for(std::string_view word) {
  std::lock_guard lock(mutex_);
  auto it = cache_.find(std::string(word));
  if (it != cache_.end()) return it->second;
  Rng rng(mix_seed(seed_, fnv1a64(word)));
  std::vector<double> v(dim_);
  for (auto& x : v) x = rng.uniform(-0.1, 0.1);
  cache_.emplace(std::string(word), v);
  return v;
}

std::size_t OovStore::size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

std::vector<double> lookup(const EmbeddingTable& table, std::string_view word,
                           OovStore& oov) {
  const auto row = table.find(word);
  if (!row.empty()) return {row.begin(), row.end()};
  return oov.vector_for(word);
}

OovReport oov_rate(const Corpus& corpus, const EmbeddingTable& table) {
  OovReport report;
  std::set<std::string_view> types;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& token : sentence.tokens) {
      ++report.tokens;
      const bool missing = !table.contains(token.surface);
      if (missing) ++report.oov_tokens;
      if (types.insert(token.surface).second && missing) ++report.oov_types;
    }
  }
  if (report.tokens == 0) throw ValidationError("OOV rate of an empty corpus");
  report.types = types.size();
  report.type_rate = 100.0 * static_cast<double>(report.oov_types) /
                     static_cast<double>(report.types);
  report.token_rate = 100.0 * static_cast<double>(report.oov_tokens) /
                      static_cast<double>(report.tokens);
  return report;
}

std::string format_oov_report(const OovReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1);
  out << std::left << std::setw(8) << "Type" << "Token\n";
  out << std::setw(8) << report.type_rate << report.token_rate << '\n';
  return out.str();
}

std::string oov_report_json(const OovReport& report) {
  nlohmann::ordered_json j;
  j["type_rate"] = report.type_rate;
  j["token_rate"] = report.token_rate;
  j["types"] = report.types;
  j["oov_types"] = report.oov_types;
  j["tokens"] = report.tokens;
  j["oov_tokens"] = report.oov_tokens;
  return j.dump(2) + "\n";
}

}  // namespace xner
