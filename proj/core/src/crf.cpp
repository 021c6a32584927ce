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

#include "xner/crf.hpp"

#include <cmath>
#include <limits>

#include "xner/error.hpp"

namespace xner::crf {

namespace {

void check_shapes(const Eigen::MatrixXd& emissions,
                  const Eigen::MatrixXd& transitions) {
  const auto labels = emissions.cols();
  if (emissions.rows() < 1 || labels < 1) {
    throw ValidationError("CRF needs at least one position and one label");
  }
  if (transitions.rows() != labels + 2 || transitions.cols() != labels + 2) {
    throw ValidationError("transition matrix must be (L+2) x (L+2)");
  }
}

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

// alpha(t, y): log-sum of scores of all prefixes ending in y at t,
// including emit[t, y].
Eigen::MatrixXd forward_table(const Eigen::MatrixXd& e, const Eigen::MatrixXd& tr) {
  const auto T = e.rows();
  const auto L = e.cols();
  const auto S = static_cast<Eigen::Index>(start_state(L));
  Eigen::MatrixXd alpha(T, L);
  alpha.row(0) = tr.row(S).head(L) + e.row(0);
  Eigen::VectorXd scratch(L);
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index y = 0; y < L; ++y) {
      scratch = alpha.row(t - 1).transpose() + tr.col(y).head(L);
      alpha(t, y) = log_sum_exp(scratch) + e(t, y);
    }
  }
  return alpha;
}

}  // namespace

double path_score(const Eigen::MatrixXd& emissions,
                  const Eigen::MatrixXd& transitions,
                  std::span<const std::size_t> path) {
  check_shapes(emissions, transitions);
  const auto T = static_cast<std::size_t>(emissions.rows());
  const auto L = static_cast<std::size_t>(emissions.cols());
  if (path.size() != T) throw ValidationError("path length != emission rows");
  for (std::size_t y : path) {
    if (y >= L) throw ValidationError("label index out of range");
  }
  double score = transitions(start_state(L), path[0]);
  for (std::size_t t = 0; t < T; ++t) {
    score += emissions(t, path[t]);
    if (t > 0) score += transitions(path[t - 1], path[t]);
  }
  return score + transitions(path[T - 1], end_state(L));
}

double log_partition(const Eigen::MatrixXd& emissions,
                     const Eigen::MatrixXd& transitions) {
  check_shapes(emissions, transitions);
  const auto L = emissions.cols();
  const Eigen::MatrixXd alpha = forward_table(emissions, transitions);
  const auto E = static_cast<Eigen::Index>(end_state(L));
  return log_sum_exp(alpha.row(alpha.rows() - 1).transpose() +
                     transitions.col(E).head(L));
}

double neg_log_likelihood(const Eigen::MatrixXd& emissions,
                          const Eigen::MatrixXd& transitions,
                          std::span<const std::size_t> gold) {
  return log_partition(emissions, transitions) -
         path_score(emissions, transitions, gold);
}

LossGradients neg_log_likelihood_gradients(const Eigen::MatrixXd& e,
                                           const Eigen::MatrixXd& tr,
                                           std::span<const std::size_t> gold) {
  check_shapes(e, tr);
  const auto T = e.rows();
  const auto L = e.cols();
  const auto S = static_cast<Eigen::Index>(start_state(L));
  const auto E = static_cast<Eigen::Index>(end_state(L));
  if (static_cast<Eigen::Index>(gold.size()) != T) {
    throw ValidationError("gold length != emission rows");
  }

  const Eigen::MatrixXd alpha = forward_table(e, tr);
  const double log_z =
      log_sum_exp(alpha.row(T - 1).transpose() + tr.col(E).head(L));

  // beta(t, y): log-sum of scores of all suffixes after t given y at t.
  Eigen::MatrixXd beta(T, L);
  beta.row(T - 1) = tr.col(E).head(L).transpose();
  Eigen::VectorXd scratch(L);
  for (Eigen::Index t = T - 2; t >= 0; --t) {
    for (Eigen::Index y = 0; y < L; ++y) {
      scratch = tr.row(y).head(L).transpose() + e.row(t + 1).transpose() +
                beta.row(t + 1).transpose();
      beta(t, y) = log_sum_exp(scratch);
    }
  }

  LossGradients g;
  g.loss = log_z - path_score(e, tr, gold);
  g.emissions = ((alpha + beta).array() - log_z).exp().matrix();
  g.transitions = Eigen::MatrixXd::Zero(L + 2, L + 2);
  g.transitions.row(S).head(L) = g.emissions.row(0);
  g.transitions.col(E).head(L) = g.emissions.row(T - 1).transpose();
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index from = 0; from < L; ++from) {
      for (Eigen::Index to = 0; to < L; ++to) {
        g.transitions(from, to) += std::exp(alpha(t - 1, from) + tr(from, to) +
                                            e(t, to) + beta(t, to) - log_z);
      }
    }
  }

  for (Eigen::Index t = 0; t < T; ++t) {
    const auto y = static_cast<Eigen::Index>(gold[t]);
    g.emissions(t, y) -= 1.0;
    if (t > 0) g.transitions(static_cast<Eigen::Index>(gold[t - 1]), y) -= 1.0;
  }
  g.transitions(S, static_cast<Eigen::Index>(gold[0])) -= 1.0;
  g.transitions(static_cast<Eigen::Index>(gold[T - 1]), E) -= 1.0;
  return g;
}

std::vector<std::size_t> viterbi_decode(const Eigen::MatrixXd& e,
                                        const Eigen::MatrixXd& tr) {
  check_shapes(e, tr);
  const auto T = e.rows();
  const auto L = e.cols();
  const auto S = static_cast<Eigen::Index>(start_state(L));
  const auto E = static_cast<Eigen::Index>(end_state(L));

  Eigen::MatrixXd best(T, L);
  Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic> back(T, L);
  best.row(0) = tr.row(S).head(L) + e.row(0);
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index y = 0; y < L; ++y) {
      Eigen::Index arg = 0;
      double value = -std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < L; ++k) {
        const double candidate = best(t - 1, k) + tr(k, y);
        if (candidate > value) {
          value = candidate;
          arg = k;
        }
      }
      best(t, y) = value + e(t, y);
      back(t, y) = arg;
    }
  }

  Eigen::Index last = 0;
  double value = -std::numeric_limits<double>::infinity();
  for (Eigen::Index y = 0; y < L; ++y) {
    const double candidate = best(T - 1, y) + tr(y, E);
    if (candidate > value) {
      value = candidate;
      last = y;
    }
  }
  std::vector<std::size_t> path(static_cast<std::size_t>(T));
  path[T - 1] = static_cast<std::size_t>(last);
  for (Eigen::Index t = T - 1; t > 0; --t) {
    last = back(t, last);
    path[t - 1] = static_cast<std::size_t>(last);
  }
  return path;
}

}  // namespace xner::crf
