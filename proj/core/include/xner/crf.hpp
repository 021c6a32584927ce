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
#include <span>
#include <vector>

namespace xner::crf {

// Linear-chain CRF over L labels.
//
// `emissions` is T x L. `transitions` is (L+2) x (L+2), indexed
// [from, to]; row/column L is the virtual start state and L+1 the virtual
// end state. A path y scores
//
//   trans[start, y0] + sum_t emit[t, y_t] + sum_t trans[y_{t-1}, y_t]
//     + trans[y_{T-1}, end].

inline std::size_t start_state(std::size_t num_labels) { return num_labels; }
inline std::size_t end_state(std::size_t num_labels) { return num_labels + 1; }

double path_score(const Eigen::MatrixXd& emissions,
                  const Eigen::MatrixXd& transitions,
                  std::span<const std::size_t> path);

/// log of the sum of exp(path_score) over all L^T paths (forward recursion).
double log_partition(const Eigen::MatrixXd& emissions,
                     const Eigen::MatrixXd& transitions);

/// log_partition - path_score(gold); never negative up to rounding.
double neg_log_likelihood(const Eigen::MatrixXd& emissions,
                          const Eigen::MatrixXd& transitions,
                          std::span<const std::size_t> gold);

struct LossGradients {
  double loss = 0.0;
  Eigen::MatrixXd emissions;    // T x L
  Eigen::MatrixXd transitions;  // (L+2) x (L+2)
};

/// Negative log-likelihood with its gradients (marginals minus gold
/// indicators) via forward-backward.
LossGradients neg_log_likelihood_gradients(const Eigen::MatrixXd& emissions,
                                           const Eigen::MatrixXd& transitions,
                                           std::span<const std::size_t> gold);

/// Highest-scoring path. Ties resolve to the smallest label index at every
/// step of the backtrace.
std::vector<std::size_t> viterbi_decode(const Eigen::MatrixXd& emissions,
                                        const Eigen::MatrixXd& transitions);

}  // namespace xner::crf
