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

namespace xner {

/// One LSTM direction. `weights` is 4H x (D + H) acting on [x_t; h_{t-1}],
/// gate blocks ordered input, forget, output, candidate. `bias` is 4H x 1.
struct LstmParams {
  Eigen::MatrixXd weights;
  Eigen::MatrixXd bias;

  static LstmParams zeros(std::size_t input_dim, std::size_t hidden);

  Eigen::Index hidden() const { return bias.rows() / 4; }
  Eigen::Index input_dim() const { return weights.cols() - hidden(); }
};

/// Activations kept for backpropagation. Columns are indexed by sequence
/// position, whatever the processing direction.
struct LstmTrace {
  bool reverse = false;
  Eigen::MatrixXd inputs;  // (D + H) x T, [x_t; h_prev]
  Eigen::MatrixXd gates;   // 4H x T, post-activation
  Eigen::MatrixXd cells;   // H x T
  Eigen::MatrixXd hidden;  // H x T

  Eigen::Index length() const { return hidden.cols(); }
  /// Column of the last processed step (the summary state).
  Eigen::Index last() const { return reverse ? 0 : length() - 1; }
};

/// Runs over the columns of `xs` (D x T), right to left when `reverse`.
LstmTrace lstm_forward(const LstmParams& params, const Eigen::MatrixXd& xs,
                       bool reverse);

/// Backpropagates `d_hidden` (H x T, gradient w.r.t. each hidden output),
/// accumulating parameter gradients into `grad` and returning d xs (D x T).
Eigen::MatrixXd lstm_backward(const LstmParams& params, const LstmTrace& trace,
                              const Eigen::MatrixXd& d_hidden, LstmParams& grad);

}  // namespace xner
