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

#include "xner/lstm.hpp"

#include <cmath>

namespace xner {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden) {
  const auto h = static_cast<Eigen::Index>(hidden);
  const auto d = static_cast<Eigen::Index>(input_dim);
  return {Eigen::MatrixXd::Zero(4 * h, d + h), Eigen::MatrixXd::Zero(4 * h, 1)};
}

LstmTrace lstm_forward(const LstmParams& p, const Eigen::MatrixXd& xs,
                       bool reverse) {
  const Eigen::Index H = p.hidden();
  const Eigen::Index D = p.input_dim();
  const Eigen::Index T = xs.cols();

  LstmTrace trace;
  trace.reverse = reverse;
  trace.inputs.resize(D + H, T);
  trace.gates.resize(4 * H, T);
  trace.cells.resize(H, T);
  trace.hidden.resize(H, T);
  if (T == 0) return trace;

  // Input contribution for all steps at once.
  Eigen::MatrixXd pre = p.weights.leftCols(D) * xs;
  pre.colwise() += p.bias.col(0);

  Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd z(4 * H);
  for (Eigen::Index step = 0; step < T; ++step) {
    const Eigen::Index t = reverse ? T - 1 - step : step;
    trace.inputs.col(t).head(D) = xs.col(t);
    trace.inputs.col(t).tail(H) = h_prev;
    z.noalias() = pre.col(t) + p.weights.rightCols(H) * h_prev;

    auto gates = trace.gates.col(t);
    for (Eigen::Index k = 0; k < 3 * H; ++k) gates(k) = sigmoid(z(k));
    for (Eigen::Index k = 3 * H; k < 4 * H; ++k) gates(k) = std::tanh(z(k));

    auto c = trace.cells.col(t);
    c = gates.segment(H, H).cwiseProduct(c_prev) +
        gates.segment(0, H).cwiseProduct(gates.segment(3 * H, H));
    trace.hidden.col(t) =
        gates.segment(2 * H, H).cwiseProduct(c.array().tanh().matrix());
    h_prev = trace.hidden.col(t);
    c_prev = c;
  }
  return trace;
}

Eigen::MatrixXd lstm_backward(const LstmParams& p, const LstmTrace& trace,
                              const Eigen::MatrixXd& d_hidden, LstmParams& grad) {
  const Eigen::Index H = p.hidden();
  const Eigen::Index D = p.input_dim();
  const Eigen::Index T = trace.length();
  if (T == 0) return Eigen::MatrixXd::Zero(D, 0);

  Eigen::MatrixXd dz(4 * H, T);
  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(H);
  const Eigen::VectorXd zero_cell = Eigen::VectorXd::Zero(H);

  for (Eigen::Index step = T - 1; step >= 0; --step) {
    const Eigen::Index t = trace.reverse ? T - 1 - step : step;
    const Eigen::Index prev = trace.reverse ? t + 1 : t - 1;
    const bool has_prev = step > 0;

    const auto gates = trace.gates.col(t);
    const auto i = gates.segment(0, H).array();
    const auto f = gates.segment(H, H).array();
    const auto o = gates.segment(2 * H, H).array();
    const auto g = gates.segment(3 * H, H).array();
    const Eigen::ArrayXd tanh_c = trace.cells.col(t).array().tanh();
    const Eigen::ArrayXd c_prev =
        has_prev ? Eigen::ArrayXd(trace.cells.col(prev)) : Eigen::ArrayXd(zero_cell);

    const Eigen::ArrayXd dh = d_hidden.col(t).array() + dh_next.array();
    const Eigen::ArrayXd dc = dc_next.array() + dh * o * (1.0 - tanh_c.square());

    auto dzt = dz.col(t);
    dzt.segment(0, H) = (dc * g * i * (1.0 - i)).matrix();
    dzt.segment(H, H) = (dc * c_prev * f * (1.0 - f)).matrix();
    dzt.segment(2 * H, H) = (dh * tanh_c * o * (1.0 - o)).matrix();
    dzt.segment(3 * H, H) = (dc * i * (1.0 - g.square())).matrix();

    dc_next = (dc * f).matrix();
    dh_next.noalias() = p.weights.rightCols(H).transpose() * dzt;
  }

  grad.weights.noalias() += dz * trace.inputs.transpose();
  grad.bias.col(0) += dz.rowwise().sum();
  return p.weights.leftCols(D).transpose() * dz;
}

}  // namespace xner
