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

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "xner/lstm.hpp"

namespace xner {
namespace {

LstmParams random_params(std::size_t d, std::size_t h, Rng& rng) {
  LstmParams p = LstmParams::zeros(d, h);
  p.weights = 0.5 * testing::random_gaussian(p.weights.rows(), p.weights.cols(), rng);
  p.bias = 0.5 * testing::random_gaussian(p.bias.rows(), 1, rng);
  return p;
}

double weighted_output(const LstmParams& p, const Eigen::MatrixXd& xs, bool reverse,
                       const Eigen::MatrixXd& weights) {
  return lstm_forward(p, xs, reverse).hidden.cwiseProduct(weights).sum();
}

TEST(Lstm, Shapes) {
  Rng rng(1);
  const auto p = random_params(3, 4, rng);
  EXPECT_EQ(p.hidden(), 4);
  EXPECT_EQ(p.input_dim(), 3);
  const auto trace = lstm_forward(p, testing::random_gaussian(3, 6, rng), false);
  EXPECT_EQ(trace.hidden.rows(), 4);
  EXPECT_EQ(trace.length(), 6);
  EXPECT_EQ(trace.last(), 5);
  EXPECT_EQ(lstm_forward(p, testing::random_gaussian(3, 6, rng), true).last(), 0);
  EXPECT_EQ(lstm_forward(p, Eigen::MatrixXd(3, 0), false).length(), 0);
}

TEST(Lstm, ZeroWeightsGiveKnownState) {
  // All gates sigmoid(0) = 0.5 and candidate tanh(0) = 0: state stays 0.
  const auto p = LstmParams::zeros(2, 3);
  const auto trace = lstm_forward(p, Eigen::MatrixXd::Ones(2, 4), false);
  EXPECT_EQ(trace.hidden.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Lstm, ReverseEqualsForwardOnReversedInput) {
  Rng rng(3);
  const auto p = random_params(2, 3, rng);
  const Eigen::MatrixXd xs = testing::random_gaussian(2, 5, rng);
  const auto fwd = lstm_forward(p, xs.rowwise().reverse(), false);
  const auto rev = lstm_forward(p, xs, true);
  EXPECT_LE((fwd.hidden.rowwise().reverse() - rev.hidden).cwiseAbs().maxCoeff(), 1e-15);
}

class LstmGradient : public ::testing::TestWithParam<bool> {};

TEST_P(LstmGradient, MatchesFiniteDifferences) {
  const bool reverse = GetParam();
  Rng rng(reverse ? 17 : 16);
  const std::size_t d = 3, h = 2;
  auto p = random_params(d, h, rng);
  Eigen::MatrixXd xs = testing::random_gaussian(3, 4, rng);
  const Eigen::MatrixXd w = testing::random_gaussian(2, 4, rng);

  LstmParams grad = LstmParams::zeros(d, h);
  const auto trace = lstm_forward(p, xs, reverse);
  const Eigen::MatrixXd dxs = lstm_backward(p, trace, w, grad);

  const double eps = 1e-6;
  const auto check = [&](Eigen::MatrixXd& target, const Eigen::MatrixXd& analytic) {
    for (Eigen::Index i = 0; i < target.size(); ++i) {
      const double saved = target(i);
      target(i) = saved + eps;
      const double up = weighted_output(p, xs, reverse, w);
      target(i) = saved - eps;
      const double down = weighted_output(p, xs, reverse, w);
      target(i) = saved;
      EXPECT_NEAR(analytic(i), (up - down) / (2 * eps), 1e-7);
    }
  };
  check(p.weights, grad.weights);
  check(p.bias, grad.bias);
  check(xs, dxs);
}

INSTANTIATE_TEST_SUITE_P(Directions, LstmGradient, ::testing::Values(false, true));

}  // namespace
}  // namespace xner
