// Copyright 2026 The SHDH Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fixtures.hpp"
#include "shdh/model.hpp"

namespace shdh {
namespace {

using testing::error_of;

DenseLayer dense(std::initializer_list<std::initializer_list<double>> w, std::initializer_list<double> v) {
  DenseLayer l{Eigen::MatrixXd(static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(w.begin()->size())),
               Eigen::VectorXd(static_cast<Eigen::Index>(v.size()))};
  Eigen::Index r = 0;
  for (const auto& row : w) {
    Eigen::Index c = 0;
    for (const double x : row) l.weight(r, c++) = x;
    ++r;
  }
  Eigen::Index i = 0;
  for (const double x : v) l.bias(i++) = x;
  return l;
}

FeatureMatrix random_features(Rng& rng, std::size_t n, std::size_t d) {
  FeatureMatrix f(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : f.row(i)) x = static_cast<float>(rng.normal());
  }
  return f;
}

TEST(InitModel, DeterministicAndSeedSensitive) {
  const auto layout = segment_layout(16, 3);
  const Architecture arch{8, {12, 10}, 16};
  const HashModel a = init_model(arch, layout, 42);
  const HashModel b = init_model(arch, layout, 42);
  const HashModel c = init_model(arch, layout, 43);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  EXPECT_EQ(a.parameter_count(), 8u * 12 + 12 + 12 * 10 + 10 + 10 * 16 + 16);
  EXPECT_EQ(a.architecture(), arch);
}

TEST(InitModel, ParameterRanges) {
  const auto layout = segment_layout(24, 4);
  const Architecture arch{9, {16, 25}, 24};
  const HashModel m = init_model(arch, layout, 1);
  const auto layers = m.layers();
  ASSERT_EQ(layers.size(), 3u);
  const auto& hash = layers.back();
  EXPECT_GE(hash.weight.minCoeff(), 0.0);
  EXPECT_LT(hash.weight.maxCoeff(), 0.001);
  EXPECT_GE(hash.bias.minCoeff(), 0.0);
  EXPECT_LT(hash.bias.maxCoeff(), 0.001);
  for (std::size_t m2 = 0; m2 + 1 < layers.size(); ++m2) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layers[m2].weight.cols()));
    EXPECT_LE(layers[m2].weight.cwiseAbs().maxCoeff(), bound);
    EXPECT_LE(layers[m2].bias.cwiseAbs().maxCoeff(), bound);
  }
}

TEST(InitModel, ArchitectureMustMatchLayout) {
  const auto layout = segment_layout(16, 3);
  EXPECT_EQ(error_of([&] { init_model(Architecture{8, {4}, 15}, layout, 0); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(error_of([&] { init_model(Architecture{8, {0}, 16}, layout, 0); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(error_of([&] { init_model(Architecture{0, {}, 16}, layout, 0); }), ErrorCode::kShapeMismatch);
}

TEST(HashModel, RejectsBrokenChains) {
  const auto layout = segment_layout(2, 2);
  std::vector<DenseLayer> bad{dense({{1, 2}}, {0}), dense({{1, 1}, {1, 1}}, {0, 0})};
  EXPECT_EQ(error_of([&] { HashModel(bad, layout); }), ErrorCode::kShapeMismatch);
  std::vector<DenseLayer> bias{dense({{1}, {1}}, {0})};
  EXPECT_EQ(error_of([&] { HashModel(bias, layout); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(error_of([&] { HashModel({}, layout); }), ErrorCode::kShapeMismatch);
}

TEST(Forward, AffineAndRectifierExamples) {
  const auto one = segment_layout(1, 2);
  const HashModel affine({dense({{2}}, {1})}, one);
  const std::vector<double> x3{3.0};
  EXPECT_EQ(forward(affine, x3).relaxed()(0), 7.0);

  const HashModel zero({dense({{0, 0}}, {0})}, one);
  EXPECT_EQ(forward(zero, std::vector<double>{4, -2}).relaxed()(0), 0.0);

  const HashModel clamp({dense({{-1}}, {0}), dense({{1}}, {0.5})}, one);
  const auto trace = forward(clamp, std::vector<double>{5.0});
  ASSERT_EQ(trace.activations.size(), 3u);
  EXPECT_EQ(trace.activations[1](0), 0.0);
  EXPECT_EQ(trace.relaxed()(0), 0.5);

  // The hashing layer keeps negative values.
  const HashModel neg({dense({{-1}}, {0})}, one);
  EXPECT_EQ(forward(neg, x3).relaxed()(0), -3.0);
}

TEST(Forward, Errors) {
  const HashModel m({dense({{1, 1}}, {0})}, segment_layout(1, 2));
  EXPECT_EQ(error_of([&] { forward(m, std::vector<double>{1}); }), ErrorCode::kShapeMismatch);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(error_of([&] { forward(m, std::vector<double>{1, nan}); }), ErrorCode::kNonFiniteInput);
  Eigen::MatrixXd batch(1, 2);
  batch << 1, std::numeric_limits<double>::infinity();
  EXPECT_EQ(error_of([&] { forward_batch(m, batch); }), ErrorCode::kNonFiniteInput);
}

TEST(Forward, HiddenActivationsNonnegativeAndBatchAgrees) {
  Rng rng(2);
  const auto layout = segment_layout(12, 3);
  const HashModel m = init_model(Architecture{6, {10, 8}, 12}, layout, 3);
  const FeatureMatrix f = random_features(rng, 20, 6);
  Eigen::MatrixXd batch(20, 6);
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t j = 0; j < 6; ++j) batch(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f.row(i)[j];
  }
  const BatchTrace bt = forward_batch(m, batch);
  for (std::size_t i = 0; i < 20; ++i) {
    const ForwardTrace t = forward(m, f.row(i));
    for (std::size_t l = 1; l + 1 < t.activations.size(); ++l) EXPECT_GE(t.activations[l].minCoeff(), 0.0);
    for (Eigen::Index j = 0; j < 12; ++j) {
      EXPECT_NEAR(t.relaxed()(j), bt.activations.back()(static_cast<Eigen::Index>(i), j), 1e-12);
    }
  }
}

TEST(EncodeBatch, ConsistencyOrderAndEmpty) {
  Rng rng(4);
  const auto layout = segment_layout(20, 3);
  // Negative-range hidden weights so codes are not all +1.
  HashModel m = init_model(Architecture{5, {7}, 20}, layout, 9);
  m.layers()[1].weight = Eigen::MatrixXd::NullaryExpr(20, 7, [&] { return rng.normal(); });
  const FeatureMatrix f = random_features(rng, 15, 5);
  const CodeDatabase db = encode_batch(m, f);
  ASSERT_EQ(db.size(), 15u);
  for (std::size_t i = 0; i < 15; ++i) {
    const auto t = forward(m, f.row(i));
    const BinaryCode expect = quantize(std::span<const double>(t.relaxed().data(), 20), layout);
    EXPECT_TRUE(std::ranges::equal(db.code(i), expect.bytes));
    EXPECT_EQ(db.id(i), i);
  }
  std::vector<std::size_t> perm(15);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  const CodeDatabase rev = encode_batch(m, f.select(perm));
  for (std::size_t i = 0; i < 15; ++i) EXPECT_TRUE(std::ranges::equal(rev.code(i), db.code(perm[i])));

  EXPECT_EQ(encode_batch(m, FeatureMatrix(0, 5)).size(), 0u);
  EXPECT_EQ(encode_batch(m, FeatureMatrix(0, 0)).size(), 0u);
  EXPECT_EQ(error_of([&] { encode_batch(m, FeatureMatrix(2, 4)); }), ErrorCode::kModelFeatureDimMismatch);
}

}  // namespace
}  // namespace shdh
