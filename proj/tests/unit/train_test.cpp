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

#include <cmath>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "shdh/synthetic.hpp"
#include "shdh/train.hpp"

namespace shdh {
namespace {

using testing::error_of;

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (const double x : row) m(r, c++) = x;
    ++r;
  }
  return m;
}

const SegmentLayout& one_bit() {
  static const SegmentLayout layout = segment_layout(1, 2);
  return layout;
}

TEST(Loss, ScalarExamples) {
  EXPECT_EQ(loss(mat({{1}}), mat({{1}}), one_bit(), 1.0), -1.0);
  EXPECT_EQ(loss(mat({{0}}), mat({{1}}), one_bit(), 1.0), 1.0);
  const LossParts p = loss_parts(mat({{2}}), mat({{1}}), one_bit(), 0.5);
  EXPECT_EQ(p.fit, 9.0);
  EXPECT_EQ(p.trace, 4.0);
  EXPECT_EQ(p.total, 7.0);
}

TEST(Loss, ExactSolutionHasZeroResidual) {
  const auto layout = segment_layout(2, 2);
  const Eigen::MatrixXd h = mat({{1, 1}, {1, 1}, {1, -1}});
  const Eigen::MatrixXd s = mat({{1, 1, 0}, {1, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(loss(h, s, layout, 0.0), 0.0);
}

TEST(Loss, ShapeAndFinitenessChecks) {
  const auto layout = segment_layout(2, 2);
  EXPECT_EQ(error_of([&] { loss(mat({{1, 1}}), mat({{1, 0}, {0, 1}}), layout, 1); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(error_of([&] { loss(mat({{1, 1, 1}}), mat({{1}}), layout, 1); }), ErrorCode::kShapeMismatch);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(error_of([&] { loss(mat({{1, nan}}), mat({{1}}), layout, 1); }), ErrorCode::kNonFiniteInput);
  EXPECT_EQ(error_of([&] { loss_gradient(mat({{1, 1}}), mat({{nan}}), layout, 1); }), ErrorCode::kNonFiniteInput);
}

TEST(Loss, InvariantUnderSimultaneousPermutation) {
  Rng rng(17);
  for (int t = 0; t < 10; ++t) {
    auto inst = testing::random_loss_instance(rng, 7, 10, 3);
    Eigen::PermutationMatrix<Eigen::Dynamic> p(7);
    p.setIdentity();
    for (int i = 6; i > 0; --i) std::swap(p.indices()[i], p.indices()[static_cast<int>(rng.index(i + 1))]);
    const Eigen::MatrixXd h2 = p * inst.relaxed;
    const Eigen::MatrixXd s2 = p * inst.similarity * p.transpose();
    EXPECT_NEAR(loss(h2, s2, inst.layout, inst.alpha), loss(inst.relaxed, inst.similarity, inst.layout, inst.alpha),
                1e-9 * std::abs(loss(inst.relaxed, inst.similarity, inst.layout, inst.alpha)));
  }
}

TEST(LossGradient, ScalarExamples) {
  EXPECT_EQ(loss_gradient(mat({{1}}), mat({{1}}), one_bit(), 1.0)(0, 0), -2.0);
  for (const double h : {-1.3, -0.2, 0.0, 0.7, 2.5}) {
    EXPECT_NEAR(loss_gradient(mat({{h}}), mat({{1}}), one_bit(), 1.0)(0, 0), 4 * (h * h - 1) * h - 2 * h, 1e-12);
  }
  const Eigen::MatrixXd fd = finite_diff_gradient(mat({{1}}), mat({{1}}), one_bit(), 1.0, 1e-4);
  EXPECT_NEAR(fd(0, 0), -2.0, 1e-7);
}

TEST(LossGradient, ZeroAtOriginWithoutTraceTerm) {
  Rng rng(1);
  auto inst = testing::random_loss_instance(rng, 5, 9, 4);
  const Eigen::MatrixXd g = loss_gradient(Eigen::MatrixXd::Zero(5, inst.layout.bits()), inst.similarity, inst.layout, 0.0);
  EXPECT_EQ(g.cwiseAbs().maxCoeff(), 0.0);
}

TEST(LossGradient, MatchesFiniteDifferences) {
  Rng rng(2024);
  {
    auto inst = testing::random_loss_instance(rng, 6, 9, 4);
    const auto g = loss_gradient(inst.relaxed, inst.similarity, inst.layout, inst.alpha);
    const auto fd = finite_diff_gradient(inst.relaxed, inst.similarity, inst.layout, inst.alpha, 1e-4);
    EXPECT_LT(testing::max_relative_error(g, fd), 1e-5);
  }
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + static_cast<int>(rng.index(8));
    const int bits = 1 + static_cast<int>(rng.index(12));
    const int height = 2 + static_cast<int>(rng.index(3));
    auto inst = testing::random_loss_instance(rng, n, bits, height);
    const auto g = loss_gradient(inst.relaxed, inst.similarity, inst.layout, inst.alpha);
    const auto fd = finite_diff_gradient(inst.relaxed, inst.similarity, inst.layout, inst.alpha, 1e-4);
    EXPECT_LT(testing::max_relative_error(g, fd), 1e-5) << "instance " << t;
  }
}

TEST(FiniteDiff, SecondOrderAccuracy) {
  // J(h) = (h^2 - 1)^2 - h^2 with a non-vanishing third derivative at h = 0.8.
  const Eigen::MatrixXd h = mat({{0.8}});
  const double exact = loss_gradient(h, mat({{1}}), one_bit(), 1.0)(0, 0);
  const double e1 = std::abs(finite_diff_gradient(h, mat({{1}}), one_bit(), 1.0, 1e-2)(0, 0) - exact);
  const double e2 = std::abs(finite_diff_gradient(h, mat({{1}}), one_bit(), 1.0, 5e-3)(0, 0) - exact);
  EXPECT_NEAR(e1 / e2, 4.0, 0.05);
  EXPECT_EQ(error_of([&] { finite_diff_gradient(h, mat({{1}}), one_bit(), 1.0, 0.0); }), ErrorCode::kInvalidArgument);
}

TEST(ModelGradient, MatchesFiniteDifferencesThroughNetwork) {
  Rng rng(77);
  for (int t = 0; t < 5; ++t) {
    const int height = 2 + t % 3;
    const Taxonomy tax = parse_taxonomy(testing::random_taxonomy_text(rng, height, 3, 10));
    const auto layout = segment_layout(4 + t * 2, height);
    const HashModel model = testing::random_network(rng, 5, {6, 7}, layout);
    const int n = 4 + t;
    std::vector<NodeId> labels;
    for (int i = 0; i < n; ++i) labels.push_back(tax.leaves()[rng.index(tax.leaves().size())]);
    const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(n, 5, [&] { return rng.normal(); });
    EXPECT_LT(testing::parameter_gradient_error(model, x, batch_similarity(tax, labels), 1.0, 1e-4), 1e-5);
  }
}

TEST(BackpropStep, HandComputedLinearModel) {
  const Taxonomy tax = parse_taxonomy("r\ta\nr\tb\n");
  const auto layout = segment_layout(2, 2);
  DenseLayer layer{mat({{0.1, 0.2}, {0.3, -0.4}}), Eigen::Vector2d(0.05, 0.0)};
  HashModel model({layer}, layout);
  const Eigen::MatrixXd x = mat({{1, 2}, {-1, 1}});
  const std::vector<NodeId> labels{tax.id_of("a"), tax.id_of("b")};
  TrainConfig config;
  const LossParts parts = backprop_step(model, x, labels, tax, config, 0.01);
  EXPECT_NEAR(parts.total, 15.077025, 1e-12);
  const auto& w = model.layers()[0].weight;
  EXPECT_NEAR(w(0, 0), 0.16984, 1e-14);
  EXPECT_NEAR(w(0, 1), 0.21491, 1e-14);
  EXPECT_NEAR(w(1, 0), 0.33616, 1e-14);
  EXPECT_NEAR(w(1, 1), -0.34868, 1e-14);
  EXPECT_NEAR(model.layers()[0].bias(0), 0.03666, 1e-14);
  EXPECT_NEAR(model.layers()[0].bias(1), 0.02216, 1e-14);
}

TEST(BackpropStep, ZeroStepLeavesModelUnchanged) {
  Rng rng(8);
  const Taxonomy tax = parse_taxonomy(testing::kGarden);
  const HashModel before = testing::random_network(rng, 4, {5, 5}, segment_layout(8, 3));
  HashModel after = before;
  const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(3, 4, [&] { return rng.normal(); });
  const std::vector<NodeId> labels{tax.id_of("rose"), tax.id_of("sun"), tax.id_of("oak")};
  backprop_step(after, x, labels, tax, TrainConfig{}, 0.0);
  EXPECT_TRUE(after == before);
}

TEST(BackpropStep, SatisfiedPairLeavesOnlyTraceTerm) {
  // Two identical items with s = 1 and h A h^T = L: the residual vanishes, so
  // dJ/dH = -2 alpha H A.
  const auto layout = segment_layout(2, 2);
  const Eigen::MatrixXd h = mat({{1, 1}, {1, 1}});
  const Eigen::MatrixXd s = mat({{1, 1}, {1, 1}});
  const Eigen::MatrixXd g = loss_gradient(h, s, layout, 0.75);
  EXPECT_EQ(g, -1.5 * h);
}

TEST(BackpropStep, Validation) {
  const Taxonomy tax = parse_taxonomy(testing::kGarden);
  HashModel model({DenseLayer{mat({{1}, {1}}), Eigen::Vector2d::Zero()}}, segment_layout(2, 3));
  const std::vector<NodeId> one{tax.id_of("rose")};
  EXPECT_EQ(error_of([&] { backprop_step(model, mat({{1}}), one, tax, TrainConfig{}, 0.1); }),
            ErrorCode::kInvalidArgument);
  const std::vector<NodeId> two{tax.id_of("rose"), tax.id_of("sun")};
  EXPECT_EQ(error_of([&] { backprop_step(model, mat({{1}, {2}, {3}}), two, tax, TrainConfig{}, 0.1); }),
            ErrorCode::kShapeMismatch);
}

TEST(Schedule, DecaysEveryTwentyIterations) {
  TrainConfig c;
  EXPECT_EQ(eta_at(c, 0), 0.01);
  EXPECT_EQ(eta_at(c, 19), 0.01);
  EXPECT_NEAR(eta_at(c, 20), 0.01 * 2.0 / 3.0, 1e-18);
  EXPECT_NEAR(eta_at(c, 59), 0.01 * std::pow(2.0 / 3.0, 2), 1e-18);
  EXPECT_NEAR(eta_at(c, 199), 0.01 * std::pow(2.0 / 3.0, 9), 1e-18);
}

TEST(TrainConfig, Validation) {
  auto bad = [](auto mutate) {
    TrainConfig c;
    mutate(c);
    return error_of([&] { c.validate(); });
  };
  EXPECT_EQ(bad([](TrainConfig& c) { c.iterations = 0; }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(bad([](TrainConfig& c) { c.batch = 1; }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(bad([](TrainConfig& c) { c.eta0 = 0; }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(bad([](TrainConfig& c) { c.alpha = -1; }), ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(TrainConfig{}.validate());
}

TEST(BatchSampler, WithoutReplacementAndSeeded) {
  BatchSampler a(5), b(5), c(6);
  for (int t = 0; t < 20; ++t) {
    const auto x = a.sample(50, 20);
    const auto y = b.sample(50, 20);
    EXPECT_EQ(x, y);
    EXPECT_EQ(std::set<std::size_t>(x.begin(), x.end()).size(), 20u);
    for (const auto i : x) EXPECT_LT(i, 50u);
  }
  EXPECT_NE(BatchSampler(5).sample(50, 20), c.sample(50, 20));
  EXPECT_EQ(error_of([&] { a.sample(3, 4); }), ErrorCode::kInvalidArgument);
  auto full = a.sample(10, 10);
  std::sort(full.begin(), full.end());
  std::vector<std::size_t> all(10);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(full, all);
}

struct SmallSet {
  SyntheticData data;
  SegmentLayout layout;
  Architecture arch;
};

SmallSet small_set() {
  SyntheticConfig sc;
  sc.superclasses = 2;
  sc.subclasses = 2;
  sc.dim = 16;
  sc.train = 400;
  sc.query = 10;
  SmallSet s{make_synthetic(sc), segment_layout(16, 3), Architecture{16, {32, 32}, 16}};
  return s;
}

TEST(Train, SingleIterationEqualsOneStep) {
  const SmallSet s = small_set();
  TrainConfig c;
  c.iterations = 1;
  c.eta0 = 1e-6;
  c.seed = 12;
  const TrainResult r = train(s.data.train_features, s.data.train_labels.labels, s.data.taxonomy, s.arch, s.layout, c);

  HashModel manual = init_model(s.arch, s.layout, 12);
  BatchSampler sampler(sampler_seed(12));
  const auto rows = sampler.sample(400, 128);
  std::vector<NodeId> labels;
  for (const auto i : rows) labels.push_back(s.data.train_labels.labels[i]);
  const LossParts parts = backprop_step(manual, gather_rows(s.data.train_features, rows), labels, s.data.taxonomy, c, 1e-6);
  EXPECT_TRUE(r.model == manual);
  ASSERT_EQ(r.log.records.size(), 1u);
  EXPECT_EQ(r.log.records[0].loss.total, parts.total);
  EXPECT_EQ(r.log.records[0].eta, 1e-6);
}

TEST(Train, DeterministicForFixedSeed) {
  const SmallSet s = small_set();
  TrainConfig c;
  c.iterations = 30;
  c.eta0 = 1e-6;
  c.seed = 3;
  const auto a = train(s.data.train_features, s.data.train_labels.labels, s.data.taxonomy, s.arch, s.layout, c);
  const auto b = train(s.data.train_features, s.data.train_labels.labels, s.data.taxonomy, s.arch, s.layout, c);
  EXPECT_TRUE(a.model == b.model);
  EXPECT_EQ(a.log.records, b.log.records);
  EXPECT_EQ(a.log.to_csv(), b.log.to_csv());
  for (std::size_t t = 0; t < a.log.records.size(); ++t) {
    EXPECT_EQ(a.log.records[t].iteration, static_cast<int>(t));
    EXPECT_EQ(a.log.records[t].eta, eta_at(c, static_cast<int>(t)));
  }
}

TEST(Train, LossDecreasesOnSmallSyntheticSet) {
  // Stable step for the raw batch sum at this size; see the divergence test below.
  const SmallSet s = small_set();
  TrainConfig c;
  c.eta0 = 1e-6;
  const auto r = train(s.data.train_features, s.data.train_labels.labels, s.data.taxonomy, s.arch, s.layout, c);
  ASSERT_EQ(r.log.records.size(), 200u);
  // Minibatch losses are noisy; compare the objective on the full set.
  const auto& labels = s.data.train_labels.labels;
  std::vector<std::size_t> all(labels.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const Eigen::MatrixXd x = gather_rows(s.data.train_features, all);
  const Eigen::MatrixXd sim = batch_similarity(s.data.taxonomy, labels);
  const HashModel initial = init_model(s.arch, s.layout, c.seed);
  const double before = loss(forward_batch(initial, x).relaxed(), sim, s.layout, c.alpha);
  const double after = loss(forward_batch(r.model, x).relaxed(), sim, s.layout, c.alpha);
  EXPECT_LT(after, before);
}

TEST(Train, DefaultStepOverflowsAndIsReported) {
  const SmallSet s = small_set();
  EXPECT_EQ(error_of([&] {
              train(s.data.train_features, s.data.train_labels.labels, s.data.taxonomy, s.arch, s.layout, TrainConfig{});
            }),
            ErrorCode::kNonFiniteGradient);
}

TEST(Train, InputValidation) {
  const SmallSet s = small_set();
  TrainConfig c;
  c.iterations = 1;
  const auto& f = s.data.train_features;
  const auto& l = s.data.train_labels.labels;
  EXPECT_EQ(error_of([&] { train(FeatureMatrix(1, 16), std::vector<NodeId>(1, l[0]), s.data.taxonomy, s.arch, s.layout, c); }),
            ErrorCode::kEmptyDataset);
  EXPECT_EQ(error_of([&] { train(f, std::span(l).first(10), s.data.taxonomy, s.arch, s.layout, c); }),
            ErrorCode::kShapeMismatch);
  EXPECT_EQ(error_of([&] { train(f, l, s.data.taxonomy, s.arch, segment_layout(16, 4), c); }),
            ErrorCode::kInvalidArgument);
  std::vector<NodeId> inner(l.begin(), l.end());
  inner[5] = s.data.taxonomy.root();
  EXPECT_EQ(error_of([&] { train(f, inner, s.data.taxonomy, s.arch, s.layout, c); }), ErrorCode::kUnknownLabel);
  EXPECT_EQ(error_of([&] { train(f, l, s.data.taxonomy, Architecture{8, {4}, 16}, s.layout, c); }),
            ErrorCode::kModelFeatureDimMismatch);
}

TEST(TrainLog, CsvFormat) {
  TrainLog log;
  log.records.push_back(TrainRecord{.iteration = 0, .eta = 0.01, .loss = {.fit = 2.5, .trace = 0.5, .total = 2.0}});
  EXPECT_EQ(log.to_csv(), "iteration,eta,J,fit,trace\n0,0.01,2,2.5,0.5\n");
}

}  // namespace
}  // namespace shdh
