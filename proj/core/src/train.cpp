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

#include "shdh/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "format.hpp"
#include "shdh/error.hpp"

namespace shdh {

void TrainConfig::validate() const {
  if (iterations < 1) throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  if (batch < 2) throw Error(ErrorCode::kInvalidArgument, "batch size must be >= 2");
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw Error(ErrorCode::kInvalidArgument, "eta0 must be > 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::kInvalidArgument, "alpha must be >= 0");
  if (decay_every < 1) throw Error(ErrorCode::kInvalidArgument, "decay interval must be >= 1");
  if (!(decay > 0.0)) throw Error(ErrorCode::kInvalidArgument, "decay factor must be > 0");
}

double eta_at(const TrainConfig& config, int iteration) {
  return config.eta0 * std::pow(config.decay, static_cast<double>(iteration / config.decay_every));
}

namespace {

void check_shapes(const Eigen::MatrixXd& relaxed, const Eigen::MatrixXd& similarity, const SegmentLayout& layout) {
  if (relaxed.cols() != layout.bits()) {
    throw Error(ErrorCode::kShapeMismatch, "relaxed codes have " + std::to_string(relaxed.cols()) +
                                               " columns, layout has " + std::to_string(layout.bits()) + " bits");
  }
  if (similarity.rows() != relaxed.rows() || similarity.cols() != relaxed.rows()) {
    throw Error(ErrorCode::kShapeMismatch, "similarity matrix must be " + std::to_string(relaxed.rows()) +
                                               " x " + std::to_string(relaxed.rows()));
  }
  if (!relaxed.allFinite() || !similarity.allFinite()) {
    throw Error(ErrorCode::kNonFiniteInput, "non-finite relaxed codes or similarities");
  }
}

Eigen::Map<const Eigen::VectorXd> diagonal_of(const SegmentLayout& layout) {
  const auto d = layout.diagonal();
  return Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
}

}  // namespace

LossParts loss_parts(const Eigen::MatrixXd& relaxed, const Eigen::MatrixXd& similarity,
                     const SegmentLayout& layout, double alpha) {
  check_shapes(relaxed, similarity, layout);
  const Eigen::MatrixXd weighted = relaxed * diagonal_of(layout).asDiagonal();
  const Eigen::MatrixXd gram = weighted * relaxed.transpose();
  const Eigen::MatrixXd residual = gram - static_cast<double>(layout.bits()) * similarity;
  LossParts parts;
  parts.fit = residual.squaredNorm();
  parts.trace = gram.trace();
  parts.total = parts.fit - alpha * parts.trace;
  return parts;
}

double loss(const Eigen::MatrixXd& relaxed, const Eigen::MatrixXd& similarity, const SegmentLayout& layout,
            double alpha) {
  return loss_parts(relaxed, similarity, layout, alpha).total;
}

Eigen::MatrixXd loss_gradient(const Eigen::MatrixXd& relaxed, const Eigen::MatrixXd& similarity,
                              const SegmentLayout& layout, double alpha) {
  check_shapes(relaxed, similarity, layout);
  const Eigen::MatrixXd weighted = relaxed * diagonal_of(layout).asDiagonal();
  const Eigen::MatrixXd residual =
      weighted * relaxed.transpose() - static_cast<double>(layout.bits()) * similarity;
  return 4.0 * residual * weighted - 2.0 * alpha * weighted;
}

Eigen::MatrixXd finite_diff_gradient(const Eigen::MatrixXd& relaxed, const Eigen::MatrixXd& similarity,
                                     const SegmentLayout& layout, double alpha, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "finite-difference step must be > 0");
  check_shapes(relaxed, similarity, layout);
  Eigen::MatrixXd grad(relaxed.rows(), relaxed.cols());
  Eigen::MatrixXd probe = relaxed;
  for (Eigen::Index i = 0; i < relaxed.rows(); ++i) {
    for (Eigen::Index j = 0; j < relaxed.cols(); ++j) {
      const double saved = probe(i, j);
      probe(i, j) = saved + eps;
      const double up = loss(probe, similarity, layout, alpha);
      probe(i, j) = saved - eps;
      const double down = loss(probe, similarity, layout, alpha);
      probe(i, j) = saved;
      grad(i, j) = (up - down) / (2.0 * eps);
    }
  }
  return grad;
}

Eigen::MatrixXd batch_similarity(const Taxonomy& tax, std::span<const NodeId> labels) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i, i) = hier_similarity(tax, labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = hier_similarity(tax, labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(j)]);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

ModelGradient model_gradient(const HashModel& model, const Eigen::MatrixXd& inputs,
                             const Eigen::MatrixXd& similarity, double alpha) {
  const BatchTrace trace = forward_batch(model, inputs);
  if (!trace.relaxed().allFinite()) {
    throw Error(ErrorCode::kNonFiniteGradient, "relaxed codes overflowed; reduce the step size");
  }
  ModelGradient out;
  out.loss = loss_parts(trace.relaxed(), similarity, model.layout(), alpha);
  if (!std::isfinite(out.loss.total)) throw Error(ErrorCode::kNonFiniteGradient, "batch objective overflowed");

  // delta holds dJ/dZ^m for the current layer, rows are batch items. The
  // hashing layer is linear, so it starts as dJ/dH directly.
  Eigen::MatrixXd delta = loss_gradient(trace.relaxed(), similarity, model.layout(), alpha);
  const auto layers = model.layers();
  out.layers.resize(layers.size());
  for (std::size_t m = layers.size(); m-- > 0;) {
    const Eigen::MatrixXd& input = trace.activations[m];
    out.layers[m].weight = delta.transpose() * input;
    out.layers[m].bias = delta.colwise().sum().transpose();
    if (m > 0) {
      // Rectifier mask: f'(z) = 1 where the hidden activation is positive.
      delta = (delta * layers[m].weight).cwiseProduct((input.array() > 0.0).cast<double>().matrix());
    }
  }
  for (const auto& g : out.layers) {
    if (!g.weight.allFinite() || !g.bias.allFinite()) {
      throw Error(ErrorCode::kNonFiniteGradient, "parameter gradient is not finite; reduce the step size");
    }
  }
  return out;
}

LossParts backprop_step(HashModel& model, const Eigen::MatrixXd& inputs, std::span<const NodeId> labels,
                        const Taxonomy& tax, const TrainConfig& config, double eta) {
  if (labels.size() < 2) throw Error(ErrorCode::kInvalidArgument, "a batch needs at least two items");
  if (static_cast<std::size_t>(inputs.rows()) != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "batch has " + std::to_string(inputs.rows()) + " rows but " +
                                               std::to_string(labels.size()) + " labels");
  }
  const Eigen::MatrixXd similarity = batch_similarity(tax, labels);
  const ModelGradient grad = model_gradient(model, inputs, similarity, config.alpha);
  auto layers = model.layers();
  for (std::size_t m = 0; m < layers.size(); ++m) {
    layers[m].weight -= eta * grad.layers[m].weight;
    layers[m].bias -= eta * grad.layers[m].bias;
  }
  return grad.loss;
}

std::vector<std::size_t> BatchSampler::sample(std::size_t population, std::size_t count) {
  if (count > population) {
    throw Error(ErrorCode::kInvalidArgument, "cannot draw " + std::to_string(count) + " items from " +
                                                 std::to_string(population));
  }
  // Partial Fisher-Yates over the index range.
  std::vector<std::size_t> pool(population);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng_.index(population - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

std::uint64_t sampler_seed(std::uint64_t seed) noexcept { return seed ^ 0x9E3779B97F4A7C15ull; }

std::string TrainLog::to_csv() const {
  std::string out = "iteration,eta,J,fit,trace\n";
  for (const auto& r : records) {
    out += std::to_string(r.iteration);
    for (const double v : {r.eta, r.loss.total, r.loss.fit, r.loss.trace}) {
      out += ',';
      out += internal::format_double(v);
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd gather_rows(const FeatureMatrix& features, std::span<const std::size_t> rows) {
  Eigen::MatrixXd batch(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(features.cols()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = features.row(rows[r]);
    for (std::size_t c = 0; c < src.size(); ++c) {
      batch(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = static_cast<double>(src[c]);
    }
  }
  return batch;
}

TrainResult train_from(HashModel initial, const FeatureMatrix& features, std::span<const NodeId> labels,
                       const Taxonomy& tax, const TrainConfig& config) {
  config.validate();
  if (features.rows() < 2) throw Error(ErrorCode::kEmptyDataset, "training needs at least two items");
  if (labels.size() != features.rows()) {
    throw Error(ErrorCode::kShapeMismatch, std::to_string(features.rows()) + " feature rows but " +
                                               std::to_string(labels.size()) + " labels");
  }
  if (features.cols() != initial.input_dim()) {
    throw Error(ErrorCode::kModelFeatureDimMismatch, "features have dimension " + std::to_string(features.cols()) +
                                                         ", model expects " + std::to_string(initial.input_dim()));
  }
  for (const NodeId id : labels) {
    if (!tax.contains(id) || !tax.is_leaf(id)) {
      throw Error(ErrorCode::kUnknownLabel, "training label is not a leaf of the taxonomy");
    }
  }

  TrainResult result{std::move(initial), {}};
  BatchSampler sampler(sampler_seed(config.seed));
  const std::size_t batch = std::min(config.batch, features.rows());
  std::vector<NodeId> batch_labels(batch);
  result.log.records.reserve(static_cast<std::size_t>(config.iterations));
  for (int t = 0; t < config.iterations; ++t) {
    const double eta = eta_at(config, t);
    const std::vector<std::size_t> rows = sampler.sample(features.rows(), batch);
    for (std::size_t i = 0; i < batch; ++i) batch_labels[i] = labels[rows[i]];
    const LossParts parts = backprop_step(result.model, gather_rows(features, rows), batch_labels, tax, config, eta);
    result.log.records.push_back(TrainRecord{.iteration = t, .eta = eta, .loss = parts});
  }
  return result;
}

TrainResult train(const FeatureMatrix& features, std::span<const NodeId> labels, const Taxonomy& tax,
                  const Architecture& arch, const SegmentLayout& layout, const TrainConfig& config) {
  config.validate();
  if (layout.height() != tax.height()) {
    throw Error(ErrorCode::kInvalidArgument, "layout height " + std::to_string(layout.height()) +
                                                 " differs from taxonomy height " + std::to_string(tax.height()));
  }
  return train_from(init_model(arch, layout, config.seed), features, labels, tax, config);
}

}  // namespace shdh
