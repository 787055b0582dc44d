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

#include "shdh/model.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "shdh/error.hpp"
#include "shdh/random.hpp"

namespace shdh {

namespace {

constexpr double kHashInitMax = 0.001;

std::string shape(Eigen::Index r, Eigen::Index c) { return std::to_string(r) + "x" + std::to_string(c); }

}  // namespace

std::size_t Architecture::width(std::size_t m) const {
  if (m == 0) return input_dim;
  if (m <= hidden.size()) return hidden[m - 1];
  if (m == hidden.size() + 1) return output_dim;
  throw Error(ErrorCode::kShapeMismatch, "layer index " + std::to_string(m) + " out of range");
}

HashModel::HashModel(std::vector<DenseLayer> layers, SegmentLayout layout)
    : layout_(std::move(layout)), layers_(std::move(layers)) {
  if (layers_.empty()) throw Error(ErrorCode::kShapeMismatch, "model needs at least one layer");
  arch_.input_dim = static_cast<std::size_t>(layers_.front().weight.cols());
  arch_.hidden.clear();
  for (std::size_t m = 0; m < layers_.size(); ++m) {
    const auto& l = layers_[m];
    if (l.weight.rows() == 0 || l.weight.cols() == 0) throw Error(ErrorCode::kShapeMismatch, "empty layer");
    if (l.bias.size() != l.weight.rows()) {
      throw Error(ErrorCode::kShapeMismatch, "layer " + std::to_string(m + 1) + ": bias length " +
                                                 std::to_string(l.bias.size()) + " vs weight " +
                                                 shape(l.weight.rows(), l.weight.cols()));
    }
    if (m > 0 && l.weight.cols() != layers_[m - 1].weight.rows()) {
      throw Error(ErrorCode::kShapeMismatch, "layer " + std::to_string(m + 1) + " expects " +
                                                 std::to_string(l.weight.cols()) + " inputs, previous layer has " +
                                                 std::to_string(layers_[m - 1].weight.rows()));
    }
    if (m + 1 < layers_.size()) arch_.hidden.push_back(static_cast<std::size_t>(l.weight.rows()));
  }
  arch_.output_dim = static_cast<std::size_t>(layers_.back().weight.rows());
  if (arch_.output_dim != static_cast<std::size_t>(layout_.bits())) {
    throw Error(ErrorCode::kShapeMismatch, "hashing layer has " + std::to_string(arch_.output_dim) +
                                               " units but the code has " + std::to_string(layout_.bits()) +
                                               " bits");
  }
}

std::size_t HashModel::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

bool operator==(const HashModel& a, const HashModel& b) {
  if (!(a.layout_ == b.layout_) || a.layers_.size() != b.layers_.size()) return false;
  for (std::size_t m = 0; m < a.layers_.size(); ++m) {
    const auto& x = a.layers_[m];
    const auto& y = b.layers_[m];
    if (x.weight.rows() != y.weight.rows() || x.weight.cols() != y.weight.cols()) return false;
    if (x.weight != y.weight || x.bias != y.bias) return false;
  }
  return true;
}

HashModel init_model(const Architecture& arch, const SegmentLayout& layout, std::uint64_t seed) {
  if (arch.output_dim != static_cast<std::size_t>(layout.bits())) {
    throw Error(ErrorCode::kShapeMismatch, "architecture output width " + std::to_string(arch.output_dim) +
                                               " differs from code length " + std::to_string(layout.bits()));
  }
  for (std::size_t m = 0; m <= arch.layers(); ++m) {
    if (arch.width(m) == 0) throw Error(ErrorCode::kShapeMismatch, "layer widths must be >= 1");
  }
  Rng rng(seed);
  std::vector<DenseLayer> layers;
  for (std::size_t m = 1; m <= arch.layers(); ++m) {
    const auto rows = static_cast<Eigen::Index>(arch.width(m));
    const auto cols = static_cast<Eigen::Index>(arch.width(m - 1));
    const bool hashing = m == arch.layers();
    const double lo = hashing ? 0.0 : -1.0 / std::sqrt(static_cast<double>(cols));
    const double hi = hashing ? kHashInitMax : 1.0 / std::sqrt(static_cast<double>(cols));
    DenseLayer layer{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) layer.weight(r, c) = rng.uniform(lo, hi);
    }
    for (Eigen::Index r = 0; r < rows; ++r) layer.bias(r) = rng.uniform(lo, hi);
    layers.push_back(std::move(layer));
  }
  return HashModel(std::move(layers), layout);
}

namespace {

template <typename T>
Eigen::VectorXd to_vector(const HashModel& model, std::span<const T> x) {
  if (x.size() != model.input_dim()) {
    throw Error(ErrorCode::kShapeMismatch, "input has " + std::to_string(x.size()) + " features, model expects " +
                                               std::to_string(model.input_dim()));
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double value = static_cast<double>(x[i]);
    if (!std::isfinite(value)) throw Error(ErrorCode::kNonFiniteInput, "non-finite input feature");
    v(static_cast<Eigen::Index>(i)) = value;
  }
  return v;
}

ForwardTrace run(const HashModel& model, Eigen::VectorXd x) {
  ForwardTrace trace;
  const auto layers = model.layers();
  trace.activations.reserve(layers.size() + 1);
  trace.activations.push_back(std::move(x));
  for (std::size_t m = 0; m < layers.size(); ++m) {
    Eigen::VectorXd z = layers[m].weight * trace.activations.back() + layers[m].bias;
    if (m + 1 < layers.size()) z = z.cwiseMax(0.0);
    trace.activations.push_back(std::move(z));
  }
  return trace;
}

}  // namespace

ForwardTrace forward(const HashModel& model, std::span<const double> x) { return run(model, to_vector(model, x)); }

ForwardTrace forward(const HashModel& model, std::span<const float> x) { return run(model, to_vector(model, x)); }

BatchTrace forward_batch(const HashModel& model, const Eigen::MatrixXd& inputs) {
  if (static_cast<std::size_t>(inputs.cols()) != model.input_dim()) {
    throw Error(ErrorCode::kShapeMismatch, "batch has " + std::to_string(inputs.cols()) +
                                               " features, model expects " + std::to_string(model.input_dim()));
  }
  if (!inputs.allFinite()) throw Error(ErrorCode::kNonFiniteInput, "non-finite input feature");
  BatchTrace trace;
  const auto layers = model.layers();
  trace.activations.reserve(layers.size() + 1);
  trace.activations.push_back(inputs);
  for (std::size_t m = 0; m < layers.size(); ++m) {
    Eigen::MatrixXd z = trace.activations.back() * layers[m].weight.transpose();
    z.rowwise() += layers[m].bias.transpose();
    if (m + 1 < layers.size()) z = z.cwiseMax(0.0);
    trace.activations.push_back(std::move(z));
  }
  return trace;
}

CodeDatabase encode_batch(const HashModel& model, const FeatureMatrix& features) {
  CodeDatabase db(model.layout());
  if (features.empty()) return db;
  if (features.cols() != model.input_dim()) {
    throw Error(ErrorCode::kModelFeatureDimMismatch, "features have dimension " + std::to_string(features.cols()) +
                                                         ", model expects " + std::to_string(model.input_dim()));
  }
  db.reserve(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const ForwardTrace trace = forward(model, features.row(i));
    const auto& out = trace.relaxed();
    db.append(quantize(std::span<const double>(out.data(), static_cast<std::size_t>(out.size())), model.layout()));
  }
  return db;
}

}  // namespace shdh
