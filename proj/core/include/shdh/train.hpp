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

// Training of the hash model on relaxed codes.
//
// For a batch of relaxed codes H (n x L), similarities S (n x n) and the
// layout's diagonal weight matrix A, the objective is
//
//   J = ||H A H^T - L S||_F^2 - alpha * tr(H A H^T)
//
// with gradient dJ/dH = 4 (H A H^T - L S) H A - 2 alpha H A. The sign
// function never appears here; quantization belongs to the codes module.

#ifndef SHDH_TRAIN_HPP_
#define SHDH_TRAIN_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shdh/codes.hpp"
#include "shdh/features.hpp"
#include "shdh/hierarchy.hpp"
#include "shdh/model.hpp"
#include "shdh/random.hpp"

namespace shdh {

struct TrainConfig {
  double alpha = 1.0;
  double eta0 = 0.01;
  int iterations = 200;
  std::size_t batch = 128;
  int decay_every = 20;
  double decay = 2.0 / 3.0;
  std::uint64_t seed = 0;

  /// Throws kInvalidArgument unless iterations >= 1, batch >= 2, eta0 > 0,
  /// alpha >= 0.
  void validate() const;
};

/// eta0 * decay^floor(t / decay_every) for 0-based iteration t.
double eta_at(const TrainConfig& config, int iteration);

struct LossParts {
  double fit = 0.0;    // ||H A H^T - L S||_F^2
  double trace = 0.0;  // tr(H A H^T)
  double total = 0.0;  // fit - alpha * trace
};

LossParts loss_parts(const Eigen::MatrixXd& relaxed, const Eigen::MatrixXd& similarity,
                     const SegmentLayout& layout, double alpha);

double loss(const Eigen::MatrixXd& relaxed, const Eigen::MatrixXd& similarity, const SegmentLayout& layout,
            double alpha);

Eigen::MatrixXd loss_gradient(const Eigen::MatrixXd& relaxed, const Eigen::MatrixXd& similarity,
                              const SegmentLayout& layout, double alpha);

/// Central differences of loss() entry by entry; a verification oracle.
Eigen::MatrixXd finite_diff_gradient(const Eigen::MatrixXd& relaxed, const Eigen::MatrixXd& similarity,
                                     const SegmentLayout& layout, double alpha, double eps);

/// Hierarchical similarities of a batch of leaf labels.
Eigen::MatrixXd batch_similarity(const Taxonomy& tax, std::span<const NodeId> labels);

/// dJ/dW and dJ/dv per layer, same shapes as the model's layers.
struct ModelGradient {
  std::vector<DenseLayer> layers;
  LossParts loss;
};

/// Forward pass over `inputs` (rows are items) and backpropagation of the
/// objective through every layer. Throws kNonFiniteGradient on overflow.
ModelGradient model_gradient(const HashModel& model, const Eigen::MatrixXd& inputs,
                             const Eigen::MatrixXd& similarity, double alpha);

/// One SGD update W <- W - eta dJ/dW, v <- v - eta dJ/dv on every layer.
/// Returns the batch objective evaluated before the update. The model is left
/// untouched when kNonFiniteGradient is thrown.
LossParts backprop_step(HashModel& model, const Eigen::MatrixXd& inputs, std::span<const NodeId> labels,
                        const Taxonomy& tax, const TrainConfig& config, double eta);

/// Uniform minibatches: without replacement inside a batch, independent
/// across calls.
class BatchSampler {
 public:
  explicit BatchSampler(std::uint64_t seed) : rng_(seed) {}

  std::vector<std::size_t> sample(std::size_t population, std::size_t count);

 private:
  Rng rng_;
};

/// Seed of the sampler stream used by train() for a given config seed; the
/// initial model uses the config seed itself.
std::uint64_t sampler_seed(std::uint64_t seed) noexcept;

struct TrainRecord {
  int iteration = 0;
  double eta = 0.0;
  LossParts loss;

  friend bool operator==(const TrainRecord& a, const TrainRecord& b) {
    return a.iteration == b.iteration && a.eta == b.eta && a.loss.fit == b.loss.fit &&
           a.loss.trace == b.loss.trace && a.loss.total == b.loss.total;
  }
};

struct TrainLog {
  std::vector<TrainRecord> records;

  /// CSV with header "iteration,eta,J,fit,trace", full round-trip precision.
  std::string to_csv() const;
};

struct TrainResult {
  HashModel model;
  TrainLog log;
};

/// Batch inputs gathered from 32-bit features, in `rows` order.
Eigen::MatrixXd gather_rows(const FeatureMatrix& features, std::span<const std::size_t> rows);

/// Runs config.iterations SGD steps from `initial`.
TrainResult train_from(HashModel initial, const FeatureMatrix& features, std::span<const NodeId> labels,
                       const Taxonomy& tax, const TrainConfig& config);

/// init_model(arch, layout, config.seed) followed by train_from().
TrainResult train(const FeatureMatrix& features, std::span<const NodeId> labels, const Taxonomy& tax,
                  const Architecture& arch, const SegmentLayout& layout, const TrainConfig& config);

}  // namespace shdh

#endif  // SHDH_TRAIN_HPP_
