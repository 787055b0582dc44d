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

// Feedforward hash function: rectifier hidden layers followed by a linear
// hashing layer whose width is the code length. The relaxed code is the
// hashing-layer output; sgn of it gives the binary code.

#ifndef SHDH_MODEL_HPP_
#define SHDH_MODEL_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "shdh/codes.hpp"
#include "shdh/features.hpp"
#include "shdh/index.hpp"

namespace shdh {

struct Architecture {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden{512, 512};
  std::size_t output_dim = 0;

  /// Layer count M (hidden layers plus the hashing layer).
  std::size_t layers() const noexcept { return hidden.size() + 1; }
  /// Width e^m of layer m in [0, layers()], e^0 being the input.
  std::size_t width(std::size_t m) const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// W is e^m x e^{m-1}; v has e^m entries.
struct DenseLayer {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

class HashModel {
 public:
  /// Validates that the layer shapes chain from input_dim to layout.bits().
  HashModel(std::vector<DenseLayer> layers, SegmentLayout layout);

  const Architecture& architecture() const noexcept { return arch_; }
  const SegmentLayout& layout() const noexcept { return layout_; }
  std::size_t input_dim() const noexcept { return arch_.input_dim; }

  std::span<const DenseLayer> layers() const noexcept { return layers_; }
  std::span<DenseLayer> layers() noexcept { return layers_; }

  /// Total number of scalar parameters.
  std::size_t parameter_count() const noexcept;

  friend bool operator==(const HashModel& a, const HashModel& b);

 private:
  Architecture arch_;
  SegmentLayout layout_;
  std::vector<DenseLayer> layers_;
};

/// Hidden entries uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)), hashing-layer
/// weights and biases uniform in [0, 0.001). Throws kShapeMismatch when
/// arch.output_dim differs from layout.bits() or a width is zero.
HashModel init_model(const Architecture& arch, const SegmentLayout& layout, std::uint64_t seed);

/// Activations of every layer for one input; activations[0] is the input and
/// activations.back() is the relaxed code.
struct ForwardTrace {
  std::vector<Eigen::VectorXd> activations;

  const Eigen::VectorXd& relaxed() const { return activations.back(); }
};

ForwardTrace forward(const HashModel& model, std::span<const double> x);
ForwardTrace forward(const HashModel& model, std::span<const float> x);

/// Same recursion over a batch held as rows: activations[m] is n x e^m.
struct BatchTrace {
  std::vector<Eigen::MatrixXd> activations;

  const Eigen::MatrixXd& relaxed() const { return activations.back(); }
};

BatchTrace forward_batch(const HashModel& model, const Eigen::MatrixXd& inputs);

/// forward + quantize per row, in input order; item ids are row indices.
CodeDatabase encode_batch(const HashModel& model, const FeatureMatrix& features);

}  // namespace shdh

#endif  // SHDH_MODEL_HPP_
