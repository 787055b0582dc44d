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

#ifndef SHDH_FEATURES_HPP_
#define SHDH_FEATURES_HPP_

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace shdh {

/// Row-major n x d matrix of 32-bit feature vectors.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<float> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(data_).subspan(i * cols_, cols_);
  }
  std::span<float> row(std::size_t i) { return std::span<float>(data_).subspan(i * cols_, cols_); }
  std::span<const float> data() const noexcept { return data_; }

  /// Rows `indices` in the given order.
  FeatureMatrix select(std::span<const std::size_t> indices) const {
    FeatureMatrix out(indices.size(), cols_);
    for (std::size_t r = 0; r < indices.size(); ++r) {
      const auto src = row(indices[r]);
      std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

}  // namespace shdh

#endif  // SHDH_FEATURES_HPP_
