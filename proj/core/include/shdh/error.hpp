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

#ifndef SHDH_ERROR_HPP_
#define SHDH_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace shdh {

enum class ErrorCode {
  // Input / file layer.
  kFileNotFound,
  kIoError,
  kBadFormat,
  kEmptyInput,
  // Taxonomy structure.
  kDuplicateEdge,
  kMultipleParents,
  kCycleDetected,
  kMultipleRoots,
  kRaggedLeafDepth,
  kUnknownLabel,
  kLayerOutOfRange,
  kHeightTooSmall,
  kMatrixTooLarge,
  // Codes / model.
  kCodeTooShort,
  kShapeMismatch,
  kNonFiniteInput,
  kModelFeatureDimMismatch,
  // Training.
  kNonFiniteGradient,
  kEmptyDataset,
  kInvalidArgument,
  // Index.
  kLayoutMismatch,
  kEmptyDatabase,
  kUnknownQueryId,
  // Metrics.
  kRankTooLarge,
  kIdealMismatch,
  kZeroTotalRelevance,
};

/// Upper-snake name used in machine-readable error lines, e.g. "CODE_TOO_SHORT".
std::string_view error_name(ErrorCode code) noexcept;

/// Process exit code for the CLI: 2 input/file, 3 validation, 4 numeric.
int exit_code_for(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shdh

#endif  // SHDH_ERROR_HPP_
