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

#include "shdh/error.hpp"

namespace shdh {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kFileNotFound: return "FILE_NOT_FOUND";
    case ErrorCode::kIoError: return "IO_ERROR";
    case ErrorCode::kBadFormat: return "BAD_FORMAT";
    case ErrorCode::kEmptyInput: return "EMPTY_INPUT";
    case ErrorCode::kDuplicateEdge: return "DUPLICATE_EDGE";
    case ErrorCode::kMultipleParents: return "MULTIPLE_PARENTS";
    case ErrorCode::kCycleDetected: return "CYCLE_DETECTED";
    case ErrorCode::kMultipleRoots: return "MULTIPLE_ROOTS";
    case ErrorCode::kRaggedLeafDepth: return "RAGGED_LEAF_DEPTH";
    case ErrorCode::kUnknownLabel: return "UNKNOWN_LABEL";
    case ErrorCode::kLayerOutOfRange: return "LAYER_OUT_OF_RANGE";
    case ErrorCode::kHeightTooSmall: return "HEIGHT_TOO_SMALL";
    case ErrorCode::kMatrixTooLarge: return "MATRIX_TOO_LARGE";
    case ErrorCode::kCodeTooShort: return "CODE_TOO_SHORT";
    case ErrorCode::kShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::kNonFiniteInput: return "NON_FINITE_INPUT";
    case ErrorCode::kModelFeatureDimMismatch: return "MODEL_FEATURE_DIM_MISMATCH";
    case ErrorCode::kNonFiniteGradient: return "NON_FINITE_GRADIENT";
    case ErrorCode::kEmptyDataset: return "EMPTY_DATASET";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kLayoutMismatch: return "LAYOUT_MISMATCH";
    case ErrorCode::kEmptyDatabase: return "EMPTY_DATABASE";
    case ErrorCode::kUnknownQueryId: return "UNKNOWN_QUERY_ID";
    case ErrorCode::kRankTooLarge: return "RANK_TOO_LARGE";
    case ErrorCode::kIdealMismatch: return "IDEAL_MISMATCH";
    case ErrorCode::kZeroTotalRelevance: return "ZERO_TOTAL_RELEVANCE";
  }
  return "UNKNOWN";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kFileNotFound:
    case ErrorCode::kIoError:
    case ErrorCode::kBadFormat:
    case ErrorCode::kEmptyInput:
      return 2;
    case ErrorCode::kNonFiniteGradient:
      return 4;
    default:
      return 3;
  }
}

}  // namespace shdh
