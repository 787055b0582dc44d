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

// Binary artifact formats. All integers are little-endian.
//
//   features  "SHDF" u16 version, u64 n, u32 d, n*d f32 row-major
//   codes     "SHDC" u16 version, layout block, u64 n, n packed codes
//   model     "SHDM" u16 version, u32 layers,
//             per layer: u32 rows, u32 cols, rows*cols f64 W (row-major), rows f64 v,
//             layout block
//
// layout block: u16 L, u8 K, u8 scheme, one u16 width per segment.

#ifndef SHDH_IO_HPP_
#define SHDH_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "shdh/features.hpp"
#include "shdh/index.hpp"
#include "shdh/model.hpp"

namespace shdh {

inline constexpr std::uint16_t kFormatVersion = 1;

/// Throws kFileNotFound or kIoError.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string encode_features(const FeatureMatrix& features);
FeatureMatrix decode_features(std::string_view bytes);

std::string encode_codes(const CodeDatabase& db);
CodeDatabase decode_codes(std::string_view bytes);

std::string encode_model(const HashModel& model);
HashModel decode_model(std::string_view bytes);

/// The 4-byte magic of an artifact, or empty if too short.
std::string_view file_magic(std::string_view bytes);

}  // namespace shdh

#endif  // SHDH_IO_HPP_
