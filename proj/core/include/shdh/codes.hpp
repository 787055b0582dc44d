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

// Segmented code layout and bit packing.
//
// A code of L bits is split into contiguous segments, one per taxonomy layer,
// each carrying that layer's weight. Packed codes store segments back to back,
// each padded to a whole byte; inside a segment bit o lives in byte o / 8 at
// bit position o % 8 (LSB first). Logical +1 is stored as 1, -1 as 0, and
// padding bits are always 0.

#ifndef SHDH_CODES_HPP_
#define SHDH_CODES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace shdh {

enum class Scheme : std::uint8_t {
  /// K-1 segments for layers 2..K; the zero-weight root layer gets no bits.
  kEffective = 0,
  /// K segments for layers 1..K, the first of which has weight zero.
  kPaperLiteral = 1,
};

std::string_view scheme_name(Scheme scheme) noexcept;
/// Accepts "effective" or "paper-literal"; throws kInvalidArgument otherwise.
Scheme parse_scheme(std::string_view name);

struct Segment {
  int layer = 0;             // taxonomy layer k
  int width = 0;             // L_k in bits
  double weight = 0.0;       // u_k
  int first_bit = 0;         // logical offset of the segment in [0, L)
  std::size_t byte_offset = 0;
  std::size_t byte_count = 0;
};

class SegmentLayout {
 public:
  SegmentLayout() = default;

  int bits() const noexcept { return bits_; }
  int height() const noexcept { return height_; }
  Scheme scheme() const noexcept { return scheme_; }
  std::span<const Segment> segments() const noexcept { return segments_; }
  /// Packed size of one code in bytes.
  std::size_t code_bytes() const noexcept { return code_bytes_; }
  /// Diagonal of the weight matrix A: u_k repeated L_k times, length L.
  std::span<const double> diagonal() const noexcept { return diagonal_; }

  /// Largest possible weighted distance, sum_k u_k L_k.
  double max_distance() const noexcept { return max_distance_; }

  /// Segment owning packed byte `chunk`.
  const Segment& segment_of_chunk(std::size_t chunk) const { return segments_[chunk_segment_[chunk]]; }
  /// Mask of valid (non-padding) bits within packed byte `chunk`.
  std::uint8_t chunk_mask(std::size_t chunk) const { return chunk_masks_[chunk]; }

  friend bool operator==(const SegmentLayout& a, const SegmentLayout& b) noexcept {
    return a.bits_ == b.bits_ && a.height_ == b.height_ && a.scheme_ == b.scheme_;
  }

 private:
  friend SegmentLayout segment_layout(int bits, int height, Scheme scheme);

  int bits_ = 0;
  int height_ = 0;
  Scheme scheme_ = Scheme::kEffective;
  std::vector<Segment> segments_;
  std::vector<double> diagonal_;
  std::vector<std::size_t> chunk_segment_;
  std::vector<std::uint8_t> chunk_masks_;
  std::size_t code_bytes_ = 0;
  double max_distance_ = 0.0;
};

/// Sizes segments as floor(L/S) for all but the last, which takes the rest,
/// where S is the segment count of `scheme`. Throws kHeightTooSmall for K < 2
/// and kCodeTooShort when some segment would be empty (L < S).
SegmentLayout segment_layout(int bits, int height, Scheme scheme = Scheme::kEffective);

/// Packed binary code. Compare with operator==; layout is carried separately.
struct BinaryCode {
  std::vector<std::uint8_t> bytes;

  friend bool operator==(const BinaryCode&, const BinaryCode&) = default;
};

/// sgn applied elementwise: value > 0 maps to +1 (bit 1), everything else
/// including 0 maps to -1 (bit 0). Throws kNonFiniteInput, kShapeMismatch.
BinaryCode quantize(std::span<const double> relaxed, const SegmentLayout& layout);

/// Packs a logical +-1 vector of length L.
BinaryCode pack(std::span<const std::int8_t> logical, const SegmentLayout& layout);

/// Inverse of pack().
std::vector<std::int8_t> unpack(std::span<const std::uint8_t> packed, const SegmentLayout& layout);

/// Logical value (+1 or -1) at code position `bit`.
int code_bit(std::span<const std::uint8_t> packed, const SegmentLayout& layout, int bit);

/// Throws kLayoutMismatch unless `packed` has the layout's byte size and all
/// padding bits are zero.
void check_code(std::span<const std::uint8_t> packed, const SegmentLayout& layout);

}  // namespace shdh

#endif  // SHDH_CODES_HPP_
