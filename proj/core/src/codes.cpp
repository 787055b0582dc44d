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

#include "shdh/codes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shdh/error.hpp"
#include "shdh/hierarchy.hpp"

namespace shdh {

std::string_view scheme_name(Scheme scheme) noexcept {
  return scheme == Scheme::kPaperLiteral ? "paper-literal" : "effective";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "effective") return Scheme::kEffective;
  if (name == "paper-literal") return Scheme::kPaperLiteral;
  throw Error(ErrorCode::kInvalidArgument, "unknown segment scheme '" + std::string(name) +
                                               "' (expected 'effective' or 'paper-literal')");
}

SegmentLayout segment_layout(int bits, int height, Scheme scheme) {
  const LayerWeights weights = layer_weights(height);
  const int first_layer = scheme == Scheme::kPaperLiteral ? 1 : 2;
  const int count = height - first_layer + 1;
  if (bits < count) {
    throw Error(ErrorCode::kCodeTooShort, std::to_string(bits) + " bits cannot hold " +
                                              std::to_string(count) + " segments");
  }
  if (bits > 0xFFFF) {
    throw Error(ErrorCode::kInvalidArgument, "code length above 65535 bits");
  }

  SegmentLayout layout;
  layout.bits_ = bits;
  layout.height_ = height;
  layout.scheme_ = scheme;
  const int base = bits / count;
  int first_bit = 0;
  std::size_t byte_offset = 0;
  for (int s = 0; s < count; ++s) {
    Segment seg;
    seg.layer = first_layer + s;
    seg.width = s + 1 < count ? base : bits - base * (count - 1);
    seg.weight = weights[seg.layer];
    seg.first_bit = first_bit;
    seg.byte_offset = byte_offset;
    seg.byte_count = static_cast<std::size_t>(seg.width + 7) / 8;
    for (std::size_t c = 0; c < seg.byte_count; ++c) {
      const int valid = std::min(8, seg.width - static_cast<int>(c) * 8);
      layout.chunk_segment_.push_back(static_cast<std::size_t>(s));
      layout.chunk_masks_.push_back(static_cast<std::uint8_t>((1u << valid) - 1u));
      // Same per-chunk accumulation as the distance kernels.
      layout.max_distance_ += seg.weight * valid;
    }
    layout.diagonal_.insert(layout.diagonal_.end(), static_cast<std::size_t>(seg.width), seg.weight);
    first_bit += seg.width;
    byte_offset += seg.byte_count;
    layout.segments_.push_back(seg);
  }
  layout.code_bytes_ = byte_offset;
  return layout;
}

namespace {

struct BitAddress {
  std::size_t byte;
  unsigned shift;
};

BitAddress address_of(const SegmentLayout& layout, int bit) {
  for (const Segment& seg : layout.segments()) {
    if (bit < seg.first_bit + seg.width) {
      const int offset = bit - seg.first_bit;
      return {seg.byte_offset + static_cast<std::size_t>(offset / 8), static_cast<unsigned>(offset % 8)};
    }
  }
  throw Error(ErrorCode::kShapeMismatch, "bit index " + std::to_string(bit) + " outside the code");
}

void check_length(std::size_t got, const SegmentLayout& layout) {
  if (got != static_cast<std::size_t>(layout.bits())) {
    throw Error(ErrorCode::kShapeMismatch, "expected " + std::to_string(layout.bits()) +
                                               " code positions, got " + std::to_string(got));
  }
}

}  // namespace

BinaryCode quantize(std::span<const double> relaxed, const SegmentLayout& layout) {
  check_length(relaxed.size(), layout);
  BinaryCode code;
  code.bytes.assign(layout.code_bytes(), 0);
  for (const Segment& seg : layout.segments()) {
    for (int o = 0; o < seg.width; ++o) {
      const double v = relaxed[static_cast<std::size_t>(seg.first_bit + o)];
      if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteInput, "non-finite relaxed code value");
      if (v > 0.0) {
        code.bytes[seg.byte_offset + static_cast<std::size_t>(o / 8)] |=
            static_cast<std::uint8_t>(1u << (o % 8));
      }
    }
  }
  return code;
}

BinaryCode pack(std::span<const std::int8_t> logical, const SegmentLayout& layout) {
  check_length(logical.size(), layout);
  BinaryCode code;
  code.bytes.assign(layout.code_bytes(), 0);
  for (const Segment& seg : layout.segments()) {
    for (int o = 0; o < seg.width; ++o) {
      const std::int8_t v = logical[static_cast<std::size_t>(seg.first_bit + o)];
      if (v != 1 && v != -1) throw Error(ErrorCode::kInvalidArgument, "logical code values must be +1 or -1");
      if (v == 1) {
        code.bytes[seg.byte_offset + static_cast<std::size_t>(o / 8)] |=
            static_cast<std::uint8_t>(1u << (o % 8));
      }
    }
  }
  return code;
}

std::vector<std::int8_t> unpack(std::span<const std::uint8_t> packed, const SegmentLayout& layout) {
  check_code(packed, layout);
  std::vector<std::int8_t> logical(static_cast<std::size_t>(layout.bits()));
  for (const Segment& seg : layout.segments()) {
    for (int o = 0; o < seg.width; ++o) {
      const bool set = (packed[seg.byte_offset + static_cast<std::size_t>(o / 8)] >> (o % 8)) & 1u;
      logical[static_cast<std::size_t>(seg.first_bit + o)] = set ? 1 : -1;
    }
  }
  return logical;
}

int code_bit(std::span<const std::uint8_t> packed, const SegmentLayout& layout, int bit) {
  if (bit < 0 || bit >= layout.bits()) {
    throw Error(ErrorCode::kShapeMismatch, "bit index " + std::to_string(bit) + " outside the code");
  }
  const BitAddress a = address_of(layout, bit);
  return ((packed[a.byte] >> a.shift) & 1u) ? 1 : -1;
}

void check_code(std::span<const std::uint8_t> packed, const SegmentLayout& layout) {
  if (packed.size() != layout.code_bytes()) {
    throw Error(ErrorCode::kLayoutMismatch, "code has " + std::to_string(packed.size()) +
                                                " bytes, layout expects " + std::to_string(layout.code_bytes()));
  }
  for (std::size_t c = 0; c < packed.size(); ++c) {
    if (packed[c] & static_cast<std::uint8_t>(~layout.chunk_mask(c))) {
      throw Error(ErrorCode::kLayoutMismatch, "padding bits set in byte " + std::to_string(c));
    }
  }
}

}  // namespace shdh
