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

#include <gtest/gtest.h>

#include <numeric>

#include "fixtures.hpp"
#include "shdh/codes.hpp"

namespace shdh {
namespace {

using testing::error_of;

std::vector<int> widths(const SegmentLayout& layout) {
  std::vector<int> w;
  for (const Segment& s : layout.segments()) w.push_back(s.width);
  return w;
}

std::vector<double> weights(const SegmentLayout& layout) {
  std::vector<double> w;
  for (const Segment& s : layout.segments()) w.push_back(s.weight);
  return w;
}

TEST(SegmentLayout, SizingExamples) {
  const auto lit = segment_layout(32, 3, Scheme::kPaperLiteral);
  EXPECT_EQ(widths(lit), (std::vector<int>{10, 10, 12}));
  EXPECT_EQ(weights(lit), (std::vector<double>{0.0, 2.0 / 3.0, 1.0 / 3.0}));
  const auto eff = segment_layout(32, 3, Scheme::kEffective);
  EXPECT_EQ(widths(eff), (std::vector<int>{16, 16}));
  EXPECT_EQ(weights(eff), (std::vector<double>{2.0 / 3.0, 1.0 / 3.0}));
  EXPECT_EQ(widths(segment_layout(64, 4, Scheme::kPaperLiteral)), (std::vector<int>{16, 16, 16, 16}));
  EXPECT_EQ(segment_layout(32, 3).scheme(), Scheme::kEffective);
}

TEST(SegmentLayout, Preconditions) {
  EXPECT_EQ(error_of([] { segment_layout(3, 4, Scheme::kPaperLiteral); }), ErrorCode::kCodeTooShort);
  EXPECT_EQ(segment_layout(3, 4, Scheme::kEffective).segments().size(), 3u);
  EXPECT_EQ(error_of([] { segment_layout(2, 4, Scheme::kEffective); }), ErrorCode::kCodeTooShort);
  EXPECT_EQ(error_of([] { segment_layout(32, 1); }), ErrorCode::kHeightTooSmall);
  EXPECT_EQ(error_of([] { segment_layout(70000, 3); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(segment_layout(1, 2).bits(), 1);
}

TEST(SegmentLayout, InvariantsAcrossSizes) {
  for (int k = 2; k <= 8; ++k) {
    const auto w = layer_weights(k);
    for (const Scheme scheme : {Scheme::kEffective, Scheme::kPaperLiteral}) {
      for (int bits = k; bits <= 130; bits += 7) {
        const auto layout = segment_layout(bits, k, scheme);
        const auto ws = widths(layout);
        EXPECT_EQ(std::accumulate(ws.begin(), ws.end(), 0), bits);
        EXPECT_EQ(static_cast<int>(ws.size()), scheme == Scheme::kEffective ? k - 1 : k);
        std::size_t bytes = 0;
        for (const Segment& s : layout.segments()) {
          EXPECT_GE(s.width, 1);
          EXPECT_EQ(s.weight, w[s.layer]);
          EXPECT_EQ(s.byte_offset, bytes);
          bytes += s.byte_count;
          for (int o = 0; o < s.width; ++o) {
            EXPECT_EQ(layout.diagonal()[static_cast<std::size_t>(s.first_bit + o)], s.weight);
          }
        }
        EXPECT_EQ(layout.code_bytes(), bytes);
        EXPECT_EQ(layout.diagonal().size(), static_cast<std::size_t>(bits));
      }
    }
  }
}

TEST(Quantize, HandExample) {
  const auto layout = segment_layout(4, 2);
  const std::vector<double> relaxed{0.2, -0.1, 0.0, 3.0};
  const BinaryCode code = quantize(relaxed, layout);
  ASSERT_EQ(code.bytes.size(), 1u);
  EXPECT_EQ(code.bytes[0], 0b00001001);
  EXPECT_EQ(unpack(code.bytes, layout), (std::vector<std::int8_t>{1, -1, -1, 1}));
}

TEST(Quantize, SignConventions) {
  const auto layout = segment_layout(33, 3);
  const std::vector<double> pos(33, 0.5), zero(33, 0.0), negzero(33, -0.0);
  for (const auto b : unpack(quantize(pos, layout).bytes, layout)) EXPECT_EQ(b, 1);
  for (const auto b : unpack(quantize(zero, layout).bytes, layout)) EXPECT_EQ(b, -1);
  for (const auto byte : quantize(zero, layout).bytes) EXPECT_EQ(byte, 0);
  EXPECT_EQ(quantize(negzero, layout), quantize(zero, layout));
  const std::vector<double> denorm(33, 5e-324);
  for (const auto b : unpack(quantize(denorm, layout).bytes, layout)) EXPECT_EQ(b, 1);
}

TEST(Quantize, NegationFlipsEveryBit) {
  Rng rng(5);
  const auto layout = segment_layout(48, 4);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(48), neg(48);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = rng.normal();
      neg[i] = -v[i];
    }
    const auto a = unpack(quantize(v, layout).bytes, layout);
    const auto b = unpack(quantize(neg, layout).bytes, layout);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], -b[i]);
  }
}

TEST(Quantize, Errors) {
  const auto layout = segment_layout(4, 2);
  EXPECT_EQ(error_of([&] { quantize(std::vector<double>{1, 2, 3}, layout); }), ErrorCode::kShapeMismatch);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(error_of([&] { quantize(std::vector<double>{1, nan, 3, 4}, layout); }), ErrorCode::kNonFiniteInput);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(error_of([&] { quantize(std::vector<double>{inf, 0, 3, 4}, layout); }), ErrorCode::kNonFiniteInput);
}

TEST(Pack, RoundTripAndPaddingStaysZero) {
  Rng rng(9);
  for (const int bits : {8, 31, 32, 33, 48, 64, 128}) {
    for (const int k : {2, 3, 4}) {
      for (const Scheme scheme : {Scheme::kEffective, Scheme::kPaperLiteral}) {
        const auto layout = segment_layout(bits, k, scheme);
        for (int t = 0; t < 25; ++t) {
          const auto logical = testing::random_logical(rng, bits);
          const BinaryCode code = pack(logical, layout);
          ASSERT_EQ(code.bytes.size(), layout.code_bytes());
          EXPECT_NO_THROW(check_code(code.bytes, layout));
          EXPECT_EQ(unpack(code.bytes, layout), logical);
          for (int i = 0; i < bits; ++i) EXPECT_EQ(code_bit(code.bytes, layout, i), logical[static_cast<std::size_t>(i)]);
        }
      }
    }
  }
}

TEST(Pack, SegmentMajorByteAlignedLayout) {
  // Two 6-bit segments, each padded to its own byte.
  const auto layout = segment_layout(12, 3, Scheme::kEffective);
  ASSERT_EQ(widths(layout), (std::vector<int>{6, 6}));
  std::vector<std::int8_t> logical(12, -1);
  logical[0] = 1;
  logical[6] = 1;
  logical[11] = 1;
  const BinaryCode code = pack(logical, layout);
  EXPECT_EQ(code.bytes, (std::vector<std::uint8_t>{0b000001, 0b100001}));
}

TEST(Pack, RejectsBadInput) {
  const auto layout = segment_layout(10, 2);
  EXPECT_EQ(error_of([&] { pack(std::vector<std::int8_t>(10, 0), layout); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_of([&] { pack(std::vector<std::int8_t>(9, 1), layout); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(error_of([&] { unpack(std::vector<std::uint8_t>{0xFF, 0xFF}, layout); }), ErrorCode::kLayoutMismatch);
  EXPECT_EQ(error_of([&] { unpack(std::vector<std::uint8_t>{0xFF}, layout); }), ErrorCode::kLayoutMismatch);
  EXPECT_NO_THROW(unpack(std::vector<std::uint8_t>{0xFF, 0x03}, layout));
  EXPECT_EQ(error_of([&] { code_bit(std::vector<std::uint8_t>{0, 0}, layout, 10); }), ErrorCode::kShapeMismatch);
}

TEST(Scheme, Names) {
  EXPECT_EQ(parse_scheme("effective"), Scheme::kEffective);
  EXPECT_EQ(parse_scheme("paper-literal"), Scheme::kPaperLiteral);
  EXPECT_EQ(scheme_name(Scheme::kPaperLiteral), "paper-literal");
  EXPECT_EQ(error_of([] { parse_scheme("literal"); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace shdh
