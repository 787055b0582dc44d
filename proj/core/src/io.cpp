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

#include "shdh/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>
#include <utility>

#include "shdh/error.hpp"

namespace shdh {

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kFileNotFound, "cannot open '" + path.string() + "'");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failed for '" + path.string() + "'");
  return std::move(buf).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot create '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIoError, "cannot move output into place at '" + path.string() + "'");
  }
}

namespace {

class Writer {
 public:
  void magic(std::string_view m) { out_.append(m); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(std::span<const std::uint8_t> bytes) {
    out_.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  }
  std::string take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string out_;
};

class Reader {
 public:
  Reader(std::string_view bytes, std::string_view what) : bytes_(bytes), what_(what) {}

  void magic(std::string_view expected) {
    if (take(expected.size()) != expected) fail("bad magic, expected '" + std::string(expected) + "'");
  }
  void version() {
    const std::uint16_t v = u16();
    if (v != kFormatVersion) fail("unsupported version " + std::to_string(v));
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string_view take(std::size_t n) {
    if (n > bytes_.size() - pos_) fail("truncated");
    const auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  void finish() {
    if (remaining() != 0) fail(std::to_string(remaining()) + " trailing bytes");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::kBadFormat, std::string(what_) + ": " + msg);
  }

 private:
  std::uint64_t le(int n) {
    const auto b = take(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
  }

  std::string_view bytes_;
  std::string_view what_;
  std::size_t pos_ = 0;
};

void write_layout(Writer& w, const SegmentLayout& layout) {
  w.u16(static_cast<std::uint16_t>(layout.bits()));
  w.u8(static_cast<std::uint8_t>(layout.height()));
  w.u8(static_cast<std::uint8_t>(layout.scheme()));
  for (const Segment& s : layout.segments()) w.u16(static_cast<std::uint16_t>(s.width));
}

SegmentLayout read_layout(Reader& r) {
  const int bits = r.u16();
  const int height = r.u8();
  const std::uint8_t scheme_byte = r.u8();
  if (scheme_byte > 1) r.fail("unknown segment scheme " + std::to_string(scheme_byte));
  SegmentLayout layout;
  try {
    layout = segment_layout(bits, height, static_cast<Scheme>(scheme_byte));
  } catch (const Error& e) {
    r.fail(std::string("invalid layout: ") + e.what());
  }
  for (const Segment& s : layout.segments()) {
    if (r.u16() != s.width) r.fail("segment widths disagree with the sizing rule");
  }
  return layout;
}

}  // namespace

std::string_view file_magic(std::string_view bytes) { return bytes.size() < 4 ? std::string_view{} : bytes.substr(0, 4); }

std::string encode_features(const FeatureMatrix& features) {
  Writer w;
  w.magic("SHDF");
  w.u16(kFormatVersion);
  w.u64(features.rows());
  w.u32(static_cast<std::uint32_t>(features.cols()));
  for (const float v : features.data()) w.f32(v);
  return w.take();
}

FeatureMatrix decode_features(std::string_view bytes) {
  Reader r(bytes, "feature file");
  r.magic("SHDF");
  r.version();
  const std::uint64_t n = r.u64();
  const std::uint32_t d = r.u32();
  if (d == 0 && n != 0) r.fail("zero feature dimension");
  if (d != 0 && n > r.remaining() / 4 / d) r.fail("truncated");
  std::vector<float> data(static_cast<std::size_t>(n) * d);
  for (float& v : data) v = r.f32();
  r.finish();
  return FeatureMatrix(static_cast<std::size_t>(n), d, std::move(data));
}

std::string encode_codes(const CodeDatabase& db) {
  Writer w;
  w.magic("SHDC");
  w.u16(kFormatVersion);
  write_layout(w, db.layout());
  w.u64(db.size());
  w.raw(db.bytes());
  return w.take();
}

CodeDatabase decode_codes(std::string_view bytes) {
  Reader r(bytes, "code file");
  r.magic("SHDC");
  r.version();
  CodeDatabase db(read_layout(r));
  const std::uint64_t n = r.u64();
  const std::size_t stride = db.layout().code_bytes();
  if (n > r.remaining() / stride) r.fail("truncated");
  db.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto chunk = r.take(stride);
    try {
      db.append(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(chunk.data()), stride));
    } catch (const Error& e) {
      r.fail("code " + std::to_string(i) + ": " + e.what());
    }
  }
  r.finish();
  return db;
}

std::string encode_model(const HashModel& model) {
  Writer w;
  w.magic("SHDM");
  w.u16(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(model.layers().size()));
  for (const DenseLayer& layer : model.layers()) {
    w.u32(static_cast<std::uint32_t>(layer.weight.rows()));
    w.u32(static_cast<std::uint32_t>(layer.weight.cols()));
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) w.f64(layer.weight(i, j));
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) w.f64(layer.bias(i));
  }
  write_layout(w, model.layout());
  return w.take();
}

HashModel decode_model(std::string_view bytes) {
  Reader r(bytes, "model file");
  r.magic("SHDM");
  r.version();
  const std::uint32_t count = r.u32();
  if (count == 0) r.fail("no layers");
  std::vector<DenseLayer> layers;
  for (std::uint32_t m = 0; m < count; ++m) {
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    if (rows == 0 || cols == 0) r.fail("empty layer");
    if ((static_cast<std::uint64_t>(rows) * cols + rows) > r.remaining() / 8) r.fail("truncated");
    DenseLayer layer{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
    for (std::uint32_t i = 0; i < rows; ++i) {
      for (std::uint32_t j = 0; j < cols; ++j) layer.weight(i, j) = r.f64();
    }
    for (std::uint32_t i = 0; i < rows; ++i) layer.bias(i) = r.f64();
    layers.push_back(std::move(layer));
  }
  SegmentLayout layout = read_layout(r);
  r.finish();
  try {
    return HashModel(std::move(layers), std::move(layout));
  } catch (const Error& e) {
    r.fail(e.what());
  }
}

}  // namespace shdh
