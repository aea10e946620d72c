#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "mms/common.hpp"

namespace mms {

// Little-endian buffer codec for snapshot sections. Layout is explicit so
// snapshots are byte-stable across runs and platforms. In hash-only mode
// nothing is buffered; bytes are folded into an FNV-1a digest instead,
// which keeps engine digests cheap for large corpora.
class ByteWriter {
 public:
  enum class Mode { Buffer, HashOnly };

  explicit ByteWriter(Mode mode = Mode::Buffer) : mode_(mode) {}

  void put_raw(const void* data, size_t len) {
    if (mode_ == Mode::HashOnly) {
      hash_ = fnv1a64_bytes(data, len, hash_);
    } else {
      buf_.append(static_cast<const char*>(data), len);
    }
  }

  void put_u8(uint8_t v) { put_raw(&v, 1); }

  void put_u32(uint32_t v) {
    uint8_t b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
    put_raw(b, 4);
  }

  void put_u64(uint64_t v) {
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
    put_raw(b, 8);
  }

  void put_i64(int64_t v) { put_u64(static_cast<uint64_t>(v)); }

  void put_f64(double v) { put_u64(std::bit_cast<uint64_t>(v)); }

  void put_f32(float v) { put_u32(std::bit_cast<uint32_t>(v)); }

  void put_string(std::string_view s) {
    put_u64(s.size());
    put_raw(s.data(), s.size());
  }

  const std::string& bytes() const { return buf_; }
  std::string take() { return std::move(buf_); }
  uint64_t hash() const { return hash_; }

 private:
  Mode mode_;
  std::string buf_;
  uint64_t hash_ = 0xCBF29CE484222325ULL;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  uint8_t get_u8() {
    need(1);
    return static_cast<uint8_t>(data_[pos_++]);
  }

  uint32_t get_u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(get_u8()) << (8 * i);
    return v;
  }

  uint64_t get_u64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(get_u8()) << (8 * i);
    return v;
  }

  int64_t get_i64() { return static_cast<int64_t>(get_u64()); }

  double get_f64() { return std::bit_cast<double>(get_u64()); }

  float get_f32() { return std::bit_cast<float>(get_u32()); }

  std::string get_string() {
    uint64_t n = get_u64();
    need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }

  size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(uint64_t n) {
    if (pos_ + n > data_.size()) {
      fail(ErrorCode::CorruptSnapshot, "snapshot data truncated");
    }
  }

  std::string_view data_;
  size_t pos_ = 0;
};

}  // namespace mms
