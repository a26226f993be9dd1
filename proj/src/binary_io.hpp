// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "orqa/error.hpp"

namespace orqa::detail {

static_assert(std::endian::native == std::endian::little, "index files are little-endian");

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void bytes(const void* data, std::size_t n) { out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n)); }

  template <typename T>
  void pod(const T& v) {
    bytes(&v, sizeof(T));
  }

  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      auto b = static_cast<std::uint8_t>(v | 0x80);
      pod(b);
      v >>= 7;
    }
    pod(static_cast<std::uint8_t>(v));
  }

  void string(const std::string& s) {
    varint(s.size());
    bytes(s.data(), s.size());
  }

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw Error("truncated index file");
  }

  template <typename T>
  T pod() {
    T v;
    bytes(&v, sizeof(T));
    return v;
  }

  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      auto b = pod<std::uint8_t>();
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if (!(b & 0x80)) return v;
    }
    throw Error("corrupt varint in index file");
  }

  std::string string() {
    auto n = varint();
    if (n > (1ull << 32)) throw Error("corrupt string length in index file");
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

 private:
  std::istream& in_;
};

}  // namespace orqa::detail
