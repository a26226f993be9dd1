// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace orqa {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;

constexpr std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v);

// "fnv1a64:<hex>" over the file's bytes.
std::string file_digest(const std::filesystem::path& path);

}  // namespace orqa
