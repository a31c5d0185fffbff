#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace corpusbias {

// 64-bit FNV-1a. Used for content-addressed stage caching and manifest
// hashes, not for anything adversarial.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::string_view s,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(s.data(), s.size(), h);
}

// Streams the file in blocks; throws IoError when unreadable.
std::uint64_t hash_file(const std::filesystem::path& path);

std::string hex64(std::uint64_t v);

}  // namespace corpusbias
