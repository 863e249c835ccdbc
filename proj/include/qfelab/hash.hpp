#pragma once

#include <cstdint>
#include <string_view>

namespace qfelab {

// 64-bit avalanche finalizer (splitmix64 output stage).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 29;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 32;
  return z;
}

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t combine64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + kGoldenGamma));
}

// FNV-1a, used for payload fingerprints in transcripts.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace qfelab
