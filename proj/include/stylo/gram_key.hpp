#pragma once

// Packed 64-bit keys for short character n-grams. A gram of n <= 5 code
// points, each below 4096, packs into (n << 60) | cp0 << 48 | ... | cp4.
// Grams outside that range fall back to their UTF-8 string.

#include <cstdint>
#include <optional>
#include <span>

namespace stylo::gram_key {

inline constexpr int kMaxPackedLength = 5;
inline constexpr char32_t kMaxPackedCodePoint = 0xFFF;

inline std::optional<std::uint64_t> pack(std::span<const char32_t> cps) {
  if (cps.empty() || cps.size() > kMaxPackedLength) return std::nullopt;
  std::uint64_t key = static_cast<std::uint64_t>(cps.size()) << 60;
  int shift = 48;
  for (char32_t c : cps) {
    if (c > kMaxPackedCodePoint) return std::nullopt;
    key |= static_cast<std::uint64_t>(c) << shift;
    shift -= 12;
  }
  return key;
}

}  // namespace stylo::gram_key
