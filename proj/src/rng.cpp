#include "stylo/rng.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace stylo {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

StageRng::StageRng(std::uint64_t seed, std::string_view stage)
    : engine_(splitmix64(seed ^ fnv1a(stage))) {}

std::uint64_t StageRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("StageRng::below: zero bound");
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double StageRng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::vector<std::uint64_t> StageRng::sample_distinct(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("StageRng::sample_distinct: k > n");
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint64_t j = n - k; j < n; ++j) {
    const std::uint64_t t = below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace stylo
