#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace stylo {

// Deterministic random stream for one named pipeline stage.
//
// Every stochastic step draws from its own stream, seeded from the run seed
// and the stage name, so adding a draw in one stage never perturbs another.
// The engine is std::mt19937_64 (fully specified by the standard) and the
// bounded draws below avoid the implementation-defined std distributions, so
// streams agree across standard libraries.
//
// Stage names in use:
//   "pairs.partition"  document split into construction/evaluation
//   "pairs.positive"   same-author pair sampling
//   "pairs.negative"   different-author pair sampling
//   "pairs.segment"    head/tail choice for negative pairs
//   "imitate.sample"   source documents sampled for imitation runs
class StageRng {
 public:
  StageRng(std::uint64_t seed, std::string_view stage);

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform real in [0, 1) with 53 random bits.
  double unit();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  // k distinct values from [0, n), ascending (Floyd's algorithm).
  std::vector<std::uint64_t> sample_distinct(std::uint64_t n, std::uint64_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace stylo
