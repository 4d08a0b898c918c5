#pragma once

#include <cstdint>
#include <span>

namespace stylo {

// Read-only view of a fused vector: a sparse block (ascending indices) logically
// followed by a dense block. Distances are accumulated in ascending logical
// index: the sparse block first, then the dense block.
struct FusedView {
  std::span<const std::uint32_t> sparse_indices;
  std::span<const double> sparse_values;
  std::span<const double> dense;
};

}  // namespace stylo
