#pragma once

#include <cstdint>
#include <vector>

#include "biasgraph/detail/huge_page_allocator.hpp"

namespace biasgraph {

using vertex_t = std::uint32_t;

/// Observables of a graph state, in both process timescales.
struct Snapshot {
  std::uint64_t m = 0;            ///< edges added
  double t_g = 0.0;               ///< 2m / n
  double t_c = 0.0;               ///< 2m / (n ln n); NaN for n = 1
  double isolated_fraction = 0.0; ///< I  = |C1| / n
  double size2_fraction = 0.0;    ///< I2 = 2|C2| / n
  double susceptibility = 0.0;    ///< S  = sum |C|^2 / n
  double largest_fraction = 0.0;
  std::uint64_t num_components = 0;
};

/// Disjoint-set forest (union by size, path halving) that keeps the
/// component statistics of the graph exactly: component count, the number
/// of size-1 and size-2 components, sum of squared sizes and the largest
/// component size.
class ComponentTracker {
public:
  /// Throws std::invalid_argument for n = 0 or n >= 2^31.
  explicit ComponentTracker(std::uint32_t n);

  /// Merges the components of u and v. Returns false (and changes nothing)
  /// if they were already connected.
  bool unite(vertex_t u, vertex_t v);

  vertex_t find(vertex_t u);

  /// Size of the component containing u.
  std::uint32_t component_size(vertex_t u);

  std::uint32_t n() const noexcept { return n_; }
  std::uint64_t num_components() const noexcept { return num_components_; }
  std::uint64_t num_isolated() const noexcept { return num_isolated_; }
  std::uint64_t num_size2() const noexcept { return num_size2_; }
  std::uint64_t sum_sq() const noexcept { return sum_sq_; }
  std::uint32_t largest() const noexcept { return largest_; }

  Snapshot observables(std::uint64_t m) const;

  /// Cache hint for a later find(u); no bounds check.
  void prefetch(vertex_t u) const noexcept { __builtin_prefetch(link_.data() + u); }

private:
  void check(vertex_t u) const;

  // Parent of a non-root vertex, or -size at a root: four bytes per vertex
  // keeps large forests cache resident.
  std::vector<std::int32_t, detail::HugePageAllocator<std::int32_t>> link_;
  std::uint32_t n_;
  std::uint64_t num_components_;
  std::uint64_t num_isolated_;
  std::uint64_t num_size2_ = 0;
  std::uint64_t sum_sq_;
  std::uint32_t largest_ = 1;
};

} // namespace biasgraph
