#include "biasgraph/component_tracker.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace biasgraph {

ComponentTracker::ComponentTracker(std::uint32_t n)
    : link_(n, -1), n_(n), num_components_(n), num_isolated_(n), sum_sq_(n) {
  if (n == 0)
    throw std::invalid_argument("ComponentTracker: n must be positive");
  if (n > static_cast<std::uint32_t>(std::numeric_limits<std::int32_t>::max()))
    throw std::invalid_argument("ComponentTracker: n must be below 2^31");
}

void ComponentTracker::check(vertex_t u) const {
  if (u >= n_)
    throw std::out_of_range("vertex " + std::to_string(u) +
                            " out of range for n = " + std::to_string(n_));
}

vertex_t ComponentTracker::find(vertex_t u) {
  check(u);
  for (;;) {
    const std::int32_t p = link_[u];
    if (p < 0)
      return u;
    const std::int32_t g = link_[static_cast<vertex_t>(p)];
    if (g < 0)
      return static_cast<vertex_t>(p);
    link_[u] = g;
    u = static_cast<vertex_t>(g);
  }
}

std::uint32_t ComponentTracker::component_size(vertex_t u) {
  return static_cast<std::uint32_t>(-link_[find(u)]);
}

bool ComponentTracker::unite(vertex_t u, vertex_t v) {
  vertex_t ru = find(u);
  vertex_t rv = find(v);
  if (ru == rv)
    return false;

  std::uint64_t a = static_cast<std::uint64_t>(-link_[ru]);
  std::uint64_t b = static_cast<std::uint64_t>(-link_[rv]);
  if (a < b) {
    std::swap(ru, rv);
    std::swap(a, b);
  }
  link_[rv] = static_cast<std::int32_t>(ru);
  link_[ru] = -static_cast<std::int32_t>(a + b);

  sum_sq_ += 2 * a * b;
  --num_components_;
  num_isolated_ -= (a == 1) + (b == 1);
  num_size2_ -= (a == 2) + (b == 2);
  num_size2_ += (a + b == 2);
  if (a + b > largest_)
    largest_ = static_cast<std::uint32_t>(a + b);
  return true;
}

Snapshot ComponentTracker::observables(std::uint64_t m) const {
  const double n = n_;
  Snapshot s;
  s.m = m;
  s.t_g = 2.0 * static_cast<double>(m) / n;
  s.t_c = n_ > 1 ? 2.0 * static_cast<double>(m) / (n * std::log(n))
                 : std::numeric_limits<double>::quiet_NaN();
  s.isolated_fraction = static_cast<double>(num_isolated_) / n;
  s.size2_fraction = 2.0 * static_cast<double>(num_size2_) / n;
  s.susceptibility = static_cast<double>(sum_sq_) / n;
  s.largest_fraction = static_cast<double>(largest_) / n;
  s.num_components = num_components_;
  return s;
}

} // namespace biasgraph
