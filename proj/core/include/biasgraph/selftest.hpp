#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "biasgraph/graph_process.hpp"

namespace biasgraph {

/// A small explicit graph state (n <= 8) for distribution checks.
struct Fixture {
  std::string name;
  std::uint32_t n = 0;
  std::vector<std::pair<vertex_t, vertex_t>> edges;
};

/// n=3 empty; n=4 with edge 01; n=6 with path 0-1-2-3 (all three strata
/// populated).
std::vector<Fixture> standard_fixtures();

/// Probability of each missing pair, by direct enumeration of the pair
/// weights of the model (uniform when every weight is zero).
std::vector<std::pair<VertexPair, double>>
brute_force_distribution(const ModelSpec &model, const Fixture &fixture);

struct SelftestResult {
  std::string fixture;
  ModelSpec model;
  std::uint64_t draws = 0;
  double chi_square = 0.0;
  unsigned dof = 0;
  double p_value = 1.0;
  bool pass = false;
  std::vector<VertexPair> pairs;
  std::vector<double> expected;
  std::vector<std::uint64_t> observed;
};

inline constexpr double kSelftestPValue = 0.001;
inline constexpr std::uint64_t kMinSelftestDraws = 1000;

/// Draws `draws` edges from the fixture state (never applying them) and
/// runs a chi-square goodness-of-fit test against brute_force_distribution.
/// Ordered-pair models count only non-skipped draws. Passes iff
/// p > 0.001 and nothing lands on a zero-probability pair.
SelftestResult sampler_selftest(const ModelSpec &model, const Fixture &fixture,
                                std::uint64_t draws, std::uint64_t seed);

/// Upper-tail probability of the chi-square distribution.
double chi_square_p_value(double statistic, unsigned dof);

} // namespace biasgraph
