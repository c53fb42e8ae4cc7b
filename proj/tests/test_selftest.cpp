#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "biasgraph/selftest.hpp"

using namespace biasgraph;

namespace {
Fixture n4_edge01() { return {"n4-edge01", 4, {{0, 1}}}; }
} // namespace

TEST_CASE("brute-force tables") {
  const auto and3 = brute_force_distribution({ModelKind::And, 3.0}, n4_edge01());
  REQUIRE(and3.size() == 5);
  for (const auto &[pair, p] : and3)
    CHECK(p == doctest::Approx(0.2));

  const auto or2 = brute_force_distribution({ModelKind::Or, 2.0}, n4_edge01());
  for (const auto &[pair, p] : or2) {
    if (pair == VertexPair{2, 3})
      CHECK(p == doctest::Approx(1.0 / 9));
    else
      CHECK(p == doctest::Approx(2.0 / 9));
  }

  // Or K=0 on a graph without isolated pairs: all weights zero -> uniform.
  const Fixture paired{"pairs", 4, {{0, 1}, {2, 3}}};
  const auto flat = brute_force_distribution({ModelKind::Or, 0.0}, paired);
  for (const auto &[pair, p] : flat)
    CHECK(p == doctest::Approx(0.25));
}

TEST_CASE("selftest examples") {
  const auto a = sampler_selftest({ModelKind::And, 3.0}, n4_edge01(), 100000, 1);
  CHECK(a.pass);
  CHECK(a.dof == 4);
  const auto o = sampler_selftest({ModelKind::Or, 2.0}, n4_edge01(), 100000, 2);
  CHECK(o.pass);
  const auto u = sampler_selftest({ModelKind::And, 7.0}, {"n3", 3, {}}, 10000, 3);
  CHECK(u.pass);
  for (double e : u.expected)
    CHECK(e == doctest::Approx(1.0 / 3));

  const Fixture paired{"pairs", 4, {{0, 1}, {2, 3}}};
  CHECK(sampler_selftest({ModelKind::Or, 0.0}, paired, 20000, 4).pass);
}

TEST_CASE("selftest rejects bad inputs") {
  CHECK_THROWS_AS(sampler_selftest({ModelKind::And, 1.0}, n4_edge01(), 999, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      sampler_selftest({ModelKind::And, 1.0}, {"big", 9, {}}, 1000, 1),
      std::invalid_argument);
  const Fixture complete{"k3", 3, {{0, 1}, {0, 2}, {1, 2}}};
  CHECK_THROWS_AS(brute_force_distribution({ModelKind::And, 1.0}, complete),
                  std::invalid_argument);
}

TEST_CASE("selftest detects a wrong distribution") {
  // Or K=2 sampled, but checked against the And K=3 (uniform) table.
  auto r = sampler_selftest({ModelKind::Or, 2.0}, n4_edge01(), 100000, 9);
  const auto uniform =
      brute_force_distribution({ModelKind::And, 3.0}, n4_edge01());
  double chi = 0.0;
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    const double e = uniform[i].second * 100000;
    chi += (r.observed[i] - e) * (r.observed[i] - e) / e;
  }
  CHECK(chi_square_p_value(chi, 4) < kSelftestPValue);
}

TEST_CASE("chi-square tail") {
  CHECK(chi_square_p_value(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_p_value(0.0, 3) == doctest::Approx(1.0));
  CHECK(chi_square_p_value(0.0, 0) == 1.0);
}
