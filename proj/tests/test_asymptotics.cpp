#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "biasgraph/asymptotics.hpp"

using namespace biasgraph;
using namespace biasgraph::asymptotics;

TEST_CASE("threshold constants") {
  // (pi / (2 sqrt 2)) (1 + pi^2 / 24) evaluated directly.
  CHECK(std::abs(giant_threshold(ModelKind::And, 1.0) - 1.5674863) < 1e-6);
  CHECK(std::abs(giant_threshold(ModelKind::Or, 3.0) - 4.0 / 3.0) < 1e-9);
  CHECK(giant_threshold(ModelKind::And, 4.0) ==
        doctest::Approx(and_constant() / 2.0));
  CHECK(std::abs(or_constant() / and_constant() - constant_ratio()) < 1e-9);
  CHECK(std::abs(constant_ratio() - 1.4733) < 1e-4);
  CHECK_THROWS_AS(giant_threshold(ModelKind::And, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(giant_threshold(ModelKind::Or, -2.0), std::invalid_argument);
}

TEST_CASE("Cardano root solves the cubic") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> logK(0.0, 6.0), td(1e-4, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double K = std::pow(10.0, logK(rng));
    const double t = td(rng);
    const double u = u_approx(t, K);
    const double back = K / 3.0 * u * u * u + u;
    CHECK(std::abs(back - t) <= 1e-10 * t);
  }
}

TEST_CASE("u is close to t while K u^2 is small") {
  const double K = 1e4;
  const double t = 1e-4;
  CHECK(std::abs(u_approx(t, K) / t - 1.0) < 1e-3);
  CHECK(u_approx(0.0, 50.0) == doctest::Approx(0.0));
}

TEST_CASE("tan form blows up at the asymptotic threshold") {
  for (double K : {10.0, 1e3, 1e5}) {
    const double x = giant_threshold(ModelKind::And, K);
    CHECK(std::sqrt(2.0 * K) * u_approx(x, K) ==
          doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-10));
    CHECK(z_approx(0.0, K) == doctest::Approx(1.0));
    CHECK(z_approx(0.9 * x, K) > z_approx(0.5 * x, K));
    CHECK_THROWS_AS(z_approx(1.01 * x, K), std::domain_error);
  }
}
