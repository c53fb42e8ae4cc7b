#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "biasgraph/ode_engine.hpp"
#include "biasgraph/ode_system.hpp"

using namespace biasgraph::ode;

namespace {

// Roots of v = 1/z computed independently with scipy's DOP853
// (rtol 1e-13, atol 1e-14, event on v) from the (y, v) system.
struct Reference {
  double K;
  double x_c;
};
constexpr Reference kReferenceSingularities[] = {
    {0.25, 1.4272660044849566}, {0.5, 1.2196905062947228},
    {2.0, 0.7929809580131865},  {4.0, 0.6121784666901368},
    {8.0, 0.46259347676671175}, {100.0, 0.14841409258650984},
};

std::vector<double> grid(double t_max, int points) {
  std::vector<double> g;
  for (int i = 0; i <= points; ++i)
    g.push_back(t_max * i / points);
  return g;
}

} // namespace

TEST_CASE("rhs examples") {
  const auto d = rhs(1.0, 0.5, 3.0, 0.1);
  CHECK(d.dy == doctest::Approx(-0.5));
  CHECK(d.dz == doctest::Approx(9.0));
  CHECK(d.dw == doctest::Approx(0.05));

  for (double K : {0.0, 0.3, 1.0, 7.0}) {
    const auto init = rhs(K, 1.0, 1.0, 0.0);
    CHECK(init.dy == -1.0);
    CHECK(init.dz == 1.0);
    CHECK(init.dw == 1.0);
  }
  for (double y : {0.1, 0.5, 0.9})
    CHECK(rhs(1.0, y, 2.0, 0.0).dy == doctest::Approx(-y));

  CHECK_THROWS_AS(rhs(0.0, 0.0, 2.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(rhs_reciprocal(0.0, 0.0, 0.5), std::domain_error);
}

TEST_CASE("reciprocal right-hand side") {
  for (double y : {0.2, 0.7, 1.0})
    for (double v : {1.0, 0.3, -0.2})
      CHECK(rhs_reciprocal(1.0, y, v).dv == -1.0);
  for (double K : {0.0, 0.5, 3.0, 1e4})
    CHECK(rhs_reciprocal(K, 1.0, 1.0).dv == -1.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> Kd(0.01, 50.0), yd(0.01, 1.0),
      zd(1.0, 100.0);
  for (int i = 0; i < 100; ++i) {
    const double K = Kd(rng), y = yd(rng), z = zd(rng);
    const double via_z = -rhs(K, y, z, 0.0).dz / (z * z);
    const double via_v = rhs_reciprocal(K, y, 1.0 / z).dv;
    CHECK(std::abs(via_v - via_z) <= 1e-12 * std::abs(via_z));
  }
}

TEST_CASE("regularized K=0 system agrees with the raw one away from y=0") {
  for (double y : {0.9, 0.5, 0.1}) {
    const double z = 2.5, w = 0.2;
    const auto raw = rhs(0.0, y, z, w);
    const auto reg = rhs_k0_regularized(y, z, w, 1.0 / z);
    CHECK(reg.dy == doctest::Approx(raw.dy).epsilon(1e-13));
    CHECK(reg.dz == doctest::Approx(raw.dz).epsilon(1e-13));
    CHECK(reg.dw == doctest::Approx(raw.dw).epsilon(1e-13));
    CHECK(reg.dv == doctest::Approx(rhs_reciprocal(0.0, y, 1.0 / z).dv).epsilon(1e-12));
  }
}

TEST_CASE("integrate, K = 1 golden values") {
  OdeParams p;
  p.K = 1.0;
  p.t_end = 0.5;
  const auto traj = integrate(p);
  const auto &last = traj.samples.back();
  CHECK(last.t == 0.5);
  CHECK(std::abs(last.y - std::exp(-0.5)) < 1e-6);
  CHECK(std::abs(last.w - 0.5 * std::exp(-1.0)) < 1e-6);

  p.t_end = 0.9;
  CHECK(std::abs(integrate(p).samples.back().z - 10.0) < 1e-3);
}

TEST_CASE("integrate, K = 2 dominates the K = 1 susceptibility") {
  OdeParams p;
  p.K = 2.0;
  p.t_end = 0.79;
  for (const auto &s : integrate(p).samples)
    CHECK(s.z >= 1.0 / (1.0 - s.t) - 1e-9);
}

TEST_CASE("trajectory invariants") {
  for (double K : {0.0, 0.25, 1.0, 3.0, 20.0}) {
    OdeParams p;
    p.K = K;
    p.t_end = 3.0;
    const auto traj = integrate(p);
    REQUIRE(traj.samples.size() > 10);
    const auto &first = traj.samples.front();
    CHECK(first.t == 0.0);
    CHECK(first.y == 1.0);
    CHECK(first.z == 1.0);
    CHECK(first.w == 0.0);
    CHECK(first.v == 1.0);
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
      const auto &a = traj.samples[i - 1];
      const auto &b = traj.samples[i];
      INFO("K=", K, " t=", b.t);
      CHECK(b.t > a.t);
      CHECK(b.y <= a.y);
      CHECK(b.y >= 0.0);
      CHECK(b.y <= 1.0);
      CHECK(b.z >= a.z);
      CHECK(b.v <= a.v);
    }
    // Past the singularity z is capped, v has crossed zero.
    CHECK(std::isinf(traj.samples.back().z));
    CHECK(traj.samples.back().v < 0.0);
  }
}

TEST_CASE("output interval produces a uniform grid") {
  OdeParams p;
  p.K = 2.0;
  p.t_end = 0.5;
  p.output_interval = 0.1;
  const auto traj = integrate(p);
  REQUIRE(traj.samples.size() == 6);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(traj.samples[i].t == doctest::Approx(0.1 * i));
}

TEST_CASE("numeric trajectories match closed forms") {
  SUBCASE("K = 1") {
    const auto num = solve_at({.K = 1.0}, grid(0.95, 400));
    double err = 0.0;
    for (const auto &s : num) {
      const auto c = closed_form_k1(s.t);
      err = std::max({err, std::abs(s.y - c.y), std::abs(s.w - c.w),
                      std::abs(s.z - c.z)});
    }
    CHECK(err < 1e-6);
  }
  SUBCASE("K = 0, both regimes") {
    const auto num = solve_at({.K = 0.0}, grid(singularity_k0() - 0.05, 400));
    double err = 0.0;
    for (const auto &s : num) {
      const auto c = closed_form_k0(s.t);
      err = std::max({err, std::abs(s.y - c.y), std::abs(s.w - c.w),
                      std::abs(s.z - c.z)});
    }
    CHECK(err < 1e-6);
  }
}

TEST_CASE("numeric y reaches each level at the separable hitting time") {
  for (double K : {0.0, 0.25, 2.0, 8.0})
    for (double level : {0.8, 0.3, 0.05}) {
      const double t = isolated_hitting_time(K, level);
      const double t_arr[] = {t};
      const auto s = solve_at({.K = K}, t_arr);
      INFO("K=", K, " level=", level);
      CHECK(std::abs(s[0].y - level) < 1e-7);
    }
  CHECK(isolated_hitting_time(1.0, std::exp(-2.0)) == doctest::Approx(2.0));
  CHECK(isolated_hitting_time(0.0, 1e-300) == doctest::Approx(1.5));
  CHECK_THROWS_AS(isolated_hitting_time(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("closed_form_k0") {
  const auto at0 = closed_form_k0(0.0);
  CHECK(at0.y == 1.0);
  CHECK(at0.z == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(at0.w == doctest::Approx(0.0));

  const auto at = closed_form_k0(1.5);
  CHECK(at.y == 0.0);
  CHECK(std::abs(at.z - (0.75 * std::exp(2.0) - 0.25)) < 1e-12);
  CHECK(std::abs(at.z - 5.29180) < 1e-5);
  CHECK(std::abs(at.w - (0.25 - 0.75 / std::exp(2.0))) < 1e-12);
  CHECK(std::abs(at.w - 0.1485) < 1e-4);

  // Post-tau0 continuation: w frozen, z = 1/(x_c - t).
  const auto late = closed_form_k0(1.6);
  CHECK(late.y == 0.0);
  CHECK(late.w == at.w);
  CHECK(late.z == doctest::Approx(1.0 / (singularity_k0() - 1.6)));

  CHECK_THROWS_AS(closed_form_k0(singularity_k0()), std::domain_error);
  CHECK_THROWS_AS(closed_form_k0(-0.1), std::domain_error);
  CHECK_THROWS_AS(closed_form_k1(1.0), std::domain_error);
}

TEST_CASE("find_singularity golden values") {
  const auto start = std::chrono::steady_clock::now();
  const auto k1 = find_singularity(1.0);
  CHECK(std::abs(k1.x_c - 1.0) < 1e-3);
  CHECK(k1.method == SingularityMethod::ReciprocalBisection);
  CHECK(k1.achieved_tol <= 1e-6);

  const auto k0 = find_singularity(0.0);
  CHECK(k0.method == SingularityMethod::RegularizedK0);
  CHECK(std::abs(k0.x_c - 1.68897) < 1e-5);
  CHECK(std::abs(find_singularity(0.0, 1e-10).x_c - singularity_k0()) < 1e-8);

  for (const auto &ref : kReferenceSingularities) {
    INFO("K=", ref.K);
    CHECK(std::abs(find_singularity(ref.K, 1e-8).x_c - ref.x_c) < 1e-7);
  }

  const double K = 1e4;
  const double scaled = find_singularity(K).x_c * std::sqrt(K);
  CHECK(std::abs(scaled / 1.5674863282893066 - 1.0) < 0.05);

  const double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  CHECK(elapsed < 1.0);

  CHECK_THROWS_AS(find_singularity(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(find_singularity(-1.0), std::invalid_argument);
}

TEST_CASE("x_c decreases in K and stays below 5") {
  double prev = find_singularity(0.0).x_c;
  for (double K : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const auto r = find_singularity(K);
    REQUIRE(r.finite());
    CHECK(r.x_c < prev);
    CHECK(r.x_c < 5.0);
    CHECK(r.x_c > 0.0);
    prev = r.x_c;
  }
}

TEST_CASE("x_c is continuous in K") {
  const double a = find_singularity(1.0, 1e-9).x_c;
  const double b = find_singularity(1.001, 1e-9).x_c;
  const double c = find_singularity(1.0001, 1e-9).x_c;
  CHECK(std::abs(a - b) < 1e-3);
  CHECK(std::abs(a - c) < std::abs(a - b));
  // Small K approaches the K = 0 closed form.
  CHECK(std::abs(find_singularity(1e-4).x_c - singularity_k0()) < 1e-3);
}

TEST_CASE("halving the tolerances moves x_c by less than the reported tolerance") {
  for (double K : {0.3, 1.0, 5.0}) {
    const auto coarse = find_singularity(K, 1e-6, 1e-9, 1e-9);
    const auto fine = find_singularity(K, 5e-7, 5e-10, 5e-10);
    CHECK(std::abs(coarse.x_c - fine.x_c) <=
          std::max(coarse.achieved_tol, fine.achieved_tol));
  }
}

TEST_CASE("parameter validation") {
  OdeParams p;
  p.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate(p), std::invalid_argument);
  p = {};
  p.t_end = -1.0;
  CHECK_THROWS_AS(integrate(p), std::invalid_argument);
  p = {};
  p.K = -0.1;
  CHECK_THROWS_AS(integrate(p), std::invalid_argument);
  const double unsorted[] = {0.5, 0.2};
  CHECK_THROWS_AS(solve_at({}, unsorted), std::invalid_argument);
}

TEST_CASE("step size underflow is reported with the time reached") {
  // max_step below machine resolution of t forces the underflow path.
  OdeParams p;
  p.K = 1.0;
  p.t_end = 1.0;
  p.max_step = 1e-300;
  try {
    integrate(p);
    FAIL("expected an underflow error");
  } catch (const std::runtime_error &e) {
    CHECK(std::string(e.what()).find("underflow at t =") != std::string::npos);
  }
}
