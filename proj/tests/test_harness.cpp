#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "biasgraph/harness.hpp"
#include "biasgraph/ode_engine.hpp"

using namespace biasgraph;

TEST_CASE("summarize") {
  ThresholdEstimate e;
  e.values = {1.0, 2.0, 3.0};
  summarize(e);
  CHECK(e.mean == 2.0);
  CHECK(e.stddev == doctest::Approx(1.0));
  e.values = {4.0};
  summarize(e);
  CHECK(e.stddev == 0.0);
}

TEST_CASE("giant estimate bookkeeping") {
  const auto e =
      estimate_giant_threshold({ModelKind::And, 1.0}, 20000, 0.01, 6, 40);
  CHECK(e.values.size() == 6);
  CHECK(e.edge_counts.size() == 6);
  CHECK(e.trials == 6);
  CHECK(e.timescale == Timescale::GiantUnits);
  CHECK(e.mean > 0.0);
  CHECK(e.stddev >= 0.0);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(e.values[i] == doctest::Approx(2.0 * e.edge_counts[i] / 20000.0));
  CHECK(std::abs(e.mean - 1.0) < 0.15);
}

TEST_CASE("estimates do not depend on the thread count") {
  const ModelSpec m{ModelKind::Or, 2.0};
  const auto a = estimate_connectivity_threshold(m, 2000, 5, 3, 1);
  const auto b = estimate_connectivity_threshold(m, 2000, 5, 3, 4);
  CHECK(a.values == b.values);
  CHECK(a.mean == b.mean);
}

TEST_CASE("timescales agree at the same edge count") {
  const std::uint32_t n = 5000;
  const auto c =
      estimate_connectivity_threshold({ModelKind::And, 0.5}, n, 4, 11);
  CHECK(c.timescale == Timescale::ConnUnits);
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    const double t_g = 2.0 * c.edge_counts[i] / n;
    CHECK(c.values[i] * std::log(static_cast<double>(n)) ==
          doctest::Approx(t_g).epsilon(1e-12));
  }
}

TEST_CASE("giant precedes connectivity for the same seed") {
  for (ModelKind kind : {ModelKind::Or, ModelKind::And})
    for (double K : {0.0, 0.5, 3.0}) {
      const ModelSpec m{kind, K};
      const auto g = estimate_giant_threshold(m, 3000, 0.01, 3, 5);
      const auto c = estimate_connectivity_threshold(m, 3000, 3, 5);
      for (std::size_t i = 0; i < 3; ++i)
        CHECK(g.edge_counts[i] < c.edge_counts[i]);
    }
}

TEST_CASE("bounded-weight sandwich around the uniform process") {
  const std::uint32_t n = 20000;
  const double base =
      estimate_giant_threshold({ModelKind::And, 1.0}, n, 0.01, 5, 1).mean;
  for (double K : {0.5, 2.0}) {
    const double M = std::ceil(std::max(1.0 / K, K));
    const double t =
        estimate_giant_threshold({ModelKind::And, K}, n, 0.01, 5, 1).mean;
    CHECK(t <= M * base);
    CHECK(t >= base / M);
  }
}

TEST_CASE("sweep") {
  SweepConfig cfg;
  cfg.n = 2000;
  cfg.trials = 3;
  cfg.target = Target::Connectivity;

  SUBCASE("empty K list gives an empty table") {
    const auto r = sweep(cfg);
    CHECK(r.rows.empty());
    CHECK(r.failures.empty());
  }
  SUBCASE("rows follow models, then K order") {
    cfg.models = {ModelKind::And, ModelKind::Or};
    cfg.K_values = {0.5, 2.0};
    const auto r = sweep(cfg);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[0].model == ModelKind::And);
    CHECK(r.rows[1].K == 2.0);
    CHECK(r.rows[2].model == ModelKind::Or);
    // Same cell through the single-cell entry point.
    const auto single =
        estimate_connectivity_threshold({ModelKind::Or, 2.0}, 2000, 3, cfg.base_seed);
    CHECK(r.rows[3].values == single.values);
    // Reproducible.
    const auto again = sweep(cfg);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(again.rows[i].values == r.rows[i].values);
  }
  SUBCASE("a bad cell is reported and the rest continue") {
    cfg.K_values = {1.0, -3.0, 2.0};
    const auto r = sweep(cfg);
    CHECK(r.rows.size() == 2);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].K == -3.0);
  }
  SUBCASE("config validation") {
    cfg.n = 3;
    CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);
    cfg.n = 100;
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);
    cfg.alpha = 0.01;
    cfg.trials = 0;
    CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);
    cfg.trials = 1;
    cfg.target = Target::Trajectory;
    CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);
  }
}

TEST_CASE("compare_trajectory, K = 1") {
  const std::vector<double> g{0.0, 0.25, 0.5, 0.75};
  const auto r = compare_trajectory(1.0, 100000, g, 3);
  REQUIRE(r.points.size() == 4);
  CHECK(r.points[0].dev_I == 0.0);
  CHECK(r.points[0].dev_I2 == 0.0);
  CHECK(r.points[0].dev_S == 0.0);
  CHECK(r.max_dev_I <= 0.01);
  for (const auto &p : r.points) {
    CHECK(std::abs(p.y - std::exp(-p.t_sim)) < 1e-7);
    CHECK(p.dev_S <= 0.05 * p.z);
  }
}

TEST_CASE("compare_trajectory, K = 0") {
  const std::vector<double> g{0.5, 1.0, 1.4};
  const auto r = compare_trajectory(0.0, 100000, g, 3);
  CHECK(r.max_dev_I <= 0.01);
  for (const auto &p : r.points)
    CHECK(std::abs(p.y - (2.0 - std::sqrt(1.0 + 2.0 * p.t_sim))) < 1e-7);
}

TEST_CASE("compare_trajectory safe region") {
  const double bound = comparison_bound(1.0);
  CHECK(bound == doctest::Approx(0.8).epsilon(1e-5));
  const std::vector<double> too_far{0.5, 0.9};
  try {
    compare_trajectory(1.0, 1000, too_far, 1);
    FAIL("expected rejection");
  } catch (const std::invalid_argument &e) {
    CHECK(std::string(e.what()).find("0.8") != std::string::npos);
  }
  // K = 0: the y >= 0.02 floor binds before x_c - 0.2.
  CHECK(comparison_bound(0.0) ==
        doctest::Approx(biasgraph::ode::isolated_hitting_time(0.0, 0.02)));
  const std::vector<double> unsorted{0.5, 0.2};
  CHECK_THROWS_AS(compare_trajectory(1.0, 1000, unsorted, 1),
                  std::invalid_argument);
}
