#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "biasgraph/report_io.hpp"

using namespace biasgraph;

TEST_CASE("number formatting") {
  CHECK(io::number(1.0) == "1");
  CHECK(io::number(1.0 / 3.0) == "0.333333333");
  CHECK(io::number(1.6889718994961755) == "1.6889719");
  CHECK(io::number(123456789012.0) == "1.23456789e+11");
  CHECK(io::number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::number(std::nan("")) == "nan");
}

TEST_CASE("estimate CSV layout") {
  ThresholdEstimate e;
  e.model = ModelKind::Or;
  e.K = 0.5;
  e.n = 100;
  e.trials = 2;
  e.values = {1.0, 1.5};
  e.edge_counts = {10, 20};
  e.timescale = Timescale::ConnUnits;
  summarize(e);
  std::ostringstream out;
  const ThresholdEstimate rows[] = {e};
  io::write_estimates_csv(out, rows);
  CHECK(out.str() == "model,K,n,trials,mean,stddev,timescale\n"
                     "or,0.5,100,2,1.25,0.353553391,connectivity\n");

  const auto j = io::to_json(e);
  CHECK(j["model"] == "or");
  CHECK(j["per_trial"].size() == 2);
  CHECK(j["per_trial"][1]["seed"] == e.base_seed + 1);
  CHECK(j["per_trial"][1]["edges"] == 20);
}

TEST_CASE("trajectory and snapshot CSV") {
  ode::Trajectory t;
  t.samples = {{0.0, 1.0, 1.0, 0.0, 1.0},
               {1.2, 0.5, std::numeric_limits<double>::infinity(), 0.1, -0.2}};
  std::ostringstream out;
  io::write_trajectory_csv(out, t);
  CHECK(out.str() == "t,y,z,w,v\n0,1,1,0,1\n1.2,0.5,inf,0.1,-0.2\n");
  CHECK(io::to_json(t)["samples"][1]["z"].is_null());

  ComponentTracker tr(4);
  tr.unite(0, 1);
  std::ostringstream snap;
  io::write_snapshot_header(snap);
  io::write_snapshot_row(snap, tr.observables(1));
  CHECK(snap.str() ==
        "m,t_g_units,t_c_units,I,I2,S,largest_fraction,components\n"
        "1,0.5,0.36067376,0.5,0.5,1.5,0.5,3\n");
}
