#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "biasgraph/component_tracker.hpp"
#include "biasgraph/harness.hpp"
#include "biasgraph/ode_engine.hpp"
#include "biasgraph/selftest.hpp"

namespace biasgraph::io {

// Column orders are part of the output contract.
inline constexpr const char *kEstimateHeader =
    "model,K,n,trials,mean,stddev,timescale";
inline constexpr const char *kTrajectoryHeader = "t,y,z,w,v";
inline constexpr const char *kSnapshotHeader =
    "m,t_g_units,t_c_units,I,I2,S,largest_fraction,components";
inline constexpr const char *kComparisonHeader =
    "t,t_sim,m,I_sim,I2_sim,S_sim,y,w,z,dev_I,dev_I2,dev_S,max_dev_I,"
    "max_dev_I2,max_dev_S";

/// Nine significant digits ("%.9g"); inf/nan spelled "inf"/"nan".
std::string number(double x);

void write_estimates_csv(std::ostream &out,
                         std::span<const ThresholdEstimate> rows);
void write_trajectory_csv(std::ostream &out, const ode::Trajectory &traj);
void write_snapshot_header(std::ostream &out);
void write_snapshot_row(std::ostream &out, const Snapshot &s);
void write_comparison_csv(std::ostream &out, const ComparisonReport &report);

nlohmann::json to_json(const Snapshot &s);
nlohmann::json to_json(const ThresholdEstimate &est);
nlohmann::json to_json(const SweepResult &result);
nlohmann::json to_json(const ode::Trajectory &traj);
nlohmann::json to_json(const ComparisonReport &report);
nlohmann::json to_json(const SelftestResult &result);

} // namespace biasgraph::io
