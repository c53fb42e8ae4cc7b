#include "biasgraph/report_io.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace biasgraph::io {

namespace {

// Rounded to the same nine digits as the CSV output; non-finite -> null.
nlohmann::json num(double x) {
  if (!std::isfinite(x))
    return nullptr;
  return std::stod(number(x));
}

std::string model_name(ModelKind kind) { return std::string(to_string(kind)); }

} // namespace

std::string number(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.9g}", x);
}

void write_estimates_csv(std::ostream &out,
                         std::span<const ThresholdEstimate> rows) {
  out << kEstimateHeader << '\n';
  for (const auto &r : rows)
    out << to_string(r.model) << ',' << number(r.K) << ',' << r.n << ','
        << r.trials << ',' << number(r.mean) << ',' << number(r.stddev) << ','
        << to_string(r.timescale) << '\n';
}

void write_trajectory_csv(std::ostream &out, const ode::Trajectory &traj) {
  out << kTrajectoryHeader << '\n';
  for (const auto &s : traj.samples)
    out << number(s.t) << ',' << number(s.y) << ',' << number(s.z) << ','
        << number(s.w) << ',' << number(s.v) << '\n';
}

void write_snapshot_header(std::ostream &out) {
  out << kSnapshotHeader << '\n';
}

void write_snapshot_row(std::ostream &out, const Snapshot &s) {
  out << s.m << ',' << number(s.t_g) << ',' << number(s.t_c) << ','
      << number(s.isolated_fraction) << ',' << number(s.size2_fraction) << ','
      << number(s.susceptibility) << ',' << number(s.largest_fraction) << ','
      << s.num_components << '\n';
}

void write_comparison_csv(std::ostream &out, const ComparisonReport &report) {
  out << kComparisonHeader << '\n';
  for (const auto &p : report.points)
    out << number(p.t) << ',' << number(p.t_sim) << ',' << p.m << ','
        << number(p.I_sim) << ',' << number(p.I2_sim) << ','
        << number(p.S_sim) << ',' << number(p.y) << ',' << number(p.w) << ','
        << number(p.z) << ',' << number(p.dev_I) << ',' << number(p.dev_I2)
        << ',' << number(p.dev_S) << ',' << number(report.max_dev_I) << ','
        << number(report.max_dev_I2) << ',' << number(report.max_dev_S)
        << '\n';
}

nlohmann::json to_json(const Snapshot &s) {
  return {{"m", s.m},
          {"t_g_units", num(s.t_g)},
          {"t_c_units", num(s.t_c)},
          {"I", num(s.isolated_fraction)},
          {"I2", num(s.size2_fraction)},
          {"S", num(s.susceptibility)},
          {"largest_fraction", num(s.largest_fraction)},
          {"components", s.num_components}};
}

nlohmann::json to_json(const ThresholdEstimate &est) {
  nlohmann::json values = nlohmann::json::array();
  for (std::size_t i = 0; i < est.values.size(); ++i)
    values.push_back({{"trial", i},
                      {"seed", trial_seed(est.base_seed,
                                          static_cast<std::uint32_t>(i))},
                      {"value", num(est.values[i])},
                      {"edges", est.edge_counts[i]}});
  return {{"model", model_name(est.model)},
          {"K", num(est.K)},
          {"n", est.n},
          {"trials", est.trials},
          {"mean", num(est.mean)},
          {"stddev", num(est.stddev)},
          {"timescale", std::string(to_string(est.timescale))},
          {"base_seed", est.base_seed},
          {"per_trial", values}};
}

nlohmann::json to_json(const SweepResult &result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto &r : result.rows)
    rows.push_back(to_json(r));
  nlohmann::json failures = nlohmann::json::array();
  for (const auto &f : result.failures)
    failures.push_back(
        {{"model", model_name(f.model)}, {"K", num(f.K)}, {"error", f.message}});
  return {{"estimates", rows}, {"failures", failures}};
}

nlohmann::json to_json(const ode::Trajectory &traj) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto &s : traj.samples)
    samples.push_back({{"t", num(s.t)},
                       {"y", num(s.y)},
                       {"z", num(s.z)},
                       {"w", num(s.w)},
                       {"v", num(s.v)}});
  return {{"K", num(traj.K)}, {"samples", samples}};
}

nlohmann::json to_json(const ComparisonReport &report) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto &p : report.points)
    points.push_back({{"t", num(p.t)},
                      {"t_sim", num(p.t_sim)},
                      {"m", p.m},
                      {"I_sim", num(p.I_sim)},
                      {"I2_sim", num(p.I2_sim)},
                      {"S_sim", num(p.S_sim)},
                      {"y", num(p.y)},
                      {"w", num(p.w)},
                      {"z", num(p.z)},
                      {"dev_I", num(p.dev_I)},
                      {"dev_I2", num(p.dev_I2)},
                      {"dev_S", num(p.dev_S)}});
  return {{"model", "and"},
          {"K", num(report.K)},
          {"n", report.n},
          {"seed", report.seed},
          {"x_c", num(report.x_c)},
          {"bound", num(report.bound)},
          {"points", points},
          {"max_dev_I", num(report.max_dev_I)},
          {"max_dev_I2", num(report.max_dev_I2)},
          {"max_dev_S", num(report.max_dev_S)}};
}

nlohmann::json to_json(const SelftestResult &r) {
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t i = 0; i < r.pairs.size(); ++i)
    cells.push_back({{"pair", {r.pairs[i].u, r.pairs[i].v}},
                     {"expected", num(r.expected[i])},
                     {"observed", r.observed[i]}});
  return {{"fixture", r.fixture},
          {"model", model_name(r.model.kind)},
          {"K", num(r.model.K)},
          {"sampling", r.model.sampling == Sampling::Exact ? "exact"
                                                            : "ordered-pair"},
          {"draws", r.draws},
          {"chi_square", num(r.chi_square)},
          {"dof", r.dof},
          {"p_value", num(r.p_value)},
          {"pass", r.pass},
          {"cells", cells}};
}

} // namespace biasgraph::io
