#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "biasgraph/graph_process.hpp"

namespace biasgraph {

/// GiantUnits: t = 2m/n. ConnUnits: t = 2m/(n ln n).
enum class Timescale { GiantUnits, ConnUnits };

enum class Target { Giant, Connectivity, Trajectory };

std::string_view to_string(Timescale ts);
std::string_view to_string(Target target);
Target parse_target(std::string_view text);

struct ThresholdEstimate {
  ModelKind model = ModelKind::And;
  double K = 0.0;
  std::uint32_t n = 0;
  std::uint32_t trials = 0;
  double mean = 0.0;
  double stddev = 0.0; ///< sample standard deviation; 0 for a single trial
  Timescale timescale = Timescale::GiantUnits;
  std::uint64_t base_seed = 0;
  std::vector<double> values;             ///< per trial, in `timescale` units
  std::vector<std::uint64_t> edge_counts; ///< per trial, edges at the hit
};

/// Seed of trial i: base_seed + i.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint32_t trial) {
  return base_seed + trial;
}

/// Mean and sample standard deviation of `values` into `est`.
void summarize(ThresholdEstimate &est);

/// threads = 0 uses the hardware concurrency.
ThresholdEstimate estimate_giant_threshold(const ModelSpec &model,
                                           std::uint32_t n, double alpha,
                                           std::uint32_t trials,
                                           std::uint64_t base_seed,
                                           unsigned threads = 0);

ThresholdEstimate estimate_connectivity_threshold(const ModelSpec &model,
                                                  std::uint32_t n,
                                                  std::uint32_t trials,
                                                  std::uint64_t base_seed,
                                                  unsigned threads = 0);

struct SweepConfig {
  std::vector<ModelKind> models{ModelKind::And};
  std::vector<double> K_values;
  std::uint32_t n = 10000;
  std::uint32_t trials = 10;
  double alpha = 0.01;
  std::uint64_t base_seed = 1;
  Target target = Target::Giant;
  Sampling sampling = Sampling::Exact;
  unsigned threads = 0;

  /// Throws std::invalid_argument on n < 4, trials < 1, alpha outside
  /// (0, 1), or target = Trajectory (trajectories go through
  /// compare_trajectory).
  void validate() const;
};

struct SweepFailure {
  ModelKind model;
  double K;
  std::string message;
};

struct SweepResult {
  std::vector<ThresholdEstimate> rows; ///< models-major, then K in input order
  std::vector<SweepFailure> failures;
};

/// Every (model, K) cell of the config. Trials run in parallel; results do
/// not depend on the thread count. A failing cell is reported and skipped.
SweepResult sweep(const SweepConfig &config);

struct ComparisonOptions {
  /// Grid must stay below x_c - margin ...
  double margin = 0.2;
  /// ... and below the time where y drops to this level.
  double y_floor = 0.02;
};

struct ComparisonPoint {
  double t;     ///< requested grid time
  double t_sim; ///< 2m/n of the snapshot actually taken
  std::uint64_t m;
  double I_sim, I2_sim, S_sim;
  double y, w, z;
  double dev_I, dev_I2, dev_S; ///< absolute deviations
};

struct ComparisonReport {
  double K = 0.0;
  std::uint32_t n = 0;
  std::uint64_t seed = 0;
  double x_c = 0.0;
  double bound = 0.0;
  std::vector<ComparisonPoint> points;
  double max_dev_I = 0.0;
  double max_dev_I2 = 0.0;
  double max_dev_S = 0.0;
};

/// Largest grid time accepted by compare_trajectory.
double comparison_bound(double K, const ComparisonOptions &options = {});

/// One run of the And process snapshotted at each grid time (at
/// m = round(t n / 2) edges) next to the ODE solution at 2m/n.
ComparisonReport compare_trajectory(double K, std::uint32_t n,
                                    std::span<const double> grid,
                                    std::uint64_t seed,
                                    const ComparisonOptions &options = {});

} // namespace biasgraph
