#include "biasgraph/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include <fmt/format.h>

#include "biasgraph/ode_engine.hpp"

namespace biasgraph {

namespace {

unsigned resolve_threads(unsigned requested, std::size_t jobs) {
  unsigned t = requested ? requested : std::thread::hardware_concurrency();
  t = std::max(1u, t);
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

/// Runs job(i) for i in [0, count). Exceptions are captured per job and
/// returned; they never cross thread boundaries.
std::vector<std::exception_ptr>
parallel_for(std::size_t count, unsigned threads,
             const std::function<void(std::size_t)> &job) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = resolve_threads(threads, count);
  if (n_threads == 1) {
    worker();
    return errors;
  }
  std::vector<std::jthread> pool;
  pool.reserve(n_threads);
  for (unsigned k = 0; k < n_threads; ++k)
    pool.emplace_back(worker);
  pool.clear();
  return errors;
}

std::string describe(const std::exception_ptr &e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception &ex) {
    return ex.what();
  } catch (...) {
    return "unknown error";
  }
}

void validate_run(std::uint32_t n, std::uint32_t trials) {
  if (n < 4)
    throw std::invalid_argument("n must be at least 4");
  if (trials < 1)
    throw std::invalid_argument("trials must be at least 1");
}

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1)");
}

struct TrialOutcome {
  double value;
  std::uint64_t edges;
};

TrialOutcome run_trial(const ModelSpec &model, std::uint32_t n,
                       std::uint64_t seed, Target target, double alpha) {
  ProcessState state(n, model, seed);
  if (target == Target::Giant) {
    const Snapshot s = state.run_until(stop::GiantFraction{alpha});
    return {s.t_g, s.m};
  }
  const Snapshot s = state.run_until(stop::Connected{});
  return {s.t_c, s.m};
}

ThresholdEstimate make_estimate(const ModelSpec &model, std::uint32_t n,
                                std::uint32_t trials, std::uint64_t base_seed,
                                Target target) {
  ThresholdEstimate est;
  est.model = model.kind;
  est.K = model.K;
  est.n = n;
  est.trials = trials;
  est.base_seed = base_seed;
  est.timescale =
      target == Target::Giant ? Timescale::GiantUnits : Timescale::ConnUnits;
  est.values.assign(trials, 0.0);
  est.edge_counts.assign(trials, 0);
  return est;
}

ThresholdEstimate estimate(const ModelSpec &model, std::uint32_t n,
                           std::uint32_t trials, std::uint64_t base_seed,
                           Target target, double alpha, unsigned threads) {
  model.validate();
  validate_run(n, trials);
  ThresholdEstimate est = make_estimate(model, n, trials, base_seed, target);
  const auto errors = parallel_for(trials, threads, [&](std::size_t i) {
    const auto out = run_trial(model, n,
                               trial_seed(base_seed, static_cast<std::uint32_t>(i)),
                               target, alpha);
    est.values[i] = out.value;
    est.edge_counts[i] = out.edges;
  });
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  summarize(est);
  return est;
}

} // namespace

std::string_view to_string(Timescale ts) {
  return ts == Timescale::GiantUnits ? "giant" : "connectivity";
}

std::string_view to_string(Target target) {
  switch (target) {
  case Target::Giant:
    return "giant";
  case Target::Connectivity:
    return "connectivity";
  case Target::Trajectory:
    return "trajectory";
  }
  return "?";
}

Target parse_target(std::string_view text) {
  if (text == "giant")
    return Target::Giant;
  if (text == "connectivity")
    return Target::Connectivity;
  if (text == "trajectory")
    return Target::Trajectory;
  throw std::invalid_argument("unknown target '" + std::string(text) + "'");
}

void summarize(ThresholdEstimate &est) {
  const auto k = est.values.size();
  if (k == 0) {
    est.mean = est.stddev = 0.0;
    return;
  }
  double sum = 0.0;
  for (double v : est.values)
    sum += v;
  est.mean = sum / static_cast<double>(k);
  double ss = 0.0;
  for (double v : est.values)
    ss += (v - est.mean) * (v - est.mean);
  est.stddev = k > 1 ? std::sqrt(ss / static_cast<double>(k - 1)) : 0.0;
}

ThresholdEstimate estimate_giant_threshold(const ModelSpec &model,
                                           std::uint32_t n, double alpha,
                                           std::uint32_t trials,
                                           std::uint64_t base_seed,
                                           unsigned threads) {
  validate_alpha(alpha);
  return estimate(model, n, trials, base_seed, Target::Giant, alpha, threads);
}

ThresholdEstimate estimate_connectivity_threshold(const ModelSpec &model,
                                                  std::uint32_t n,
                                                  std::uint32_t trials,
                                                  std::uint64_t base_seed,
                                                  unsigned threads) {
  return estimate(model, n, trials, base_seed, Target::Connectivity, 0.0,
                  threads);
}

void SweepConfig::validate() const {
  validate_run(n, trials);
  validate_alpha(alpha);
  if (target == Target::Trajectory)
    throw std::invalid_argument(
        "sweep estimates thresholds; use compare for trajectories");
}

SweepResult sweep(const SweepConfig &config) {
  config.validate();

  struct Cell {
    ModelSpec model;
    ThresholdEstimate est;
    std::string error;
  };
  std::vector<Cell> cells;
  for (ModelKind kind : config.models)
    for (double K : config.K_values) {
      Cell c{ModelSpec{kind, K, config.sampling}, {}, {}};
      try {
        c.model.validate();
      } catch (const std::exception &e) {
        c.error = e.what();
      }
      c.est = make_estimate(c.model, config.n, config.trials, config.base_seed,
                            config.target);
      cells.push_back(std::move(c));
    }

  const std::size_t jobs = cells.size() * config.trials;
  const auto errors = parallel_for(jobs, config.threads, [&](std::size_t j) {
    Cell &c = cells[j / config.trials];
    if (!c.error.empty())
      return;
    const auto trial = static_cast<std::uint32_t>(j % config.trials);
    const auto out =
        run_trial(c.model, config.n, trial_seed(config.base_seed, trial),
                  config.target, config.alpha);
    c.est.values[trial] = out.value;
    c.est.edge_counts[trial] = out.edges;
  });
  for (std::size_t j = 0; j < jobs; ++j)
    if (errors[j] && cells[j / config.trials].error.empty())
      cells[j / config.trials].error = fmt::format(
          "trial {}: {}", j % config.trials, describe(errors[j]));

  SweepResult result;
  for (auto &c : cells) {
    if (!c.error.empty()) {
      result.failures.push_back({c.model.kind, c.model.K, c.error});
      continue;
    }
    summarize(c.est);
    result.rows.push_back(std::move(c.est));
  }
  return result;
}

double comparison_bound(double K, const ComparisonOptions &options) {
  if (!(options.y_floor > 0.0 && options.y_floor < 1.0))
    throw std::invalid_argument("y_floor must lie in (0, 1)");
  const auto sing = ode::find_singularity(K);
  return std::min(sing.x_c - options.margin,
                  ode::isolated_hitting_time(K, options.y_floor));
}

ComparisonReport compare_trajectory(double K, std::uint32_t n,
                                    std::span<const double> grid,
                                    std::uint64_t seed,
                                    const ComparisonOptions &options) {
  const ModelSpec model{ModelKind::And, K, Sampling::Exact};
  model.validate();
  if (n < 4)
    throw std::invalid_argument("n must be at least 4");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("comparison grid must be sorted");

  ComparisonReport report;
  report.K = K;
  report.n = n;
  report.seed = seed;
  report.x_c = ode::find_singularity(K).x_c;
  report.bound = comparison_bound(K, options);
  for (double t : grid)
    if (t < 0.0 || t > report.bound)
      throw std::invalid_argument(fmt::format(
          "grid point {:.9g} outside the comparison region [0, {:.9g}]", t,
          report.bound));

  ProcessState state(n, model, seed);
  std::vector<double> sim_times;
  for (double t : grid) {
    const auto m =
        static_cast<std::uint64_t>(std::llround(t * static_cast<double>(n) / 2.0));
    const Snapshot s = state.run_until(stop::EdgeCount{m});
    ComparisonPoint p{};
    p.t = t;
    p.t_sim = s.t_g;
    p.m = s.m;
    p.I_sim = s.isolated_fraction;
    p.I2_sim = s.size2_fraction;
    p.S_sim = s.susceptibility;
    report.points.push_back(p);
    sim_times.push_back(s.t_g);
  }

  ode::OdeParams params;
  params.K = K;
  const auto ode_values = ode::solve_at(params, sim_times);
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    auto &p = report.points[i];
    p.y = ode_values[i].y;
    p.w = ode_values[i].w;
    p.z = ode_values[i].z;
    p.dev_I = std::abs(p.I_sim - p.y);
    p.dev_I2 = std::abs(p.I2_sim - p.w);
    p.dev_S = std::abs(p.S_sim - p.z);
    report.max_dev_I = std::max(report.max_dev_I, p.dev_I);
    report.max_dev_I2 = std::max(report.max_dev_I2, p.dev_I2);
    report.max_dev_S = std::max(report.max_dev_S, p.dev_S);
  }
  return report;
}

} // namespace biasgraph
