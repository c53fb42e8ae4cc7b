// biasgraph: command-line front end for the G_or(K) / G_and(K) simulator,
// the ODE engine and the threshold experiments.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biasgraph/graph_process.hpp"
#include "biasgraph/harness.hpp"
#include "biasgraph/ode_engine.hpp"
#include "biasgraph/report_io.hpp"
#include "biasgraph/selftest.hpp"

using namespace biasgraph;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct Common {
  std::string output = "csv";
  std::string out_path = "-";
  unsigned threads = 0;

  Format format() const {
    if (output == "csv")
      return Format::Csv;
    if (output == "json")
      return Format::Json;
    throw UsageError("--output must be csv or json");
  }
};

void add_common(CLI::App *cmd, Common &c, bool threads) {
  cmd->add_option("--output", c.output, "Output format: csv or json")
      ->capture_default_str();
  cmd->add_option("--out", c.out_path, "Output file ('-' for stdout)")
      ->capture_default_str();
  if (threads)
    cmd->add_option("--threads", c.threads,
                    "Worker threads (0 = machine parallelism)")
        ->capture_default_str();
}

/// Writes to stdout or to a file opened up front, so an unwritable path
/// fails before any work is done.
class Sink {
public:
  explicit Sink(const std::string &path) {
    if (path == "-")
      return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_)
      throw std::runtime_error("cannot open output file '" + path + "'");
  }
  std::ostream &stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream())
      throw std::runtime_error("failed writing output");
  }

private:
  std::unique_ptr<std::ofstream> file_;
};

ModelSpec make_model(const std::string &kind, double K,
                     const std::string &sampling) {
  ModelSpec m;
  try {
    m.kind = parse_model_kind(kind);
    m.K = K;
    m.validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  if (sampling == "exact")
    m.sampling = Sampling::Exact;
  else if (sampling == "ordered-pair")
    m.sampling = Sampling::OrderedPairApprox;
  else
    throw UsageError("--sampling must be exact or ordered-pair");
  return m;
}

template <class F> auto usage_checked(F &&f) {
  try {
    return f();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  Common common;
  std::string model = "and";
  double K = 1.0;
  std::uint32_t n = 10000;
  std::uint64_t seed = 1;
  std::string stop = "connected";
  std::uint64_t every = 0;
  std::string sampling = "exact";
};

void run_simulate(const SimulateArgs &a) {
  const ModelSpec model = make_model(a.model, a.K, a.sampling);
  const StopCondition stop = usage_checked([&] { return parse_stop_condition(a.stop); });
  if (a.n < 1)
    throw UsageError("--n must be positive");
  const Format fmt = a.common.format();
  if (const auto *c = std::get_if<stop::EdgeCount>(&stop);
      c && c->m > pair_count(a.n))
    throw UsageError("edge count exceeds C(n,2)");

  Sink sink(a.common.out_path);
  ProcessState state(a.n, model, a.seed);
  std::vector<Snapshot> rows;
  while (!state.satisfied(stop)) {
    const Snapshot s = state.step();
    if (a.every > 0 && s.m % a.every == 0 && !state.satisfied(stop))
      rows.push_back(s);
  }
  rows.push_back(state.observables());

  auto &out = sink.stream();
  if (fmt == Format::Csv) {
    io::write_snapshot_header(out);
    for (const auto &s : rows)
      io::write_snapshot_row(out, s);
  } else {
    nlohmann::json j = nlohmann::json::array();
    for (const auto &s : rows)
      j.push_back(io::to_json(s));
    out << nlohmann::json{{"model", a.model},
                          {"K", a.K},
                          {"n", a.n},
                          {"seed", a.seed},
                          {"stop", a.stop},
                          {"attempts", state.attempt_count()},
                          {"rows", j}}
               .dump(2)
        << '\n';
  }
  sink.finish();
}

// --------------------------------------------------------------------- ode

struct OdeArgs {
  Common common;
  ode::OdeParams params;
};

void run_ode(const OdeArgs &a) {
  usage_checked([&] {
    a.params.validate();
    return 0;
  });
  const Format fmt = a.common.format();
  Sink sink(a.common.out_path);
  const auto traj = ode::integrate(a.params);
  if (fmt == Format::Csv)
    io::write_trajectory_csv(sink.stream(), traj);
  else
    sink.stream() << io::to_json(traj).dump(2) << '\n';
  sink.finish();
}

// ------------------------------------------------------------- singularity

struct SingularityArgs {
  Common common;
  double K = 1.0;
  double tol = 1e-6;
};

void run_singularity(const SingularityArgs &a) {
  if (!(a.K >= 0.0) || !std::isfinite(a.K))
    throw UsageError("--k must be finite and >= 0");
  if (!(a.tol > 0.0))
    throw UsageError("--tol must be positive");
  const Format fmt = a.common.format();
  Sink sink(a.common.out_path);
  const auto r = ode::find_singularity(a.K, a.tol);
  const char *method = r.method == ode::SingularityMethod::RegularizedK0
                           ? "regularized-k0"
                           : "reciprocal-bisection";
  if (fmt == Format::Csv) {
    sink.stream() << (r.finite() ? fmt::format("{:.9f}", r.x_c) : "inf")
                  << '\n';
  } else {
    sink.stream() << nlohmann::json{{"K", a.K},
                                    {"x_c", r.finite() ? nlohmann::json(r.x_c)
                                                       : nlohmann::json()},
                                    {"achieved_tol", r.achieved_tol},
                                    {"method", method}}
                         .dump(2)
                  << '\n';
  }
  sink.finish();
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  Common common;
  std::string target = "giant";
  std::vector<std::string> models{"and"};
  std::vector<double> K_values;
  std::uint32_t n = 10000;
  std::uint32_t trials = 10;
  double alpha = 0.01;
  std::uint64_t seed = 1;
  std::string sampling = "exact";
};

int run_sweep(const SweepArgs &a) {
  SweepConfig cfg;
  cfg.target = usage_checked([&] { return parse_target(a.target); });
  cfg.models.clear();
  for (const auto &m : a.models)
    cfg.models.push_back(usage_checked([&] { return parse_model_kind(m); }));
  cfg.K_values = a.K_values;
  cfg.n = a.n;
  cfg.trials = a.trials;
  cfg.alpha = a.alpha;
  cfg.base_seed = a.seed;
  cfg.sampling = make_model("and", 1.0, a.sampling).sampling;
  cfg.threads = a.common.threads;
  usage_checked([&] {
    cfg.validate();
    return 0;
  });
  const Format fmt = a.common.format();

  Sink sink(a.common.out_path);
  const SweepResult result = sweep(cfg);
  if (fmt == Format::Csv)
    io::write_estimates_csv(sink.stream(), result.rows);
  else
    sink.stream() << io::to_json(result).dump(2) << '\n';
  sink.finish();
  for (const auto &f : result.failures)
    std::cerr << fmt::format("sweep cell {} K={} failed: {}\n",
                             to_string(f.model), io::number(f.K), f.message);
  return result.failures.empty() ? 0 : kExitRuntime;
}

// ----------------------------------------------------------------- compare

struct CompareArgs {
  Common common;
  double K = 1.0;
  std::uint32_t n = 100000;
  std::vector<double> grid{0.25, 0.5, 0.75};
  std::uint64_t seed = 1;
  ComparisonOptions options;
};

void run_compare(const CompareArgs &a) {
  const Format fmt = a.common.format();
  make_model("and", a.K, "exact");
  if (a.n < 4)
    throw UsageError("--n must be at least 4");
  const double bound = comparison_bound(a.K, a.options);
  for (double t : a.grid)
    if (t < 0.0 || t > bound)
      throw UsageError(fmt::format(
          "grid point {} outside the comparison region [0, {}]",
          io::number(t), io::number(bound)));
  Sink sink(a.common.out_path);
  const auto report = compare_trajectory(a.K, a.n, a.grid, a.seed, a.options);
  if (fmt == Format::Csv)
    io::write_comparison_csv(sink.stream(), report);
  else
    sink.stream() << io::to_json(report).dump(2) << '\n';
  sink.finish();
}

// ---------------------------------------------------------------- selftest

struct SelftestArgs {
  Common common;
  std::uint64_t draws = 100000;
  std::uint64_t seed = 1;
};

int run_selftest(const SelftestArgs &a) {
  if (a.draws < kMinSelftestDraws)
    throw UsageError("--draws must be at least 1000");
  const Format fmt = a.common.format();
  Sink sink(a.common.out_path);
  auto &out = sink.stream();
  bool all_pass = true;
  nlohmann::json samplers = nlohmann::json::array();
  nlohmann::json checks = nlohmann::json::array();

  std::uint64_t seed = a.seed;
  for (const auto &fixture : standard_fixtures())
    for (ModelKind kind : {ModelKind::Or, ModelKind::And})
      for (double K : {0.0, 0.5, 1.0, 2.0})
        for (Sampling sampling : {Sampling::Exact, Sampling::OrderedPairApprox}) {
          const auto r =
              sampler_selftest({kind, K, sampling}, fixture, a.draws, seed++);
          all_pass &= r.pass;
          if (fmt == Format::Json) {
            samplers.push_back(io::to_json(r));
            continue;
          }
          out << fmt::format(
              "{} sampler {} {} K={} {}: chi2={} dof={} p={}\n",
              r.pass ? "PASS" : "FAIL", fixture.name, to_string(kind),
              io::number(K),
              sampling == Sampling::Exact ? "exact" : "ordered-pair",
              io::number(r.chi_square), r.dof, io::number(r.p_value));
        }

  auto check = [&](const std::string &name, double err, double limit) {
    const bool pass = err <= limit;
    all_pass &= pass;
    if (fmt == Format::Json)
      checks.push_back({{"check", name}, {"error", err}, {"limit", limit},
                        {"pass", pass}});
    else
      out << fmt::format("{} ode {}: error={} limit={}\n",
                         pass ? "PASS" : "FAIL", name, io::number(err),
                         io::number(limit));
  };

  auto sup_error = [](double K, double t_max, auto closed) {
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i)
      grid.push_back(t_max * i / 200.0);
    const auto num = ode::solve_at({.K = K}, grid);
    double err = 0.0;
    for (const auto &s : num) {
      const auto c = closed(s.t);
      err = std::max({err, std::abs(s.y - c.y), std::abs(s.w - c.w),
                      std::abs(s.z - c.z)});
    }
    return err;
  };
  check("k1-closed-form", sup_error(1.0, 0.95, ode::closed_form_k1), 1e-6);
  check("k0-closed-form", sup_error(0.0, ode::singularity_k0() - 0.05,
                                    ode::closed_form_k0),
        1e-6);
  check("k1-singularity", std::abs(ode::find_singularity(1.0).x_c - 1.0), 1e-3);
  check("k0-singularity",
        std::abs(ode::find_singularity(0.0).x_c -
                 (1.5 + 4.0 / (3.0 * std::exp(2.0) - 1.0))),
        1e-4);

  if (fmt == Format::Json)
    out << nlohmann::json{{"samplers", samplers},
                          {"ode", checks},
                          {"pass", all_pass}}
               .dump(2)
        << '\n';
  else
    out << (all_pass ? "selftest passed\n" : "selftest FAILED\n");
  sink.finish();
  return all_pass ? 0 : kExitRuntime;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Biased random graph processes: simulation, ODE limits and "
               "threshold experiments"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto *c_sim = app.add_subcommand("simulate", "Run one process and emit observables");
  c_sim->add_option("--model", sim.model, "or | and")->capture_default_str();
  c_sim->add_option("--k", sim.K, "Bias K >= 0")->capture_default_str();
  c_sim->add_option("--n", sim.n, "Vertex count")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  c_sim->add_option("--stop", sim.stop,
                    "edges=<m> | giant=<alpha> | connected | isolated-exhausted")
      ->capture_default_str();
  c_sim->add_option("--every", sim.every,
                    "Emit a row every this many edges (0 = final row only)")
      ->capture_default_str();
  c_sim->add_option("--sampling", sim.sampling, "exact | ordered-pair")
      ->capture_default_str();
  add_common(c_sim, sim.common, false);

  OdeArgs ode_args;
  auto *c_ode = app.add_subcommand("ode", "Integrate the y/z/w system");
  c_ode->add_option("--k", ode_args.params.K, "Bias K >= 0")->capture_default_str();
  c_ode->add_option("--t-end", ode_args.params.t_end, "Final time")->capture_default_str();
  c_ode->add_option("--dt", ode_args.params.output_interval,
                    "Output spacing (0 = every accepted step)")
      ->capture_default_str();
  c_ode->add_option("--rtol", ode_args.params.rel_tol)->capture_default_str();
  c_ode->add_option("--atol", ode_args.params.abs_tol)->capture_default_str();
  c_ode->add_option("--max-step", ode_args.params.max_step)->capture_default_str();
  c_ode->add_option("--z-cap", ode_args.params.z_cap)->capture_default_str();
  add_common(c_ode, ode_args.common, false);

  SingularityArgs sing;
  auto *c_sing = app.add_subcommand("singularity",
                                    "Locate x_c, the And giant threshold");
  c_sing->add_option("--k", sing.K, "Bias K >= 0")->capture_default_str();
  c_sing->add_option("--tol", sing.tol, "Bisection tolerance")->capture_default_str();
  add_common(c_sing, sing.common, false);

  SweepArgs sw;
  auto *c_sweep = app.add_subcommand("sweep", "Monte Carlo threshold estimates");
  c_sweep->add_option("--target", sw.target, "giant | connectivity")
      ->capture_default_str();
  c_sweep->add_option("--model", sw.models, "Comma-separated models")
      ->delimiter(',')
      ->capture_default_str();
  c_sweep->add_option("--k", sw.K_values, "Comma-separated K values")
      ->delimiter(',');
  c_sweep->add_option("--n", sw.n)->capture_default_str();
  c_sweep->add_option("--trials", sw.trials)->capture_default_str();
  c_sweep->add_option("--alpha", sw.alpha, "Giant fraction")->capture_default_str();
  c_sweep->add_option("--seed", sw.seed, "Base seed; trial i uses seed+i")
      ->capture_default_str();
  c_sweep->add_option("--sampling", sw.sampling, "exact | ordered-pair")
      ->capture_default_str();
  add_common(c_sweep, sw.common, true);

  CompareArgs cmp;
  auto *c_cmp = app.add_subcommand("compare",
                                   "Simulation of the And process vs the ODE solution");
  c_cmp->add_option("--k", cmp.K, "Bias K >= 0")->capture_default_str();
  c_cmp->add_option("--n", cmp.n)->capture_default_str();
  c_cmp->add_option("--grid", cmp.grid, "Comma-separated times")
      ->delimiter(',')
      ->capture_default_str();
  c_cmp->add_option("--seed", cmp.seed)->capture_default_str();
  c_cmp->add_option("--margin", cmp.options.margin,
                    "Required distance from x_c")
      ->capture_default_str();
  c_cmp->add_option("--y-floor", cmp.options.y_floor,
                    "Smallest admissible y on the grid")
      ->capture_default_str();
  add_common(c_cmp, cmp.common, false);

  SelftestArgs st;
  auto *c_st = app.add_subcommand("selftest",
                                  "Sampler chi-square and ODE closed-form checks");
  c_st->add_option("--draws", st.draws)->capture_default_str();
  c_st->add_option("--seed", st.seed)->capture_default_str();
  add_common(c_st, st.common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (c_sim->parsed())
      run_simulate(sim);
    else if (c_ode->parsed())
      run_ode(ode_args);
    else if (c_sing->parsed())
      run_singularity(sing);
    else if (c_sweep->parsed())
      return run_sweep(sw);
    else if (c_cmp->parsed())
      run_compare(cmp);
    else if (c_st->parsed())
      return run_selftest(st);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
