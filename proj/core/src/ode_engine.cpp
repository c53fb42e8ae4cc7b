#include "biasgraph/ode_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "biasgraph/integrator.hpp"
#include "biasgraph/ode_system.hpp"

namespace biasgraph::ode {

namespace {

using State4 = std::array<double, 4>; // y, z, w, v
constexpr double kInf = std::numeric_limits<double>::infinity();

// Past the blow-up z is held at the cap; v then runs into a pole of its own
// and is held once it drops below -cap.
struct Frozen {
  bool z = false;
  bool v = false;
};

// Collects trajectory samples either at every accepted step or at a fixed
// list of times.
class Recorder {
public:
  Recorder(double z_cap, std::optional<std::vector<double>> times)
      : z_cap_(z_cap), times_(std::move(times)) {}

  void record(double t, const State4 &x, Frozen frozen) {
    const double z = (frozen.z || x[1] > z_cap_) ? kInf : x[1];
    const double v = (frozen.v || x[3] < -z_cap_) ? -kInf : x[3];
    out_.push_back({t, x[0], z, x[2], v});
  }

  /// Emits the samples that fall in (t_lo, t_hi], given an evaluator of the
  /// state on that interval.
  template <class Eval>
  void emit(double t_hi, Frozen frozen, const Eval &eval) {
    if (!times_) {
      record(t_hi, eval(t_hi), frozen);
      return;
    }
    while (next_ < times_->size() && (*times_)[next_] <= t_hi) {
      const double t = (*times_)[next_++];
      record(t, eval(t), frozen);
    }
  }

  bool done() const { return times_ && next_ == times_->size(); }
  std::vector<TrajectorySample> take() { return std::move(out_); }

  /// Records pending samples at t = 0.
  void start(const State4 &x0) {
    if (!times_) {
      record(0.0, x0, {});
      return;
    }
    while (next_ < times_->size() && (*times_)[next_] <= 0.0)
      record((*times_)[next_++], x0, {});
  }

private:
  double z_cap_;
  std::optional<std::vector<double>> times_;
  std::size_t next_ = 0;
  std::vector<TrajectorySample> out_;
};

/// Steps `solver` to `t_end`, freezing z and v past the cap and clamping y into
/// [0, 1]. If `stop_on_y_root` is set, stops at the first root of y and
/// returns its location and the state there.
template <class Solver>
std::optional<std::pair<double, State4>>
drive(Solver &solver, double t_end, double z_cap, Frozen &frozen,
      Recorder &rec, bool stop_on_y_root) {
  while (solver.t() < t_end && !rec.done()) {
    solver.step(t_end);
    auto eval = [&](double t) { return solver.dense(t); };

    if (stop_on_y_root && solver.state()[0] <= 0.0) {
      double a = solver.t_previous();
      double b = solver.t();
      while (b - a > 4.0 * std::numeric_limits<double>::epsilon() * b) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b)
          break;
        (solver.dense(mid)[0] > 0.0 ? a : b) = mid;
      }
      State4 at_root = solver.dense(b);
      at_root[0] = 0.0;
      rec.emit(b, frozen, [&](double t) {
        return t >= b ? at_root : solver.dense(t);
      });
      return std::pair{b, at_root};
    }

    rec.emit(solver.t(), frozen, eval);

    State4 x = solver.state();
    bool changed = false;
    if (x[0] < 0.0 || x[0] > 1.0) {
      x[0] = std::clamp(x[0], 0.0, 1.0);
      changed = true;
    }
    if (!frozen.z && x[1] > z_cap) {
      frozen.z = true;
      changed = true;
    }
    if (!frozen.v && x[3] < -z_cap) {
      frozen.v = true;
      changed = true;
    }
    if (changed)
      solver.reset_state(x);
  }
  return std::nullopt;
}

std::vector<TrajectorySample> solve(const OdeParams &p,
                                    std::optional<std::vector<double>> times) {
  p.validate();
  const StepControl ctl{p.rel_tol, p.abs_tol, p.max_step};
  Recorder rec(p.z_cap, std::move(times));
  const State4 x0{1.0, 1.0, 0.0, 1.0};
  rec.start(x0);
  Frozen frozen;

  if (p.K > 0.0) {
    const double K = p.K;
    auto f = [&frozen, K](double, const State4 &x, State4 &dx) {
      const auto d = rhs(K, x[0], x[1], x[2]);
      const auto r = rhs_reciprocal(K, x[0], x[3]);
      dx = {d.dy, frozen.z ? 0.0 : d.dz, d.dw, frozen.v ? 0.0 : r.dv};
    };
    DormandPrince solver(f, 0.0, x0, ctl);
    drive(solver, p.t_end, p.z_cap, frozen, rec, false);
    return rec.take();
  }

  // K = 0, regime 1: isolated vertices remain.
  auto f0 = [&frozen](double, const State4 &x, State4 &dx) {
    const auto d = rhs_k0_regularized(x[0], x[1], x[2], x[3]);
    dx = {d.dy, frozen.z ? 0.0 : d.dz, d.dw, frozen.v ? 0.0 : d.dv};
  };
  DormandPrince first(f0, 0.0, x0, ctl);
  const auto root = drive(first, p.t_end, p.z_cap, frozen, rec, true);
  if (!root)
    return rec.take();

  // Regime 2: no isolated vertices, edges are uniform over missing pairs.
  auto f1 = [&frozen](double, const State4 &x, State4 &dx) {
    dx = {0.0, frozen.z ? 0.0 : x[1] * x[1], 0.0, frozen.v ? 0.0 : -1.0};
  };
  const auto [t0, x_root] = *root;
  if (t0 < p.t_end) {
    DormandPrince second(f1, t0, x_root, ctl);
    drive(second, p.t_end, p.z_cap, frozen, rec, false);
  }
  return rec.take();
}

} // namespace

void OdeParams::validate() const {
  if (!std::isfinite(K) || K < 0.0)
    throw std::invalid_argument("K must be finite and >= 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw std::invalid_argument("t_end must be positive");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  if (!(max_step > 0.0))
    throw std::invalid_argument("max_step must be positive");
  if (!(z_cap > 1.0))
    throw std::invalid_argument("z_cap must exceed 1");
  if (!(output_interval >= 0.0))
    throw std::invalid_argument("output_interval must be >= 0");
}

Trajectory integrate(const OdeParams &params) {
  params.validate();
  std::optional<std::vector<double>> times;
  if (params.output_interval > 0.0) {
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(
        std::floor(params.t_end / params.output_interval + 1e-9));
    for (std::size_t i = 0; i <= count; ++i)
      grid.push_back(std::min(params.t_end,
                              static_cast<double>(i) * params.output_interval));
    if (grid.back() < params.t_end)
      grid.push_back(params.t_end);
    times = std::move(grid);
  }
  return {params.K, solve(params, std::move(times))};
}

std::vector<TrajectorySample> solve_at(const OdeParams &params,
                                       std::span<const double> times) {
  if (times.empty())
    return {};
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0)
    throw std::invalid_argument(
        "sample times must be non-negative and non-decreasing");
  OdeParams p = params;
  p.t_end = std::max(times.back(), 1e-12);
  return solve(p, std::vector<double>(times.begin(), times.end()));
}

bool SingularityResult::finite() const { return std::isfinite(x_c); }

double singularity_k0() {
  return 1.5 + 4.0 / (3.0 * std::exp(2.0) - 1.0);
}

namespace {

// K = 0: integrate (y, v) in the regularized form up to the root of y. Past
// it v' = -1, so x_c = t0 + v(t0) unless v reached zero first.
SingularityResult singularity_k0_numeric(double tol, double rel_tol,
                                         double abs_tol) {
  using State2 = std::array<double, 2>;
  auto f = [](double, const State2 &x, State2 &dx) {
    const auto d = rhs_k0_regularized(x[0], 0.0, 0.0, x[1]);
    dx = {d.dy, d.dv};
  };
  DormandPrince solver(f, 0.0, State2{1.0, 1.0},
                       StepControl{rel_tol, abs_tol, 0.05});
  while (solver.t() < kSingularityHorizon) {
    solver.step(kSingularityHorizon);
    const auto &x = solver.state();
    if (x[0] > 0.0 && x[1] > 0.0)
      continue;
    const int idx = x[1] <= 0.0 && !(x[0] <= 0.0) ? 1 : 0;
    double a = solver.t_previous();
    double b = solver.t();
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      (solver.dense(mid)[idx] > 0.0 ? a : b) = mid;
    }
    const double t0 = 0.5 * (a + b);
    if (idx == 1)
      return {t0, b - a, SingularityMethod::ReciprocalBisection};
    return {t0 + solver.dense(t0)[1], b - a, SingularityMethod::RegularizedK0};
  }
  return {kInf, 0.0, SingularityMethod::RegularizedK0};
}

} // namespace

SingularityResult find_singularity(double K, double tol, double rel_tol,
                                   double abs_tol) {
  if (!(tol > 0.0))
    throw std::invalid_argument("singularity tolerance must be positive");
  if (!std::isfinite(K) || K < 0.0)
    throw std::invalid_argument("K must be finite and >= 0");
  if (K == 0.0)
    return singularity_k0_numeric(tol, rel_tol, abs_tol);

  using State2 = std::array<double, 2>; // y, v
  auto f = [K](double, const State2 &x, State2 &dx) {
    const auto d = rhs_reciprocal(K, x[0], x[1]);
    dx = {d.dy, d.dv};
  };
  DormandPrince solver(f, 0.0, State2{1.0, 1.0},
                       StepControl{rel_tol, abs_tol, 0.05});
  while (solver.t() < kSingularityHorizon) {
    solver.step(kSingularityHorizon);
    if (solver.state()[1] > 0.0)
      continue;
    double a = solver.t_previous();
    double b = solver.t();
    if (solver.state()[1] == 0.0)
      return {b, 0.0, SingularityMethod::ReciprocalBisection};
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      (solver.dense(mid)[1] > 0.0 ? a : b) = mid;
    }
    return {0.5 * (a + b), b - a, SingularityMethod::ReciprocalBisection};
  }
  return {kInf, 0.0, SingularityMethod::ReciprocalBisection};
}

ClosedForm closed_form_k0(double t) {
  const double x_c = singularity_k0();
  if (!(t >= 0.0))
    throw std::domain_error("closed form requires t >= 0");
  if (t >= x_c)
    throw std::domain_error("t = " + std::to_string(t) +
                            " is at or past the singularity " +
                            std::to_string(x_c));
  if (t <= 1.5) {
    const double s = std::sqrt(1.0 + 2.0 * t);
    return {2.0 - s, 0.75 * std::exp(2.0 * (s - 1.0)) - 0.5 * s + 0.75,
            1.25 - 0.75 * std::exp(2.0 * (1.0 - s)) - 0.5 * s};
  }
  return {0.0, 1.0 / (x_c - t), 0.25 - 0.75 / std::exp(2.0)};
}

ClosedForm closed_form_k1(double t) {
  if (!(t >= 0.0) || t >= 1.0)
    throw std::domain_error("K = 1 closed form requires 0 <= t < 1");
  return {std::exp(-t), 1.0 / (1.0 - t), t * std::exp(-2.0 * t)};
}

} // namespace biasgraph::ode

namespace biasgraph::ode {

double isolated_hitting_time(double K, double level) {
  if (!(level > 0.0 && level <= 1.0))
    throw std::invalid_argument("level must lie in (0, 1]");
  if (!(K >= 0.0))
    throw std::invalid_argument("K must be >= 0");
  const double y = level;
  return -K * std::log(y) + (K - 1.0) * (2.0 * y - 0.5 * y * y - 1.5);
}

} // namespace biasgraph::ode
