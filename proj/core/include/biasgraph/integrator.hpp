#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace biasgraph {

struct StepControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  double max_step = 0.05;
};

/// Dormand-Prince 5(4) pair with local extrapolation, FSAL, and the
/// 4th-order continuous extension of Hairer & Wanner (DOPRI5 "contd5").
///
/// `Rhs` is any callable `void(double t, const State& x, State& dx)`.
template <std::size_t N, class Rhs> class DormandPrince {
public:
  using State = std::array<double, N>;

  DormandPrince(Rhs rhs, double t0, const State &x0, StepControl control)
      : rhs_(std::move(rhs)), ctl_(control), t_(t0), x_(x0) {
    if (!(ctl_.rel_tol > 0.0) || !(ctl_.abs_tol > 0.0))
      throw std::invalid_argument("integrator tolerances must be positive");
    if (!(ctl_.max_step > 0.0))
      throw std::invalid_argument("max_step must be positive");
    rhs_(t_, x_, k1_);
    h_ = initial_step();
    t_old_ = t_;
    x_old_ = x_;
  }

  double t() const { return t_; }
  const State &state() const { return x_; }
  double t_previous() const { return t_old_; }
  const State &state_previous() const { return x_old_; }
  std::size_t accepted_steps() const { return accepted_; }

  /// Overwrites the current state (e.g. clamping) and re-evaluates the
  /// derivative used as the first stage of the next step.
  void reset_state(const State &x) {
    x_ = x;
    refresh();
  }

  /// Re-evaluates the first-stage derivative after the right-hand side
  /// changed behaviour.
  void refresh() { rhs_(t_, x_, k1_); }

  /// Takes one accepted step, never going past `t_limit`.
  void step(double t_limit) {
    if (!(t_limit > t_))
      throw std::invalid_argument("step target must lie ahead of t");
    for (;;) {
      double h = std::min({h_, ctl_.max_step, t_limit - t_});
      const bool hits_limit = (h == t_limit - t_);
      const double h_min = 16.0 * std::numeric_limits<double>::epsilon() *
                           std::max(1.0, std::abs(t_));
      if (h < h_min && !hits_limit)
        throw std::runtime_error("step size underflow at t = " +
                                 std::to_string(t_));

      const double err = attempt(h);
      if (err <= 1.0) {
        t_old_ = t_;
        x_old_ = x_;
        h_old_ = h;
        build_dense(h);
        t_ = hits_limit ? t_limit : t_ + h;
        x_ = x_new_;
        k1_ = k7_;
        ++accepted_;
        const double fac =
            err == 0.0 ? kMaxGrow
                       : std::clamp(kSafety * std::pow(err, -0.2), kMinShrink,
                                    kMaxGrow);
        // Do not let a short step that was truncated at t_limit shrink h_.
        if (!hits_limit || h * fac > h_)
          h_ = h * fac;
        return;
      }
      h_ = h * std::max(kMinShrink, kSafety * std::pow(err, -0.2));
    }
  }

  /// Continuous extension over the last accepted step, t in [t_prev, t].
  State dense(double t) const {
    const double theta = (t - t_old_) / h_old_;
    const double theta1 = 1.0 - theta;
    State out;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = r1_[i] +
               theta * (r2_[i] +
                        theta1 * (r3_[i] + theta * (r4_[i] + theta1 * r5_[i])));
    return out;
  }

private:
  static constexpr double kSafety = 0.9;
  static constexpr double kMinShrink = 0.2;
  static constexpr double kMaxGrow = 10.0;

  double norm(const State &v, const State &a, const State &b) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc =
          ctl_.abs_tol + ctl_.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
      const double r = v[i] / sc;
      sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(N));
  }

  double initial_step() {
    State zero{};
    const double d0 = norm(x_, x_, zero);
    const double d1 = norm(k1_, x_, zero);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, ctl_.max_step);
    State x1, f1;
    for (std::size_t i = 0; i < N; ++i)
      x1[i] = x_[i] + h0 * k1_[i];
    rhs_(t_ + h0, x1, f1);
    State diff;
    for (std::size_t i = 0; i < N; ++i)
      diff[i] = f1[i] - k1_[i];
    const double d2 = norm(diff, x_, zero) / h0;
    const double h1 = std::max(d1, d2) <= 1e-15
                          ? std::max(1e-6, h0 * 1e-3)
                          : std::pow(0.01 / std::max(d1, d2), 0.2);
    return std::min({100.0 * h0, h1, ctl_.max_step});
  }

  double attempt(double h) {
    State tmp;
    auto stage = [&](State &k, double c, auto... terms) {
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        ((acc += terms.first * (*terms.second)[i]), ...);
        tmp[i] = x_[i] + h * acc;
      }
      rhs_(t_ + c * h, tmp, k);
    };
    using P = std::pair<double, const State *>;
    stage(k2_, 1.0 / 5, P{1.0 / 5, &k1_});
    stage(k3_, 3.0 / 10, P{3.0 / 40, &k1_}, P{9.0 / 40, &k2_});
    stage(k4_, 4.0 / 5, P{44.0 / 45, &k1_}, P{-56.0 / 15, &k2_},
          P{32.0 / 9, &k3_});
    stage(k5_, 8.0 / 9, P{19372.0 / 6561, &k1_}, P{-25360.0 / 2187, &k2_},
          P{64448.0 / 6561, &k3_}, P{-212.0 / 729, &k4_});
    stage(k6_, 1.0, P{9017.0 / 3168, &k1_}, P{-355.0 / 33, &k2_},
          P{46732.0 / 5247, &k3_}, P{49.0 / 176, &k4_},
          P{-5103.0 / 18656, &k5_});
    for (std::size_t i = 0; i < N; ++i)
      x_new_[i] = x_[i] + h * (35.0 / 384 * k1_[i] + 500.0 / 1113 * k3_[i] +
                               125.0 / 192 * k4_[i] - 2187.0 / 6784 * k5_[i] +
                               11.0 / 84 * k6_[i]);
    rhs_(t_ + h, x_new_, k7_);

    State err;
    for (std::size_t i = 0; i < N; ++i)
      err[i] = h * (71.0 / 57600 * k1_[i] - 71.0 / 16695 * k3_[i] +
                    71.0 / 1920 * k4_[i] - 17253.0 / 339200 * k5_[i] +
                    22.0 / 525 * k6_[i] - 1.0 / 40 * k7_[i]);
    for (std::size_t i = 0; i < N; ++i)
      if (!std::isfinite(x_new_[i]) || !std::isfinite(err[i]))
        return std::numeric_limits<double>::infinity();
    return norm(err, x_, x_new_);
  }

  void build_dense(double h) {
    constexpr double d1 = -12715105075.0 / 11282082432.0;
    constexpr double d3 = 87487479700.0 / 32700410799.0;
    constexpr double d4 = -10690763975.0 / 1880347072.0;
    constexpr double d5 = 701980252875.0 / 199316789632.0;
    constexpr double d6 = -1453857185.0 / 822651844.0;
    constexpr double d7 = 69997945.0 / 29380423.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double diff = x_new_[i] - x_[i];
      const double bspl = h * k1_[i] - diff;
      r1_[i] = x_[i];
      r2_[i] = diff;
      r3_[i] = bspl;
      r4_[i] = diff - h * k7_[i] - bspl;
      r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] +
                    d6 * k6_[i] + d7 * k7_[i]);
    }
  }

  Rhs rhs_;
  StepControl ctl_;
  double t_;
  State x_;
  double h_ = 0.0;
  double h_old_ = 1.0;
  double t_old_;
  State x_old_;
  std::size_t accepted_ = 0;
  State k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, x_new_{};
  State r1_{}, r2_{}, r3_{}, r4_{}, r5_{};
};

template <std::size_t N, class Rhs>
DormandPrince(Rhs, double, const std::array<double, N> &, StepControl)
    -> DormandPrince<N, Rhs>;

} // namespace biasgraph
