#pragma once

#include <span>
#include <vector>

namespace biasgraph::ode {

struct OdeParams {
  double K = 1.0;
  double t_end = 1.0;
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  double max_step = 0.05;
  /// z is frozen (reported as +inf) once it exceeds this value.
  double z_cap = 1e6;
  /// Spacing of reported samples; 0 reports every accepted step.
  double output_interval = 0.0;

  void validate() const;
};

struct TrajectorySample {
  double t;
  double y;
  double z; ///< +inf past the z cap
  double w;
  double v; ///< 1/z, integrated directly; negative past the singularity,
            ///< -inf once below -z_cap
};

struct Trajectory {
  double K = 1.0;
  std::vector<TrajectorySample> samples;
};

/// Integrates y, z, w and v = 1/z from t = 0 (y = z = v = 1, w = 0).
///
/// K > 0 uses the system as is. K = 0 is integrated in two regimes: the
/// regularized system while isolated vertices remain, then, from the root
/// y = 0 on, y = 0, z' = z^2, v' = -1 with w held at its value at the root.
/// Throws std::runtime_error on step-size underflow.
Trajectory integrate(const OdeParams &params);

/// Solution values at the given (non-negative, non-decreasing) times.
std::vector<TrajectorySample> solve_at(const OdeParams &params,
                                       std::span<const double> times);

enum class SingularityMethod { ReciprocalBisection, RegularizedK0 };

struct SingularityResult {
  double x_c;          ///< +inf if v stays positive up to the search horizon
  double achieved_tol; ///< final bracket width
  SingularityMethod method;

  bool finite() const;
};

inline constexpr double kSingularityHorizon = 10.0;

/// Singularity point x_c of z(t), i.e. the giant-component threshold of the
/// And process in n/2-edge units. K > 0 bisects the root of v on the dense
/// output. K = 0 bisects the root of y in the regularized system and
/// continues with v' = -1 from there.
SingularityResult find_singularity(double K, double tol = 1e-6,
                                   double rel_tol = 1e-9, double abs_tol = 1e-9);

/// Piecewise closed-form solution at K = 0. Past t = 3/2 the process is
/// uniform on a graph without isolated vertices: y = 0, z = 1/(x_c - t), and
/// w stays at 1/4 - 3/(4e^2). Throws std::domain_error for t < 0 or t >= x_c.
struct ClosedForm {
  double y;
  double z;
  double w;
};
ClosedForm closed_form_k0(double t);

/// K = 1: y = e^-t, z = 1/(1-t), w = t e^-2t. Throws for t >= 1.
ClosedForm closed_form_k1(double t);

/// 3/2 + 4/(3e^2 - 1).
double singularity_k0();

} // namespace biasgraph::ode

namespace biasgraph::ode {

/// Time at which y reaches `level` in (0, 1]. The y equation separates:
///   t(y) = -K ln y + (K-1)(2y - y^2/2 - 3/2).
double isolated_hitting_time(double K, double level);

} // namespace biasgraph::ode
