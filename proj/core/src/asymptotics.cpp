#include "biasgraph/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace biasgraph::asymptotics {

using std::numbers::pi;

double and_constant() {
  return pi / (2.0 * std::numbers::sqrt2) * (1.0 + pi * pi / 24.0);
}

double or_constant() { return 4.0 / std::sqrt(3.0); }

double constant_ratio() {
  return 64.0 * std::sqrt(6.0) / (pi * (24.0 + pi * pi));
}

double giant_threshold(ModelKind model, double K) {
  if (!(K > 0.0) || !std::isfinite(K))
    throw std::invalid_argument("asymptotic threshold needs finite K > 0");
  const double c = model == ModelKind::And ? and_constant() : or_constant();
  return c / std::sqrt(K);
}

double u_approx(double t, double K) {
  if (!(K > 0.0))
    throw std::invalid_argument("u_approx needs K > 0");
  // u^3 + (3/K) u - 3t/K = 0. The two cube roots multiply to -1/K, which
  // avoids the cancellation in the second one.
  const double a = 1.5 * t / K;
  const double s = std::sqrt(1.0 / (K * K * K) + a * a);
  const double c = std::cbrt(a + s);
  return c - 1.0 / (K * c);
}

double z_approx(double t, double K) {
  const double u = u_approx(t, K);
  const double arg = std::sqrt(2.0 * K) * u;
  if (arg >= pi / 2.0)
    throw std::domain_error("t = " + std::to_string(t) +
                            " lies past the approximate singularity");
  return 1.0 + std::sqrt(2.0 / K) * std::tan(arg) - u;
}

} // namespace biasgraph::asymptotics
