#include "biasgraph/ode_system.hpp"

#include <stdexcept>
#include <string>

namespace biasgraph::ode {

double denominator(double K, double y) {
  const double u = 1.0 - y;
  return 1.0 + (K - 1.0) * u * u;
}

namespace {
double checked_denominator(double K, double y) {
  const double d = denominator(K, y);
  if (!(d > 0.0))
    throw std::domain_error("singular denominator 1+(K-1)(1-y)^2 at K = " +
                            std::to_string(K) + ", y = " + std::to_string(y));
  return d;
}
} // namespace

Derivatives rhs(double K, double y, double z, double w) {
  const double d = checked_denominator(K, y);
  const double zy = z - y;
  return {-y / d, (z * z + (K - 1.0) * zy * zy) / d,
          (y * y - 2.0 * w * y - 2.0 * K * w * (1.0 - y)) / d};
}

ReciprocalDerivatives rhs_reciprocal(double K, double y, double v) {
  const double d = checked_denominator(K, y);
  const double s = 1.0 - v * y;
  return {-y / d, -(1.0 + (K - 1.0) * s * s) / d};
}

K0Derivatives rhs_k0_regularized(double y, double z, double w, double v) {
  const double d = 2.0 - y;
  return {-1.0 / d, (2.0 * z - y) / d, (y - 2.0 * w) / d,
          -(2.0 * v - v * v * y) / d};
}

} // namespace biasgraph::ode
