#pragma once

namespace biasgraph::ode {

/// Limits of the observables: y ~ I (isolated fraction), z ~ S
/// (susceptibility), w ~ I2 (fraction in size-2 components).
struct Derivatives {
  double dy;
  double dz;
  double dw;
};

/// Shared denominator 1 + (K-1)(1-y)^2.
double denominator(double K, double y);

/// Right-hand side of the (y, z, w) system of the And process.
/// Throws std::domain_error where the denominator vanishes (K = 0, y = 0).
Derivatives rhs(double K, double y, double z, double w);

struct ReciprocalDerivatives {
  double dy;
  double dv;
};

/// The same system in v = 1/z:
///   v' = -(1 + (K-1)(1 - v y)^2) / (1 + (K-1)(1-y)^2),
/// which stays regular where z blows up, so the singularity is a root of v.
ReciprocalDerivatives rhs_reciprocal(double K, double y, double v);

/// K = 0 system with the common factor y cancelled:
///   y' = -1/(2-y), z' = (2z-y)/(2-y), w' = (y-2w)/(2-y),
///   v' = -(2v - v^2 y)/(2-y).
/// Valid while isolated vertices remain (y > 0) and regular up to y = 0.
struct K0Derivatives {
  double dy;
  double dz;
  double dw;
  double dv;
};
K0Derivatives rhs_k0_regularized(double y, double z, double w, double v);

} // namespace biasgraph::ode
