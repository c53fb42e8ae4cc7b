#pragma once

#include "biasgraph/graph_process.hpp"

namespace biasgraph::asymptotics {

/// (pi / 2 sqrt 2)(1 + pi^2 / 24): large-K constant of the And threshold.
double and_constant();

/// 4 / sqrt 3: large-K constant of the Or threshold.
double or_constant();

/// 64 sqrt 6 / (pi (24 + pi^2)), which equals or_constant() / and_constant().
double constant_ratio();

/// Leading-order giant threshold constant / sqrt(K). Throws for K <= 0.
double giant_threshold(ModelKind model, double K);

/// Real root u of (K/3) u^3 + u = t (Cardano). u = 1 - y to leading order.
double u_approx(double t, double K);

/// z ~ 1 + sqrt(2/K) tan(sqrt(2K) u) - u with u = u_approx(t, K).
/// Throws std::domain_error once sqrt(2K) u >= pi/2.
double z_approx(double t, double K);

} // namespace biasgraph::asymptotics
