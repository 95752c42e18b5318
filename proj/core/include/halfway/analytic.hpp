#pragma once

// Closed-form laws for Brownian motion started at x > 0 and killed at 0:
// the first hitting time tau, the killed transition density, the law of
// B_{u tau} ("halfway" law) and the single-time marginal of the 3-d Bessel
// bridge from x to 0 over [0, T].
//
// All densities return a nonnegative double. Exponents below -745 yield an
// exact 0 instead of an error. All functions are pure and thread-safe.

#include "halfway/params.hpp"

namespace halfway {

/// Standard normal CDF, 0.5 * erfc(-z / sqrt(2)).
[[nodiscard]] double normal_cdf(double z);

/// f(x; t) = x / sqrt(2 pi t^3) * exp(-x^2 / 2t), density of tau under P_x.
[[nodiscard]] double hitting_time_density(double x, double t);

/// P_x(tau <= t) = 2 Phi(-x / sqrt t) = erfc(x / sqrt(2t)).
[[nodiscard]] double hitting_time_cdf(double x, double t);

/// q(x, t, y): density of B_t on {B stayed positive on [0, t]} under P_x.
/// Evaluated as (2 pi t)^{-1/2} e^{-(y-x)^2/2t} (1 - e^{-2xy/t}), which is
/// exactly symmetric in x and y.
[[nodiscard]] double killed_transition_density(double x, double t, double y);

/// Density of B_{u tau} under P_x at level y >= 0:
///   4 sqrt(u(1-u)) x y^2 / (pi [(y-x)^2 (1-u) + y^2 u] [(y+x)^2 (1-u) + y^2 u]).
[[nodiscard]] double halfway_density(const HalfwayParams& params, double y);

/// lim_{y -> inf} y^2 p(u, x; y) = 4 x sqrt(u(1-u)) / pi.
[[nodiscard]] double tail_constant(const HalfwayParams& params);

/// P_x(B_{u tau} <= y), integrated numerically to 1e-10 absolute.
/// For y <= 100 x the density is integrated on (0, y]; beyond that the
/// complement of halfway_survival is returned.
[[nodiscard]] double halfway_cdf(const HalfwayParams& params, double y);

/// P_x(B_{u tau} > y). The tail integral is mapped onto a finite interval
/// by y' = x / s, where the integrand tends to tail_constant / x.
[[nodiscard]] double halfway_survival(const HalfwayParams& params, double y);

/// Smallest y with halfway_cdf(y) >= q, found by geometric bracketing from
/// [x q, x / (1 - q)] and bisection. Throws DomainError for q outside (0, 1)
/// and ConvergenceError if no bracket is found within 1000 expansions.
[[nodiscard]] double halfway_quantile(const HalfwayParams& params, double q);

/// q_{uT}(x; y): density at time uT of the 3-d Bessel bridge from x to 0
/// over [0, T] (equivalently the Brownian excursion from x conditioned to
/// first hit 0 at T).
[[nodiscard]] double excursion_marginal_density(double x, double u, double T, double y);

/// CDF of excursion_marginal_density in y, by adaptive quadrature.
[[nodiscard]] double excursion_marginal_cdf(double x, double u, double T, double y);

}  // namespace halfway
