#include <cmath>

#include "halfway/analytic.hpp"
#include "halfway/errors.hpp"
#include "halfway/quadrature.hpp"

namespace halfway {

namespace {

// Relative accuracy of the oracle integrals; 1e4 below the agreement target.
constexpr QuadOptions kOracleOptions{.abs_tol = 0.0, .rel_tol = 1e-10, .max_intervals = 10000};

void require_positive_level(double y) {
    if (!(std::isfinite(y) && y > 0.0)) throw DomainError("oracle level y must be finite and > 0");
}

}  // namespace

double halfway_density_oracle_killed(const HalfwayParams& params, double y) {
    require_positive_level(y);
    const double x = params.x();
    const double u = params.u();
    // Survive to ut landing at y, then hit 0 from y after a further (1-u)t.
    auto integrand = [=](double t) {
        if (t <= 0.0) return 0.0;
        return killed_transition_density(x, u * t, y) * hitting_time_density(y, (1.0 - u) * t);
    };
    const auto result = integrate_semi_infinite(integrand, 0.0, kOracleOptions, x * x + y * y);
    return require_converged(result, "halfway_density_oracle_killed");
}

double halfway_density_oracle_excursion(const HalfwayParams& params, double y) {
    require_positive_level(y);
    const double x = params.x();
    const double u = params.u();
    // Bessel bridge of length T observed at uT, T distributed as tau.
    auto integrand = [=](double T) {
        if (T <= 0.0) return 0.0;
        return excursion_marginal_density(x, u, T, y) * hitting_time_density(x, T);
    };
    const auto result = integrate_semi_infinite(integrand, 0.0, kOracleOptions, x * x + y * y);
    return require_converged(result, "halfway_density_oracle_excursion");
}

}  // namespace halfway
