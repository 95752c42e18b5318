#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "halfway/params.hpp"

namespace halfway {

using Integrand = std::function<double(double)>;

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
    /// abs_error_estimate met the requested tolerance within the budget.
    bool converged = false;
    /// Semi-infinite only: the integrand did not decay fast enough at +inf.
    bool non_decaying = false;

    friend bool operator==(const QuadResult&, const QuadResult&) = default;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    /// Converged once error <= max(abs_tol, rel_tol * |value|).
    double rel_tol = 0.0;
    std::size_t max_intervals = 10000;
};

/// Carries the best available estimate of an integral that did not converge.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, QuadResult result)
        : std::runtime_error(what), result_(result) {}

    [[nodiscard]] const QuadResult& result() const noexcept { return result_; }

private:
    QuadResult result_;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b]: the
/// interval with the largest error estimate is bisected until the total
/// error meets the tolerance or max_intervals is reached. Non-convergence
/// is reported through QuadResult::converged, never thrown. A non-finite
/// integrand value throws IntegrationError.
[[nodiscard]] QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                                            const QuadOptions& options);
[[nodiscard]] QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                                            double tol);

/// Integral over (a, inf) through t = a + scale * s / (1 - s), s in [0, 1).
/// Intended for integrands decaying at least like 1/t^2.
[[nodiscard]] QuadResult integrate_semi_infinite(const Integrand& f, double a,
                                                 const QuadOptions& options,
                                                 double scale = 1.0);
[[nodiscard]] QuadResult integrate_semi_infinite(const Integrand& f, double a, double tol,
                                                 double scale = 1.0);

/// Returns result.value, or throws IntegrationError naming `what`.
double require_converged(const QuadResult& result, std::string_view what);

/// p(u, x; y) recomputed as int_0^inf q(x, ut, y) f(y; t - ut) dt: the
/// Brownian motion survives to ut, lands at y, then first hits 0 after a
/// further (1 - u) t. Independent of halfway_density.
[[nodiscard]] double halfway_density_oracle_killed(const HalfwayParams& params, double y);

/// p(u, x; y) recomputed as int_0^inf q_{uT}(x; y) f(x; T) dT: the Bessel
/// bridge marginal averaged over the law of tau.
[[nodiscard]] double halfway_density_oracle_excursion(const HalfwayParams& params, double y);

}  // namespace halfway
