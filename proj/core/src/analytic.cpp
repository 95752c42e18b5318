#include "halfway/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "halfway/errors.hpp"
#include "halfway/quadrature.hpp"

namespace halfway {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;
// exp(x) is exactly 0 in double precision below this.
constexpr double kExpUnderflow = -745.0;
// halfway_cdf switches from (0, y] to the mapped tail beyond y = 100 x.
constexpr double kTailSwitch = 100.0;
constexpr double kCdfTolerance = 1e-12;
constexpr int kMaxBracketExpansions = 1000;
constexpr double kBisectionWidth = 1e-10;
// Beyond this many standard deviations the Bessel-bridge marginal is 0.
constexpr double kExcursionSupportWidth = 40.0;

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

// e^{-(y-x)^2 / 2s} (1 - e^{-2xy/s}) without the cancellation of the
// two-Gaussian difference when 2xy/s is small.
double reflected_gaussian_pair(double x, double y, double s) {
    const double d = y - x;
    const double exponent = -(d * d) / (2.0 * s);
    if (exponent < kExpUnderflow) return 0.0;
    return std::exp(exponent) * -std::expm1(-2.0 * (x * y) / s);
}

// y^2 p(u, x; y) / x written in r = x / y; tends to tail_constant / x as r -> 0.
double scaled_tail_density(double u, double r) {
    const double v = 1.0 - u;
    const double lo = (1.0 - r) * (1.0 - r) * v + u;
    const double hi = (1.0 + r) * (1.0 + r) * v + u;
    return 4.0 * std::sqrt(u * v) / (std::numbers::pi * lo * hi);
}

}  // namespace

void require_positive(double value, const char* name) {
    if (!(std::isfinite(value) && value > 0.0)) {
        throw DomainError(std::string(name) + " must be finite and > 0, got " + std::to_string(value));
    }
}

void require_nonnegative(double value, const char* name) {
    if (!(std::isfinite(value) && value >= 0.0)) {
        throw DomainError(std::string(name) + " must be finite and >= 0, got " + std::to_string(value));
    }
}

void require_time_fraction(double u) {
    if (!(u >= kTimeFractionGuard && u <= 1.0 - kTimeFractionGuard)) {
        throw DomainError("u must lie in [1e-12, 1 - 1e-12], got " + std::to_string(u));
    }
}

HalfwayParams::HalfwayParams(double x, double u) : x_(x), u_(u) {
    require_positive(x, "x");
    require_time_fraction(u);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double hitting_time_density(double x, double t) {
    require_positive(x, "x");
    require_positive(t, "t");
    const double exponent = -(x * x) / (2.0 * t);
    if (exponent < kExpUnderflow) return 0.0;
    if (t > 1e-100 && t < 1e100 && x < 1e100) {
        return x / (kSqrt2Pi * t * std::sqrt(t)) * std::exp(exponent);
    }
    const double log_density = std::log(x) - std::log(kSqrt2Pi) - 1.5 * std::log(t) + exponent;
    return log_density < kExpUnderflow ? 0.0 : std::exp(log_density);
}

double hitting_time_cdf(double x, double t) {
    require_positive(x, "x");
    if (!(t >= 0.0)) throw DomainError("t must be >= 0, got " + std::to_string(t));
    if (t == 0.0) return 0.0;
    return std::erfc(x / std::sqrt(2.0 * t));
}

double killed_transition_density(double x, double t, double y) {
    require_positive(x, "x");
    require_positive(t, "t");
    require_nonnegative(y, "y");
    return reflected_gaussian_pair(x, y, t) / std::sqrt(2.0 * std::numbers::pi * t);
}

double halfway_density(const HalfwayParams& params, double y) {
    require_nonnegative(y, "y");
    if (y == 0.0) return 0.0;
    const double x = params.x();
    const double u = params.u();
    const double v = 1.0 - u;

    // Evaluated in the ratio of the smaller to the larger of (x, y) so that
    // neither squares nor fourth powers can overflow or underflow.
    if (y >= x) {
        const double r = x / y;
        return scaled_tail_density(u, r) * r / y;
    }
    const double s = y / x;
    const double below = (s - 1.0) * (s - 1.0) * v + s * s * u;
    const double above = (s + 1.0) * (s + 1.0) * v + s * s * u;
    return 4.0 * std::sqrt(u * v) * s * s / (std::numbers::pi * x * below * above);
}

double tail_constant(const HalfwayParams& params) {
    const double u = params.u();
    return 4.0 * params.x() * std::sqrt(u * (1.0 - u)) / std::numbers::pi;
}

double halfway_cdf(const HalfwayParams& params, double y) {
    if (std::isinf(y) && y > 0.0) return 1.0;
    require_nonnegative(y, "y");
    if (y == 0.0) return 0.0;
    if (y > kTailSwitch * params.x()) return clamp_probability(1.0 - halfway_survival(params, y));

    const auto result = integrate_adaptive([&](double s) { return halfway_density(params, s); }, 0.0, y,
                                           QuadOptions{.abs_tol = kCdfTolerance});
    return clamp_probability(require_converged(result, "halfway_cdf"));
}

double halfway_survival(const HalfwayParams& params, double y) {
    if (std::isinf(y) && y > 0.0) return 0.0;
    require_nonnegative(y, "y");
    const double x = params.x();
    if (y <= kTailSwitch * x) return clamp_probability(1.0 - halfway_cdf(params, y));

    // int_y^inf p(y') dy' with y' = x / s: dy' = x / s^2 ds and p(x / s) x / s^2
    // equals scaled_tail_density(u, s), smooth on [0, x / y].
    const double u = params.u();
    const auto result = integrate_adaptive([u](double s) { return scaled_tail_density(u, s); }, 0.0, x / y,
                                           QuadOptions{.abs_tol = kCdfTolerance});
    return clamp_probability(require_converged(result, "halfway_survival"));
}

double halfway_quantile(const HalfwayParams& params, double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0, 1), got " + std::to_string(q));
    const double x = params.x();
    auto cdf = [&](double y) { return halfway_cdf(params, y); };

    // Invariant once bracketed: cdf(lo) < q <= cdf(hi).
    double lo = x * q;
    double hi = x / (1.0 - q);
    int expansions = 0;
    while (cdf(lo) >= q) {
        lo *= 0.5;
        if (++expansions > kMaxBracketExpansions) throw ConvergenceError("halfway_quantile: no lower bracket");
    }
    while (cdf(hi) < q) {
        hi *= 2.0;
        if (++expansions > kMaxBracketExpansions || std::isinf(hi)) {
            throw ConvergenceError("halfway_quantile: no upper bracket");
        }
    }
    while (hi - lo > kBisectionWidth * std::max(1.0, lo)) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        if (cdf(mid) < q) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

double excursion_marginal_density(double x, double u, double T, double y) {
    require_positive(x, "x");
    require_time_fraction(u);
    require_positive(T, "T");
    require_nonnegative(y, "y");
    if (y == 0.0) return 0.0;
    const double v = 1.0 - u;
    const double spread = T * u * v;  // variance of each bridge coordinate at uT
    // (x(1-u) - y)^2 / (2 u (1-u) T) and the reflected term differ by 2xy / (uT),
    // which is 2 * (x(1-u)) * y / spread.
    const double pair = reflected_gaussian_pair(x * v, y, spread);
    return y / (kSqrt2Pi * x * v * std::sqrt(spread)) * pair;
}

double excursion_marginal_cdf(double x, double u, double T, double y) {
    require_positive(x, "x");
    require_time_fraction(u);
    require_positive(T, "T");
    if (std::isinf(y) && y > 0.0) return 1.0;
    require_nonnegative(y, "y");
    if (y == 0.0) return 0.0;

    const double centre = x * (1.0 - u);
    const double width = kExcursionSupportWidth * std::sqrt(T * u * (1.0 - u));
    const double lower = std::max(0.0, centre - width);
    const double upper = std::min(y, centre + width);
    if (upper <= lower) return y <= lower ? 0.0 : 1.0;

    auto density = [&](double s) { return excursion_marginal_density(x, u, T, s); };
    const QuadOptions options{.abs_tol = kCdfTolerance};
    double total = 0.0;
    const double split = std::clamp(centre, lower, upper);
    if (split > lower) total += require_converged(integrate_adaptive(density, lower, split, options), "excursion_marginal_cdf");
    if (upper > split) total += require_converged(integrate_adaptive(density, split, upper, options), "excursion_marginal_cdf");
    return clamp_probability(total);
}

}  // namespace halfway
