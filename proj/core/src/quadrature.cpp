#include "halfway/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "halfway/errors.hpp"

namespace halfway {

namespace {

using Kronrod21 = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss10 = boost::math::quadrature::gauss<double, 10>;

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();
// Totals are re-summed from scratch this often to stop drift in the
// incrementally updated error.
constexpr std::size_t kResumEvery = 64;

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

bool by_error(const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; }

double checked(double value, double at) {
    if (!std::isfinite(value)) {
        throw IntegrationError("integrand is not finite at " + std::to_string(at), QuadResult{});
    }
    return value;
}

// One 21-point Kronrod panel with the embedded 10-point Gauss rule and the
// QUADPACK error heuristic (qk21).
Panel kronrod_panel(const Integrand& f, double a, double b) {
    const auto& nodes = Kronrod21::abscissa();   // nodes[0] == 0, Gauss nodes at odd indices
    const auto& kronrod = Kronrod21::weights();
    const auto& gauss = Gauss10::weights();

    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<double, 21> values{};
    values[0] = checked(f(centre), centre);
    double kronrod_sum = kronrod[0] * values[0];
    double gauss_sum = 0.0;
    double abs_sum = kronrod[0] * std::abs(values[0]);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double dx = half * nodes[i];
        const double left = checked(f(centre - dx), centre - dx);
        const double right = checked(f(centre + dx), centre + dx);
        values[2 * i - 1] = left;
        values[2 * i] = right;
        kronrod_sum += kronrod[i] * (left + right);
        abs_sum += kronrod[i] * (std::abs(left) + std::abs(right));
        if (i % 2 == 1) gauss_sum += gauss[i / 2] * (left + right);
    }

    const double mean = 0.5 * kronrod_sum;
    double asc = kronrod[0] * std::abs(values[0] - mean);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        asc += kronrod[i] * (std::abs(values[2 * i - 1] - mean) + std::abs(values[2 * i] - mean));
    }

    const double width = std::abs(half);
    asc *= width;
    abs_sum *= width;
    double error = std::abs((kronrod_sum - gauss_sum) * half);
    if (asc != 0.0 && error != 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    if (abs_sum > kTiny / (50.0 * kEpsilon)) error = std::max(50.0 * kEpsilon * abs_sum, error);
    return Panel{a, b, kronrod_sum * half, error};
}

void validate(const QuadOptions& options) {
    if (!(options.abs_tol >= 0.0) || !(options.rel_tol >= 0.0) ||
        !(options.abs_tol > 0.0 || options.rel_tol > 0.0)) {
        throw DomainError("quadrature tolerances must be >= 0 and not both zero");
    }
    if (options.max_intervals == 0) throw DomainError("max_intervals must be >= 1");
}

}  // namespace

QuadResult integrate_adaptive(const Integrand& f, double a, double b, const QuadOptions& options) {
    validate(options);
    if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
        throw DomainError("integration bounds must be finite with a < b");
    }

    std::vector<Panel> heap;
    heap.reserve(std::min<std::size_t>(options.max_intervals, 1024));
    heap.push_back(kronrod_panel(f, a, b));
    std::size_t evaluations = 21;
    double value = heap.front().value;
    double error = heap.front().error;

    auto resum = [&] {
        value = 0.0;
        error = 0.0;
        for (const Panel& p : heap) {
            value += p.value;
            error += p.error;
        }
    };
    auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(value)); };

    std::size_t splits = 0;
    while (error > tolerance() && heap.size() < options.max_intervals) {
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Panel worst = heap.back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            std::push_heap(heap.begin(), heap.end(), by_error);
            break;
        }
        const Panel left = kronrod_panel(f, worst.a, mid);
        const Panel right = kronrod_panel(f, mid, worst.b);
        evaluations += 42;
        heap.back() = left;
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);

        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if (++splits % kResumEvery == 0 || error <= tolerance()) resum();
    }
    resum();

    QuadResult result;
    result.value = value;
    result.abs_error_estimate = error;
    result.evaluations = evaluations;
    result.intervals = heap.size();
    result.converged = error <= tolerance();
    return result;
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b, double tol) {
    return integrate_adaptive(f, a, b, QuadOptions{.abs_tol = tol});
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, const QuadOptions& options, double scale) {
    if (!std::isfinite(a)) throw DomainError("lower limit must be finite");
    require_positive(scale, "scale");

    // t = a + scale * (s / (1 - s))^2 keeps tails as slow as t^{-3/2} bounded
    // in s, and 1/t^2 tails vanish linearly at s = 1.
    auto mapped = [&](double s) {
        const double rest = 1.0 - s;
        if (rest <= 0.0) return 0.0;
        const double ratio = s / rest;
        const double t = a + scale * ratio * ratio;
        if (!std::isfinite(t)) return 0.0;
        const double fx = f(t);
        if (fx == 0.0) return 0.0;
        return fx * 2.0 * scale * ratio / (rest * rest);
    };
    QuadResult result = integrate_adaptive(mapped, 0.0, 1.0, options);

    // |f(t)| (t - a + scale) must shrink along the tail for the integral to exist.
    const double near = a + 1e6 * scale;
    const double far = a + 1e12 * scale;
    const double h_near = std::abs(f(near)) * (near - a + scale);
    const double h_far = std::abs(f(far)) * (far - a + scale);
    result.evaluations += 2;
    if (!std::isfinite(h_far) || (h_far > 0.0 && h_far >= 0.5 * h_near)) {
        result.non_decaying = true;
        result.converged = false;
    }
    return result;
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, double tol, double scale) {
    return integrate_semi_infinite(f, a, QuadOptions{.abs_tol = tol}, scale);
}

double require_converged(const QuadResult& result, std::string_view what) {
    if (!result.converged) {
        std::string message(what);
        message += result.non_decaying ? ": integrand does not decay" : ": quadrature did not converge";
        message += " (estimate " + std::to_string(result.value) + ", error " +
                   std::to_string(result.abs_error_estimate) + ")";
        throw IntegrationError(message, result);
    }
    return result.value;
}

}  // namespace halfway
