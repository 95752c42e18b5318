#include "halfway/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "halfway/errors.hpp"

namespace halfway {

namespace {

constexpr double kSeriesTermCutoff = 1e-12;
// Below this lambda the alternating series converges too slowly and the
// Jacobi theta form is used instead.
constexpr double kThetaFormBelow = 1.0;
// Guards ceil(q n) against q n landing a rounding error above an integer.
constexpr double kRankSlack = 1e-9;

std::vector<double> sorted_copy(std::span<const double> samples) {
    if (samples.empty()) throw DomainError("sample must be nonempty");
    std::vector<double> sorted(samples.begin(), samples.end());
    if (std::any_of(sorted.begin(), sorted.end(), [](double v) { return std::isnan(v); })) {
        throw DomainError("sample contains NaN");
    }
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

}  // namespace

Ecdf::Ecdf(std::span<const double> samples) : sorted_(sorted_copy(samples)) {}

double Ecdf::operator()(double y) const {
    const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), y) - sorted_.begin();
    return static_cast<double>(count) / static_cast<double>(sorted_.size());
}

double KsReport::scaled() const noexcept { return d_n * std::sqrt(static_cast<double>(n)); }

KsReport ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
    const std::vector<double> sorted = sorted_copy(samples);
    return ks_statistic_sorted(sorted, cdf);
}

KsReport ks_statistic_sorted(std::span<const double> sorted, const std::function<double(double)>& cdf) {
    if (sorted.empty()) throw DomainError("sample must be nonempty");
    std::vector<double> values(sorted.size());
    std::transform(sorted.begin(), sorted.end(), values.begin(), cdf);
    return ks_statistic_from_cdf_values(values);
}

KsReport ks_statistic_from_cdf_values(std::span<const double> cdf_at_sorted) {
    if (cdf_at_sorted.empty()) throw DomainError("sample must be nonempty");
    const auto n = static_cast<double>(cdf_at_sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < cdf_at_sorted.size(); ++i) {
        const double f = cdf_at_sorted[i];
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    KsReport report;
    report.d_n = std::clamp(d, 0.0, 1.0);
    report.n = cdf_at_sorted.size();
    report.p_value = ks_p_value(report.d_n, report.n);
    return report;
}

double kolmogorov_q(double lambda) {
    if (std::isnan(lambda)) throw DomainError("lambda is NaN");
    if (lambda <= 0.0) return 1.0;
    double q = 0.0;
    if (lambda < kThetaFormBelow) {
        // 1 - sqrt(2 pi) / lambda * sum_k exp(-(2k-1)^2 pi^2 / (8 lambda^2))
        const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double sum = 0.0;
        for (int k = 1;; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(-odd * odd * c);
            sum += term;
            if (term < kSeriesTermCutoff * 1e-4) break;
        }
        q = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
    } else {
        double sign = 1.0;
        for (int k = 1;; ++k) {
            const double term = std::exp(-2.0 * k * k * lambda * lambda);
            q += sign * term;
            sign = -sign;
            if (term < kSeriesTermCutoff) break;
        }
        q *= 2.0;
    }
    return std::clamp(q, 0.0, 1.0);
}

double ks_p_value(double d_n, std::size_t n) {
    if (!(d_n >= 0.0 && d_n <= 1.0)) throw DomainError("d_n must lie in [0, 1]");
    if (n == 0) throw DomainError("n must be >= 1");
    return kolmogorov_q(d_n * std::sqrt(static_cast<double>(n)));
}

double empirical_quantile(std::span<const double> samples, double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0, 1), got " + std::to_string(q));
    std::vector<double> sorted = sorted_copy(samples);
    const auto n = static_cast<double>(sorted.size());
    const double rank = std::clamp(std::ceil(q * n - kRankSlack), 1.0, n);
    return sorted[static_cast<std::size_t>(rank) - 1];
}

}  // namespace halfway
