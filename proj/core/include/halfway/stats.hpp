#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace halfway {

/// Right-continuous empirical CDF: F(y) = #{samples <= y} / n.
class Ecdf {
public:
    /// Throws DomainError on an empty sample.
    explicit Ecdf(std::span<const double> samples);

    double operator()(double y) const;
    [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }
    [[nodiscard]] const std::vector<double>& sorted() const noexcept { return sorted_; }

private:
    std::vector<double> sorted_;
};

struct KsReport {
    double d_n = 0.0;
    std::size_t n = 0;
    double p_value = 1.0;

    [[nodiscard]] double scaled() const noexcept;  // d_n * sqrt(n)
};

/// D_n = sup |F_n - F| over the sorted sample, max of i/n - F(y_(i)) and
/// F(y_(i)) - (i-1)/n. The caller's data is not reordered.
[[nodiscard]] KsReport ks_statistic(std::span<const double> samples,
                                    const std::function<double(double)>& cdf);

/// Same, for a sample already sorted ascending (not checked).
[[nodiscard]] KsReport ks_statistic_sorted(std::span<const double> sorted,
                                           const std::function<double(double)>& cdf);

/// D_n from F evaluated at the sorted sample points, F(y_(1)) <= ... <= F(y_(n)).
[[nodiscard]] KsReport ks_statistic_from_cdf_values(std::span<const double> cdf_at_sorted);

/// Asymptotic Kolmogorov tail Q(lambda), lambda = d_n sqrt(n).
[[nodiscard]] double ks_p_value(double d_n, std::size_t n);
[[nodiscard]] double kolmogorov_q(double lambda);

/// Nearest-rank order statistic y_(ceil(q n)).
[[nodiscard]] double empirical_quantile(std::span<const double> samples, double q);

}  // namespace halfway
