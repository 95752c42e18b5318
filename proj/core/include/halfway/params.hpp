#pragma once

namespace halfway {

/// Smallest admissible distance of the time fraction u from 0 and from 1.
inline constexpr double kTimeFractionGuard = 1e-12;

/// Start point x > 0 of the Brownian motion and the fraction u of its
/// lifetime at which it is observed. Every density and sampler of the
/// halfway law B_{u tau} is parametrized by this pair.
class HalfwayParams {
public:
    /// Throws DomainError unless x > 0 (finite) and u in [1e-12, 1 - 1e-12].
    HalfwayParams(double x, double u);

    [[nodiscard]] double x() const noexcept { return x_; }
    [[nodiscard]] double u() const noexcept { return u_; }

    friend bool operator==(const HalfwayParams&, const HalfwayParams&) = default;

private:
    double x_;
    double u_;
};

/// Throws DomainError unless u is an admissible time fraction.
void require_time_fraction(double u);

/// Throws DomainError unless value is finite and > 0.
void require_positive(double value, const char* name);

/// Throws DomainError unless value is finite and >= 0.
void require_nonnegative(double value, const char* name);

}  // namespace halfway
