#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "halfway/params.hpp"
#include "halfway/rng.hpp"

namespace halfway {

/// tau under P_x, drawn as (x / Z)^2 with Z standard normal (Z == 0 redrawn).
[[nodiscard]] double sample_tau(RngStream& stream, double x);

/// R_{uT} = b sqrt((xi + a)^2 + theta) with a = x sqrt((1-u)/(Tu)),
/// b = sqrt((1-u) T u), given the underlying draws xi ~ N(0,1) and
/// theta ~ Exp(1/2). Exposed so the construction can be driven directly.
[[nodiscard]] double excursion_from_draws(double x, double u, double T, double xi, double theta);

/// Exact draw of the 3-d Bessel bridge from x to 0 over [0, T] at time uT.
[[nodiscard]] double sample_excursion_at(RngStream& stream, double x, double u, double T);

/// Exact draw of B_{u tau}: T <- sample_tau(x), then sample_excursion_at(x, u, T).
/// Homogeneous in x: for a fixed stream state the draw at 2x is exactly twice
/// the draw at x.
[[nodiscard]] double sample_halfway_exact(RngStream& stream, const HalfwayParams& params);

struct PathConfig {
    double dt = 1e-3;
    double t_max = 1e6;
    bool bridge_correction = true;
    /// Observer thinning: report every record_every-th grid point.
    std::uint32_t record_every = 1;

    /// Defaults with the censoring horizon t_max = 1e6 x^2.
    [[nodiscard]] static PathConfig for_start(double x);

    /// Throws DomainError on dt <= 0, t_max < dt, a step count beyond
    /// 2^53, or record_every == 0.
    void validate() const;

    friend bool operator==(const PathConfig&, const PathConfig&) = default;
};

struct PathOutcome {
    bool hit = false;
    bool censored = false;
    double tau_hat = 0.0;
    /// Present iff hit.
    std::optional<double> value_at_u_tau;
    std::uint64_t steps = 0;
};

/// Main and auxiliary streams of one path simulator. Phase 1 consumes
/// only `main` so it can be replayed; crossing uniforms and the phase-2
/// conditional draw come from `aux`.
struct PathStreams {
    PathStreams(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : main(seed, stream_id, 0), aux(seed, stream_id, 1) {}

    RngStream main;
    RngStream aux;
};

/// Called with (t_k, B_k) on every record_every-th grid point of phase 1.
using PathObserver = std::function<void(double, double)>;

/// Euler path of B from x on the grid t_k = k dt until the first detected
/// crossing of 0 (linear interpolation when B_{k+1} <= 0; right endpoint
/// when the bridge-crossing test fires) or censoring at t_max. The value at
/// u tau_hat is then drawn by replaying the main stream to the enclosing
/// grid interval and sampling the positive Brownian bridge between the
/// replayed endpoints (Bessel bridge to 0 in the final step). Memory is O(1).
[[nodiscard]] PathOutcome simulate_path_halfway(PathStreams& streams, const HalfwayParams& params,
                                                const PathConfig& config,
                                                const PathObserver& observer = {});

enum class SamplingMethod { exact, path };

[[nodiscard]] std::string_view to_string(SamplingMethod method) noexcept;
/// Throws DomainError for anything but "exact" / "path".
[[nodiscard]] SamplingMethod parse_sampling_method(std::string_view text);

struct SampleBatch {
    std::vector<double> values;
    HalfwayParams params;
    SamplingMethod method = SamplingMethod::exact;
    std::optional<PathConfig> path_config;
    std::uint64_t seed = 0;
    std::size_t n_streams = 1;
    std::size_t n_requested = 0;
    std::size_t n_censored = 0;
};

/// n draws split over n_streams streams with ids 0..n_streams-1; stream s
/// gets n / n_streams draws plus one if s < n % n_streams. Values are
/// concatenated in stream order, so the batch depends only on the inputs and
/// not on `threads`. Censored paths are counted and left out of values.
[[nodiscard]] SampleBatch sample_batch(const HalfwayParams& params, std::size_t n, SamplingMethod method,
                                       const PathConfig& config, std::uint64_t seed, std::size_t n_streams,
                                       std::size_t threads = 1);

}  // namespace halfway
