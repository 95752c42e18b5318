#include "halfway/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "halfway/errors.hpp"
#include "halfway/parallel.hpp"

namespace halfway {

namespace {

// A crossing probability exp(-e) with e above this is below the 2^-53
// resolution of RngStream::uniform, so no uniform is drawn.
constexpr double kCrossingExponentCutoff = 38.0;
constexpr int kMaxBridgeRejections = 10000;
constexpr double kMaxSteps = 9007199254740992.0;  // 2^53

// Shared by phase 1 and the phase-2 replay so both produce identical bits.
inline double euler_step(double b, double sqrt_dt, double z) { return b + sqrt_dt * z; }

// Brownian bridge from `start` (time 0) to `end` (time before + after),
// conditioned to stay positive, observed at time `before`.
double positive_bridge_at(RngStream& aux, double start, double end, double before, double after) {
    if (before <= 0.0) return start;
    if (after <= 0.0) return end;
    const double span = before + after;
    const double mean = start + (end - start) * (before / span);
    const double sd = std::sqrt(before * after / span);
    for (int attempt = 0; attempt < kMaxBridgeRejections; ++attempt) {
        const double z = mean + sd * aux.normal();
        if (z <= 0.0) continue;
        const double survive = -std::expm1(-2.0 * start * z / before) * -std::expm1(-2.0 * z * end / after);
        if (aux.uniform() < survive) return z;
    }
    // Only reachable when an endpoint sits far below sqrt(span).
    return std::abs(mean + sd * aux.normal());
}

// 3-d Bessel bridge from `start` to 0 over `span`, observed at fraction v.
double bessel_bridge_to_zero(RngStream& aux, double start, double v, double span) {
    if (!(span > 0.0) || !(v > kTimeFractionGuard) || start <= 0.0) return start;
    v = std::min(v, 1.0 - kTimeFractionGuard);
    return sample_excursion_at(aux, start, v, span);
}

}  // namespace

double sample_tau(RngStream& stream, double x) {
    require_positive(x, "x");
    double z = 0.0;
    do {
        z = stream.normal();
    } while (z == 0.0);
    const double w = x / z;
    return w * w;
}

double excursion_from_draws(double x, double u, double T, double xi, double theta) {
    require_positive(x, "x");
    require_time_fraction(u);
    require_positive(T, "T");
    require_nonnegative(theta, "theta");
    // Written so that (x, T) -> (2x, 4T) scales every intermediate by an exact
    // power of two.
    const double v = 1.0 - u;
    const double elapsed = T * u;
    const double a = x * std::sqrt(v / elapsed);
    const double b = std::sqrt(v * elapsed);
    const double shifted = xi + a;
    return b * std::sqrt(shifted * shifted + theta);
}

double sample_excursion_at(RngStream& stream, double x, double u, double T) {
    require_positive(x, "x");
    require_time_fraction(u);
    require_positive(T, "T");
    const double xi = stream.normal();
    const double theta = stream.exponential(0.5);
    return excursion_from_draws(x, u, T, xi, theta);
}

double sample_halfway_exact(RngStream& stream, const HalfwayParams& params) {
    const double T = sample_tau(stream, params.x());
    return sample_excursion_at(stream, params.x(), params.u(), T);
}

PathConfig PathConfig::for_start(double x) {
    require_positive(x, "x");
    PathConfig config;
    config.t_max = 1e6 * x * x;
    return config;
}

void PathConfig::validate() const {
    require_positive(dt, "dt");
    require_positive(t_max, "t_max");
    if (t_max < dt) throw DomainError("t_max must be >= dt");
    if (std::ceil(t_max / dt) > kMaxSteps) throw DomainError("t_max / dt exceeds the step counter");
    if (record_every == 0) throw DomainError("record_every must be >= 1");
}

PathOutcome simulate_path_halfway(PathStreams& streams, const HalfwayParams& params, const PathConfig& config,
                                  const PathObserver& observer) {
    config.validate();
    const double x = params.x();
    const double dt = config.dt;
    const double sqrt_dt = std::sqrt(dt);
    const auto n_steps = static_cast<std::uint64_t>(std::ceil(config.t_max / dt));
    const std::uint64_t start = streams.main.position();

    // Phase 1: walk until the first detected crossing.
    PathOutcome outcome;
    double b = x;
    std::uint64_t k = 0;
    for (; k < n_steps; ++k) {
        if (observer && k % config.record_every == 0) observer(static_cast<double>(k) * dt, b);
        const double next = euler_step(b, sqrt_dt, streams.main.normal());
        if (next <= 0.0) {
            outcome.tau_hat = static_cast<double>(k) * dt + dt * b / (b - next);
            outcome.hit = true;
            break;
        }
        if (config.bridge_correction) {
            const double exponent = 2.0 * b * next / dt;
            if (exponent < kCrossingExponentCutoff && streams.aux.uniform() < std::exp(-exponent)) {
                outcome.tau_hat = static_cast<double>(k + 1) * dt;
                outcome.hit = true;
                break;
            }
        }
        b = next;
    }
    outcome.steps = outcome.hit ? k + 1 : k;
    if (!outcome.hit || outcome.tau_hat > config.t_max) {
        outcome.hit = false;
        outcome.censored = true;
        return outcome;
    }

    // Phase 2: replay the main stream to the grid interval holding u * tau_hat.
    const double target = params.u() * outcome.tau_hat;
    const auto j = std::min(static_cast<std::uint64_t>(std::floor(target / dt)), k);
    const std::uint64_t resume = streams.main.position();
    streams.main.seek(start);
    double left = x;
    for (std::uint64_t i = 0; i < j; ++i) left = euler_step(left, sqrt_dt, streams.main.normal());

    const double t_left = static_cast<double>(j) * dt;
    if (j < k) {
        const double right = euler_step(left, sqrt_dt, streams.main.normal());
        const double t_right = static_cast<double>(j + 1) * dt;
        outcome.value_at_u_tau = positive_bridge_at(streams.aux, left, right, target - t_left, t_right - target);
    } else {
        const double span = outcome.tau_hat - t_left;
        outcome.value_at_u_tau = bessel_bridge_to_zero(streams.aux, left, (target - t_left) / span, span);
    }
    streams.main.seek(resume);
    return outcome;
}

std::string_view to_string(SamplingMethod method) noexcept {
    return method == SamplingMethod::exact ? "exact" : "path";
}

SamplingMethod parse_sampling_method(std::string_view text) {
    if (text == "exact") return SamplingMethod::exact;
    if (text == "path") return SamplingMethod::path;
    throw DomainError("unknown sampling method '" + std::string(text) + "'");
}

SampleBatch sample_batch(const HalfwayParams& params, std::size_t n, SamplingMethod method, const PathConfig& config,
                         std::uint64_t seed, std::size_t n_streams, std::size_t threads) {
    if (n == 0) throw DomainError("n must be >= 1");
    if (n_streams == 0) throw DomainError("n_streams must be >= 1");
    if (threads == 0) throw DomainError("threads must be >= 1");
    if (method == SamplingMethod::path) config.validate();

    struct Part {
        std::vector<double> values;
        std::size_t censored = 0;
    };
    std::vector<Part> parts(n_streams);

    parallel_for(n_streams, threads, [&](std::size_t s) {
        const std::size_t count = n / n_streams + (s < n % n_streams ? 1 : 0);
        Part& part = parts[s];
        part.values.reserve(count);
        if (method == SamplingMethod::exact) {
            RngStream stream(seed, s);
            for (std::size_t i = 0; i < count; ++i) part.values.push_back(sample_halfway_exact(stream, params));
            return;
        }
        PathStreams streams(seed, s);
        for (std::size_t i = 0; i < count; ++i) {
            const PathOutcome outcome = simulate_path_halfway(streams, params, config);
            if (outcome.censored) {
                ++part.censored;
            } else {
                part.values.push_back(*outcome.value_at_u_tau);
            }
        }
    });

    SampleBatch batch{.values = {},
                      .params = params,
                      .method = method,
                      .path_config = method == SamplingMethod::path ? std::optional(config) : std::nullopt,
                      .seed = seed,
                      .n_streams = n_streams,
                      .n_requested = n,
                      .n_censored = 0};
    batch.values.reserve(n);
    for (const Part& part : parts) {
        batch.values.insert(batch.values.end(), part.values.begin(), part.values.end());
        batch.n_censored += part.censored;
    }
    return batch;
}

}  // namespace halfway
