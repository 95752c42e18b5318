#include "halfway/validation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <memory>
#include <string>

#include "halfway/analytic.hpp"
#include "halfway/errors.hpp"
#include "halfway/parallel.hpp"
#include "halfway/quadrature.hpp"
#include "halfway/samplers.hpp"
#include "halfway/stats.hpp"

#ifndef HALFWAY_VERSION
#define HALFWAY_VERSION "0.0.0"
#endif

namespace halfway {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr std::array kGridU{0.1, 0.25, 0.5, 0.75, 0.9};
constexpr std::array kGridX{0.5, 1.0, 2.0};
constexpr std::size_t kGridLevels = 40;
constexpr double kGridLowOverX = 0.01;
constexpr double kGridHighOverX = 100.0;

constexpr double kAgreementTolerance = 1e-6;
constexpr double kNormalizationTolerance = 1e-8;
constexpr double kScaleTolerance = 1e-12;
constexpr double kTailLevelOverX = 1e3;
constexpr double kTailTolerance = 1e-4;
constexpr std::array kRoundtripLevels{0.01, 0.1, 0.5, 0.9, 0.99};
constexpr double kRoundtripTolerance = 1e-8;
constexpr double kKsLambda = 1.358;
constexpr double kKsLambdaP = 0.05;
constexpr double kKsLambdaTolerance = 0.002;

constexpr std::size_t kStreams = 8;
constexpr std::size_t kSamplerDraws = 100000;
constexpr double kKsScaledTolerance = 1.95;

constexpr double kPathU = 0.5;
constexpr double kPathX = 1.0;
constexpr double kPathTmax = 1e4;
constexpr std::array kPathLadder{1e-1, 1e-2, 1e-3};
constexpr std::size_t kPathUncensored = 20000;
constexpr double kPathKsTolerance = 0.02;

constexpr double kCensorTmax = 1e6;
constexpr double kCensorDt = 1.0;
constexpr std::size_t kCensorPaths = 100000;
constexpr double kCensorTolerance = 3e-4;

struct GridPair {
    double u;
    double x;
};

std::vector<GridPair> grid_pairs() {
    std::vector<GridPair> pairs;
    for (double u : kGridU) {
        for (double x : kGridX) pairs.push_back({u, x});
    }
    return pairs;
}

double grid_level(double x, std::size_t i) {
    const double lo = std::log10(kGridLowOverX);
    const double hi = std::log10(kGridHighOverX);
    const double step = (hi - lo) / static_cast<double>(kGridLevels - 1);
    return x * std::pow(10.0, lo + step * static_cast<double>(i));
}

json grid_parameters() {
    return json{{"u", kGridU}, {"x", kGridX}, {"y_levels", kGridLevels},
                {"y_over_x", {kGridLowOverX, kGridHighOverX}}, {"y_spacing", "log"}};
}

CheckRecord make_record(std::string_view name, json parameters, double observed, double threshold,
                        Comparison comparison = Comparison::less_equal) {
    CheckRecord record;
    record.name = std::string(name);
    record.parameters = std::move(parameters);
    record.observed = observed;
    record.threshold = threshold;
    record.comparison = comparison;
    record.pass = comparison == Comparison::less ? observed < threshold : observed <= threshold;
    return record;
}

// KS distance of `values` to `cdf`, with the CDF evaluated in parallel.
KsReport parallel_ks(std::vector<double> values, const std::function<double(double)>& cdf, std::size_t threads) {
    std::sort(values.begin(), values.end());
    std::vector<double> at(values.size());
    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks = (values.size() + kChunk - 1) / kChunk;
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t end = std::min(values.size(), (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) at[i] = cdf(values[i]);
    });
    return ks_statistic_from_cdf_values(at);
}

// n draws of `draw` over kStreams streams, concatenated in stream order.
std::vector<double> draw_streams(std::size_t n, std::uint64_t seed, std::size_t threads,
                                 const std::function<double(RngStream&)>& draw) {
    std::vector<std::vector<double>> parts(kStreams);
    parallel_for(kStreams, threads, [&](std::size_t s) {
        RngStream stream(seed, s);
        const std::size_t count = n / kStreams + (s < n % kStreams ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i) parts[s].push_back(draw(stream));
    });
    std::vector<double> values;
    values.reserve(n);
    for (const auto& part : parts) values.insert(values.end(), part.begin(), part.end());
    return values;
}

CheckRecord check_three_way(std::size_t threads) {
    const auto pairs = grid_pairs();
    const std::size_t total = pairs.size() * kGridLevels;
    std::vector<double> worst(total);
    parallel_for(total, threads, [&](std::size_t k) {
        const GridPair& g = pairs[k / kGridLevels];
        const HalfwayParams params(g.x, g.u);
        const double y = grid_level(g.x, k % kGridLevels);
        const double closed = halfway_density(params, y);
        const double killed = halfway_density_oracle_killed(params, y);
        const double excursion = halfway_density_oracle_excursion(params, y);
        worst[k] = std::max({std::abs(killed - closed), std::abs(excursion - closed), std::abs(killed - excursion)}) /
                   closed;
    });
    const auto at = std::max_element(worst.begin(), worst.end()) - worst.begin();
    const GridPair& g = pairs[static_cast<std::size_t>(at) / kGridLevels];
    json parameters = grid_parameters();
    parameters["worst_at"] = {{"u", g.u}, {"x", g.x}, {"y", grid_level(g.x, static_cast<std::size_t>(at) % kGridLevels)}};
    return make_record(checks::kThreeWay, std::move(parameters), worst[static_cast<std::size_t>(at)],
                       kAgreementTolerance);
}

CheckRecord check_normalization(std::size_t threads) {
    const auto pairs = grid_pairs();
    std::vector<double> deviation(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t i) {
        const HalfwayParams params(pairs[i].x, pairs[i].u);
        const auto result = integrate_semi_infinite([&](double y) { return halfway_density(params, y); }, 0.0,
                                                    QuadOptions{.abs_tol = 1e-11}, params.x());
        deviation[i] = std::abs(require_converged(result, "normalization") - 1.0);
    });
    json parameters{{"u", kGridU}, {"x", kGridX}, {"method", "semi-infinite quadrature, t = x (s/(1-s))^2"}};
    return make_record(checks::kNormalization, std::move(parameters),
                       *std::max_element(deviation.begin(), deviation.end()), kNormalizationTolerance);
}

CheckRecord check_scale_invariance() {
    double worst = 0.0;
    for (const GridPair& g : grid_pairs()) {
        const HalfwayParams params(g.x, g.u);
        const HalfwayParams unit(1.0, g.u);
        for (std::size_t i = 0; i < kGridLevels; ++i) {
            const double y = grid_level(g.x, i);
            const double direct = halfway_density(params, y);
            const double scaled = halfway_density(unit, y / g.x) / g.x;
            worst = std::max(worst, std::abs(direct - scaled) / direct);
        }
    }
    return make_record(checks::kScaleInvariance, grid_parameters(), worst, kScaleTolerance);
}

CheckRecord check_tail_law() {
    double worst = 0.0;
    for (const GridPair& g : grid_pairs()) {
        const HalfwayParams params(g.x, g.u);
        const double y = kTailLevelOverX * g.x;
        worst = std::max(worst, std::abs(y * y * halfway_density(params, y) / tail_constant(params) - 1.0));
    }
    json parameters{{"u", kGridU}, {"x", kGridX}, {"y_over_x", kTailLevelOverX}};
    return make_record(checks::kTailLaw, std::move(parameters), worst, kTailTolerance);
}

CheckRecord check_quantile_roundtrip(std::size_t threads) {
    const auto pairs = grid_pairs();
    const std::size_t total = pairs.size() * kRoundtripLevels.size();
    std::vector<double> error(total);
    parallel_for(total, threads, [&](std::size_t k) {
        const GridPair& g = pairs[k / kRoundtripLevels.size()];
        const HalfwayParams params(g.x, g.u);
        const double q = kRoundtripLevels[k % kRoundtripLevels.size()];
        error[k] = std::abs(halfway_cdf(params, halfway_quantile(params, q)) - q);
    });
    json parameters{{"u", kGridU}, {"x", kGridX}, {"q", kRoundtripLevels}};
    return make_record(checks::kQuantileRoundtrip, std::move(parameters),
                       *std::max_element(error.begin(), error.end()), kRoundtripTolerance);
}

CheckRecord check_ks_p_value() {
    const double q = kolmogorov_q(kKsLambda);
    json parameters{{"lambda", kKsLambda}, {"target", kKsLambdaP}, {"q_lambda", q}};
    return make_record(checks::kKsPValue, std::move(parameters), std::abs(q - kKsLambdaP), kKsLambdaTolerance);
}

CheckRecord check_tau_sampler(std::uint64_t seed, std::size_t threads) {
    constexpr double x = 1.0;
    auto values = draw_streams(kSamplerDraws, seed, threads, [](RngStream& s) { return sample_tau(s, x); });
    const KsReport ks = parallel_ks(std::move(values), [](double t) { return hitting_time_cdf(x, t); }, threads);
    json parameters{{"x", x}, {"n", kSamplerDraws}, {"seed", seed}, {"streams", kStreams},
                    {"d_n", ks.d_n}, {"p_value", ks.p_value}};
    return make_record(checks::kTauSampler, std::move(parameters), ks.scaled(), kKsScaledTolerance);
}

CheckRecord check_excursion_sampler(std::uint64_t seed, std::size_t threads) {
    constexpr double x = 1.0;
    constexpr double u = 0.5;
    constexpr double T = 1.0;
    auto values = draw_streams(kSamplerDraws, seed, threads,
                               [](RngStream& s) { return sample_excursion_at(s, x, u, T); });
    const KsReport ks = parallel_ks(std::move(values),
                                    [](double y) { return excursion_marginal_cdf(x, u, T, y); }, threads);
    json parameters{{"x", x}, {"u", u}, {"T", T}, {"n", kSamplerDraws}, {"seed", seed}, {"streams", kStreams},
                    {"d_n", ks.d_n}, {"p_value", ks.p_value}};
    return make_record(checks::kExcursionSampler, std::move(parameters), ks.scaled(), kKsScaledTolerance);
}

CheckRecord check_exact_sampler(std::uint64_t seed, std::size_t threads) {
    const auto pairs = grid_pairs();
    json per_pair = json::array();
    double worst = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const HalfwayParams params(pairs[i].x, pairs[i].u);
        const std::uint64_t pair_seed = seed + i;
        const SampleBatch batch =
            sample_batch(params, kSamplerDraws, SamplingMethod::exact, PathConfig{}, pair_seed, kStreams, threads);
        const KsReport ks =
            parallel_ks(batch.values, [&](double y) { return halfway_cdf(params, y); }, threads);
        worst = std::max(worst, ks.scaled());
        per_pair.push_back({{"u", pairs[i].u}, {"x", pairs[i].x}, {"seed", pair_seed}, {"ks_scaled", ks.scaled()}});
    }
    json parameters{{"n", kSamplerDraws}, {"streams", kStreams}, {"seed_rule", "seed + pair index"},
                    {"pairs", std::move(per_pair)}};
    return make_record(checks::kExactSampler, std::move(parameters), worst, kKsScaledTolerance);
}

struct PathRun {
    double dt;
    bool correction;
    std::size_t requested;
    std::size_t censored;
    double d_n;
    double d_n_given_uncensored;
};

// F(y | tau <= t_max), the law the kept (uncensored) paths follow, as
// opposed to halfway_cdf. Tabulated on a log grid in y and interpolated
// linearly in log y. Recorded next to d_n in the report; not used for
// pass/fail.
std::function<double(double)> uncensored_reference(const HalfwayParams& params, double t_max, std::size_t threads) {
    constexpr double kLow = 1e-3;
    constexpr double kDecades = 8.0;
    constexpr std::size_t kLevels = 1601;
    const double x = params.x();
    const double u = params.u();
    const double kept = hitting_time_cdf(x, t_max);
    auto log_y = std::make_shared<std::vector<double>>(kLevels);
    auto value = std::make_shared<std::vector<double>>(kLevels);
    parallel_for(kLevels, threads, [&](std::size_t i) {
        const double y = x * kLow * std::pow(10.0, kDecades * static_cast<double>(i) / (kLevels - 1));
        const auto joint = integrate_adaptive(
            [&](double t) { return t <= 0.0 ? 0.0 : hitting_time_density(x, t) * excursion_marginal_cdf(x, u, t, y); },
            0.0, t_max, QuadOptions{.abs_tol = 1e-11});
        (*log_y)[i] = std::log(y);
        (*value)[i] = std::min(1.0, require_converged(joint, "uncensored reference") / kept);
    });
    return [log_y, value](double y) {
        const auto& ly = *log_y;
        const auto& f = *value;
        if (y <= 0.0) return 0.0;
        const double l = std::log(y);
        // The density vanishes like y^2 at 0.
        if (l <= ly.front()) return f.front() * std::exp(3.0 * (l - ly.front()));
        if (l >= ly.back()) return f.back();
        const auto hi = static_cast<std::size_t>(std::upper_bound(ly.begin(), ly.end(), l) - ly.begin());
        const double w = (l - ly[hi - 1]) / (ly[hi] - ly[hi - 1]);
        return f[hi - 1] + w * (f[hi] - f[hi - 1]);
    };
}

PathRun run_path(double dt, bool correction, std::uint64_t seed, std::size_t threads,
                 const std::function<double(double)>& uncensored_cdf) {
    const HalfwayParams params(kPathX, kPathU);
    PathConfig config;
    config.dt = dt;
    config.t_max = kPathTmax;
    config.bridge_correction = correction;
    // Enough paths that kPathUncensored survive the horizon with 1% margin.
    const double survive = hitting_time_cdf(kPathX, kPathTmax);
    const auto requested = static_cast<std::size_t>(std::ceil(1.01 * static_cast<double>(kPathUncensored) / survive));
    SampleBatch batch = sample_batch(params, requested, SamplingMethod::path, config, seed, kStreams, threads);
    if (batch.values.size() < kPathUncensored) {
        throw ConvergenceError("path sampler: only " + std::to_string(batch.values.size()) + " uncensored paths");
    }
    batch.values.resize(kPathUncensored);
    const KsReport given = parallel_ks(batch.values, uncensored_cdf, threads);
    const KsReport ks = parallel_ks(std::move(batch.values), [&](double y) { return halfway_cdf(params, y); }, threads);
    return PathRun{dt, correction, requested, batch.n_censored, ks.d_n, given.d_n};
}

std::vector<CheckRecord> check_path_sampler(std::uint64_t seed, std::size_t threads) {
    const auto reference = uncensored_reference(HalfwayParams(kPathX, kPathU), kPathTmax, threads);
    std::vector<PathRun> on;
    std::vector<PathRun> off;
    for (double dt : kPathLadder) {
        on.push_back(run_path(dt, true, seed, threads, reference));
        off.push_back(run_path(dt, false, seed, threads, reference));
    }
    auto describe = [](const std::vector<PathRun>& runs) {
        json out = json::array();
        for (const PathRun& r : runs) {
            out.push_back({{"dt", r.dt}, {"requested", r.requested}, {"censored", r.censored}, {"d_n", r.d_n},
                            {"d_n_given_uncensored", r.d_n_given_uncensored}});
        }
        return out;
    };
    const json common{{"u", kPathU}, {"x", kPathX}, {"t_max", kPathTmax}, {"n_uncensored", kPathUncensored},
                      {"seed", seed}, {"streams", kStreams}};

    std::vector<CheckRecord> records;
    json finest = common;
    finest["dt"] = kPathLadder.back();
    finest["bridge_correction"] = true;
    finest["d_n_given_uncensored"] = on.back().d_n_given_uncensored;
    records.push_back(make_record(checks::kPathKs, std::move(finest), on.back().d_n, kPathKsTolerance));

    // Strictly decreasing: every successive difference must be < 0.
    double largest_step = -1.0;
    for (std::size_t i = 1; i < on.size(); ++i) largest_step = std::max(largest_step, on[i].d_n - on[i - 1].d_n);
    if (on.size() < 2) largest_step = 0.0;
    json ladder = common;
    ladder["bridge_correction"] = true;
    ladder["runs"] = describe(on);
    records.push_back(make_record(checks::kPathLadder, std::move(ladder), largest_step, 0.0, Comparison::less));

    double largest_gap = -1.0;
    for (std::size_t i = 0; i < on.size(); ++i) largest_gap = std::max(largest_gap, on[i].d_n - off[i].d_n);
    json correction = common;
    correction["runs_on"] = describe(on);
    correction["runs_off"] = describe(off);
    records.push_back(make_record(checks::kPathCorrection, std::move(correction), largest_gap, 0.0));
    return records;
}

CheckRecord check_censoring(std::uint64_t seed, std::size_t threads) {
    const HalfwayParams params(kPathX, kPathU);
    PathConfig config;
    config.dt = kCensorDt;
    config.t_max = kCensorTmax;
    const SampleBatch batch = sample_batch(params, kCensorPaths, SamplingMethod::path, config, seed, kStreams, threads);
    const double fraction = static_cast<double>(batch.n_censored) / static_cast<double>(batch.n_requested);
    const double expected = 1.0 - hitting_time_cdf(kPathX, kCensorTmax);
    json parameters{{"x", kPathX}, {"u", kPathU}, {"t_max", kCensorTmax}, {"dt", kCensorDt},
                    {"bridge_correction", true}, {"n", kCensorPaths}, {"seed", seed}, {"streams", kStreams},
                    {"censored", batch.n_censored}, {"fraction", fraction}, {"expected", expected}};
    return make_record(checks::kCensoring, std::move(parameters), std::abs(fraction - expected), kCensorTolerance);
}

Comparison parse_comparison(const std::string& text) {
    if (text == "<=") return Comparison::less_equal;
    if (text == "<") return Comparison::less;
    throw DomainError("unknown comparison '" + text + "'");
}

ValidationMode parse_mode(const std::string& text) {
    if (text == "quick") return ValidationMode::quick;
    if (text == "full") return ValidationMode::full;
    throw DomainError("unknown validation mode '" + text + "'");
}

}  // namespace

std::string_view library_version() noexcept { return HALFWAY_VERSION; }

std::string_view to_string(ValidationMode mode) noexcept { return mode == ValidationMode::quick ? "quick" : "full"; }

std::string_view to_string(Comparison comparison) noexcept {
    return comparison == Comparison::less ? "<" : "<=";
}

const CheckRecord* ValidationReport::find(std::string_view name) const {
    const auto it = std::find_if(checks.begin(), checks.end(), [&](const CheckRecord& c) { return c.name == name; });
    return it == checks.end() ? nullptr : &*it;
}

ValidationReport run_validation(const ValidationOptions& options) {
    if (options.threads == 0) throw DomainError("threads must be >= 1");
    const std::size_t threads = options.threads;
    const std::uint64_t seed = options.seed;

    ValidationReport report;
    report.version = std::string(library_version());
    report.seed = seed;
    report.mode = options.mode;
    const auto started = Clock::now();

    auto run = [&](auto&& produce) {
        const auto t0 = Clock::now();
        auto produced = produce();
        const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
        if constexpr (std::is_same_v<std::decay_t<decltype(produced)>, CheckRecord>) {
            produced.runtime_seconds = elapsed;
            report.checks.push_back(std::move(produced));
            if (options.on_check) options.on_check(report.checks.back());
        } else {
            for (CheckRecord& record : produced) {
                record.runtime_seconds = elapsed / static_cast<double>(produced.size());
                report.checks.push_back(std::move(record));
                if (options.on_check) options.on_check(report.checks.back());
            }
        }
    };

    run([&] { return check_three_way(threads); });
    run([&] { return check_normalization(threads); });
    run([&] { return check_scale_invariance(); });
    run([&] { return check_tail_law(); });
    run([&] { return check_quantile_roundtrip(threads); });
    run([&] { return check_ks_p_value(); });
    if (options.mode == ValidationMode::full) {
        run([&] { return check_tau_sampler(seed, threads); });
        run([&] { return check_excursion_sampler(seed, threads); });
        run([&] { return check_exact_sampler(seed, threads); });
        run([&] { return check_path_sampler(seed, threads); });
        run([&] { return check_censoring(seed, threads); });
    }

    report.overall_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                      [](const CheckRecord& c) { return c.pass; });
    report.runtime_seconds = std::chrono::duration<double>(Clock::now() - started).count();
    return report;
}

nlohmann::json to_json(const ValidationReport& report) {
    json checks = json::array();
    for (const CheckRecord& c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"parameters", c.parameters},
                          {"observed", c.observed},
                          {"threshold", c.threshold},
                          {"comparison", to_string(c.comparison)},
                          {"pass", c.pass},
                          {"runtime_seconds", c.runtime_seconds}});
    }
    return json{{"schema_version", report.schema_version},
                {"version", report.version},
                {"seed", report.seed},
                {"mode", to_string(report.mode)},
                {"checks", std::move(checks)},
                {"overall_pass", report.overall_pass},
                {"runtime_seconds", report.runtime_seconds}};
}

ValidationReport report_from_json(const nlohmann::json& document) {
    ValidationReport report;
    report.schema_version = document.at("schema_version").get<int>();
    if (report.schema_version != kReportSchemaVersion) {
        throw DomainError("unsupported report schema_version " + std::to_string(report.schema_version));
    }
    report.version = document.at("version").get<std::string>();
    report.seed = document.at("seed").get<std::uint64_t>();
    report.mode = parse_mode(document.at("mode").get<std::string>());
    for (const json& c : document.at("checks")) {
        CheckRecord record;
        record.name = c.at("name").get<std::string>();
        record.parameters = c.at("parameters");
        record.observed = c.at("observed").get<double>();
        record.threshold = c.at("threshold").get<double>();
        record.comparison = parse_comparison(c.at("comparison").get<std::string>());
        record.pass = c.at("pass").get<bool>();
        record.runtime_seconds = c.value("runtime_seconds", 0.0);
        report.checks.push_back(std::move(record));
    }
    report.overall_pass = document.at("overall_pass").get<bool>();
    report.runtime_seconds = document.value("runtime_seconds", 0.0);
    return report;
}

bool same_content(const ValidationReport& a, const ValidationReport& b) {
    auto strip = [](ValidationReport r) {
        r.runtime_seconds = 0.0;
        for (CheckRecord& c : r.checks) c.runtime_seconds = 0.0;
        return r;
    };
    return strip(a) == strip(b);
}

}  // namespace halfway
