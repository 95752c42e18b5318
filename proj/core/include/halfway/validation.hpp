#pragma once

// Validation pipeline: numerical checks of the closed forms against the
// integral oracles, and of the samplers against the analytic CDFs. Each
// check records its exact parameters so a report can be reproduced.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace halfway {

inline constexpr int kReportSchemaVersion = 1;

[[nodiscard]] std::string_view library_version() noexcept;

enum class Comparison { less_equal, less };

struct CheckRecord {
    std::string name;
    nlohmann::json parameters = nlohmann::json::object();
    double observed = 0.0;
    double threshold = 0.0;
    Comparison comparison = Comparison::less_equal;
    bool pass = false;
    double runtime_seconds = 0.0;

    friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

enum class ValidationMode { quick, full };

struct ValidationReport {
    int schema_version = kReportSchemaVersion;
    std::string version;
    std::uint64_t seed = 0;
    ValidationMode mode = ValidationMode::quick;
    std::vector<CheckRecord> checks;
    bool overall_pass = false;
    double runtime_seconds = 0.0;

    [[nodiscard]] const CheckRecord* find(std::string_view name) const;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

struct ValidationOptions {
    ValidationMode mode = ValidationMode::quick;
    std::uint64_t seed = 42;
    std::size_t threads = 1;
    /// Invoked after each check completes, in check order.
    std::function<void(const CheckRecord&)> on_check;
};

/// Check names, in execution order.
namespace checks {
inline constexpr std::string_view kThreeWay = "three_way_agreement";
inline constexpr std::string_view kNormalization = "normalization";
inline constexpr std::string_view kScaleInvariance = "scale_invariance";
inline constexpr std::string_view kTailLaw = "tail_law";
inline constexpr std::string_view kQuantileRoundtrip = "cdf_quantile_roundtrip";
inline constexpr std::string_view kKsPValue = "ks_p_value_sanity";
inline constexpr std::string_view kTauSampler = "tau_sampler_ks";
inline constexpr std::string_view kExcursionSampler = "excursion_sampler_ks";
inline constexpr std::string_view kExactSampler = "exact_sampler_ks";
inline constexpr std::string_view kPathKs = "path_sampler_ks";
inline constexpr std::string_view kPathLadder = "path_dt_ladder";
inline constexpr std::string_view kPathCorrection = "path_bridge_correction";
inline constexpr std::string_view kCensoring = "censoring_calibration";
}  // namespace checks

/// quick: analytic and oracle checks only; full: adds every sampler check.
[[nodiscard]] ValidationReport run_validation(const ValidationOptions& options);

[[nodiscard]] nlohmann::json to_json(const ValidationReport& report);
/// Throws nlohmann::json::exception on a malformed document and
/// DomainError on an unknown schema_version.
[[nodiscard]] ValidationReport report_from_json(const nlohmann::json& document);

/// Equality with all timing fields ignored.
[[nodiscard]] bool same_content(const ValidationReport& a, const ValidationReport& b);

[[nodiscard]] std::string_view to_string(ValidationMode mode) noexcept;
[[nodiscard]] std::string_view to_string(Comparison comparison) noexcept;

}  // namespace halfway
