#include <gtest/gtest.h>

#include "halfway/errors.hpp"
#include "halfway/validation.hpp"

namespace {

using halfway::ValidationMode;

const halfway::ValidationReport& quick_report() {
    static const halfway::ValidationReport report = halfway::run_validation({.mode = ValidationMode::quick});
    return report;
}

TEST(Validation, QuickSuitePasses) {
    const auto& r = quick_report();
    EXPECT_TRUE(r.overall_pass);
    EXPECT_EQ(r.schema_version, 1);
    EXPECT_EQ(r.seed, 42u);
    ASSERT_EQ(r.checks.size(), 6u);
    for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << ' ' << c.observed;
    ASSERT_NE(r.find(halfway::checks::kThreeWay), nullptr);
    EXPECT_LE(r.find(halfway::checks::kThreeWay)->observed, 1e-6);
    EXPECT_EQ(r.find(halfway::checks::kPathKs), nullptr);
}

TEST(Validation, RecordsEchoParameters) {
    const auto* c = quick_report().find(halfway::checks::kTailLaw);
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->parameters.at("y_over_x").get<double>(), 1e3);
    EXPECT_EQ(c->parameters.at("u").size(), 5u);
}

TEST(Validation, JsonRoundTrip) {
    const auto& r = quick_report();
    const auto j = halfway::to_json(r);
    for (const char* key : {"schema_version", "seed", "checks", "overall_pass", "version"}) EXPECT_TRUE(j.contains(key));
    EXPECT_EQ(halfway::report_from_json(j), r);
    EXPECT_EQ(halfway::report_from_json(nlohmann::json::parse(j.dump())), r);
}

TEST(Validation, SameContentIgnoresTiming) {
    auto a = quick_report();
    auto b = a;
    b.runtime_seconds += 5.0;
    b.checks[0].runtime_seconds += 1.0;
    EXPECT_TRUE(halfway::same_content(a, b));
    b.checks[1].observed *= 2.0;
    EXPECT_FALSE(halfway::same_content(a, b));
}

TEST(Validation, ThreadsDoNotChangeContent) {
    const auto threaded = halfway::run_validation({.mode = ValidationMode::quick, .threads = 3});
    EXPECT_TRUE(halfway::same_content(threaded, quick_report()));
}

TEST(Validation, RejectsBadInput) {
    auto j = halfway::to_json(quick_report());
    j["schema_version"] = 2;
    EXPECT_THROW((void)halfway::report_from_json(j), halfway::DomainError);
    EXPECT_THROW((void)halfway::run_validation({.threads = 0}), halfway::DomainError);
}

}  // namespace
