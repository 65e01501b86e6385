#include <gtest/gtest.h>

#include "afa/verify.hpp"

using namespace afa;

namespace {

VerifyOptions small(std::uint64_t samples) {
    VerifyOptions o;
    o.samples = samples;
    o.grid_n = 32;
    o.box = 5.0;
    o.mc_samples = 20000;
    o.threads = 1;
    return o;
}

} // namespace

TEST(Verify, SuiteNames) {
    EXPECT_EQ(suite_from_string("functional-inequalities"), Suite::functional_inequalities);
    EXPECT_EQ(to_string(Suite::manybody_identities), "manybody-identities");
    EXPECT_THROW(suite_from_string("everything"), ConfigError);
}

TEST(Verify, KernelSuitePasses) {
    const json r = run_suite(Suite::kernels, small(5000));
    EXPECT_TRUE(r.at("pass").get<bool>()) << r.dump(2);
}

TEST(Verify, GeometryReportIsDeterministicAndReplays) {
    const json a = run_suite(Suite::geometry, small(3000));
    VerifyOptions o = small(3000);
    o.threads = 2;
    const json b = run_suite(Suite::geometry, o);
    EXPECT_TRUE(a.at("pass").get<bool>());
    EXPECT_EQ(a.at("checks").dump(), b.at("checks").dump());
    const json replay = replay_report(a);
    EXPECT_TRUE(replay.at("identical").get<bool>()) << replay.dump(2);
}

TEST(Verify, ManyBodySuitePasses) {
    const json r = run_suite(Suite::manybody_identities, small(3));
    EXPECT_TRUE(r.at("pass").get<bool>()) << r.dump(2);
    EXPECT_TRUE(replay_report(r).at("identical").get<bool>());
}

TEST(Verify, ReportCarriesConfig) {
    const json r = run_suite(Suite::kernels, small(100));
    EXPECT_EQ(r.at("version").get<std::string>(), version_string);
    EXPECT_EQ(r.at("config").at("seed").get<std::uint64_t>(), 42u);
}
