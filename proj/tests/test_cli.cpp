// End-to-end checks of the command-line tool through the shell.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#ifndef QUASISPEC_CLI
#error "QUASISPEC_CLI must name the command-line executable"
#endif

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(QUASISPEC_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST(Cli, ContinuedFractionOfGoldenMean) {
    const auto r = run("cf --alpha golden --terms 10");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("\n10,1,55,89,"), std::string::npos);
    EXPECT_NE(r.out.find("# config-hash "), std::string::npos);
}

TEST(Cli, FreeSpectrumMeasure) {
    const auto r = run("spectrum --lambda 0 --alpha 55/89");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("# measure = 4"), std::string::npos);
}

TEST(Cli, JsonOutputCarriesConfigHash) {
    const auto csv = run("cf --alpha sqrt2 --terms 5");
    const auto json = run("cf --alpha sqrt2 --terms 5 --json");
    ASSERT_EQ(json.status, 0);
    EXPECT_NE(json.out.find("\"config_hash\""), std::string::npos);
    const auto at = csv.out.find("# config-hash ") + 14;
    EXPECT_NE(json.out.find(csv.out.substr(at, 16)), std::string::npos);
}

TEST(Cli, ConfigFileSectionsApply) {
    const auto path = temp_file("qs_ok.ini", "lambda=0\nalpha=\"34/55\"\n[spectrum]\ntheta-samples=4\n");
    const auto r = run("spectrum --config " + path);
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("# theta_samples = 4"), std::string::npos);
}

TEST(Cli, UnknownConfigKeyIsAConfigError) {
    const auto path = temp_file("qs_bad.ini", "[spectrum]\nno-such-key=1\n");
    EXPECT_EQ(run("spectrum --config " + path).status, 2);
}

TEST(Cli, InvalidInputsAreConfigErrors) {
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("lyapunov --alpha 1.5").status, 2);
    EXPECT_EQ(run("spectrum --alpha golden").status, 2);
    EXPECT_EQ(run("cohomology --coupling 1").status, 2);
    EXPECT_EQ(run("lyapunov --norm frobenius").status, 2);
}

TEST(Cli, FailedCheckExitsOne) {
    // A divisor floor above 2 rejects every mode, which the tool reports as a failed check.
    EXPECT_EQ(run("cohomology --coupling 0,1 --divisor-floor 3").status, 1);
}

TEST(Cli, EquivalenceHolds) {
    const auto r = run("equivalence --lambda 3 --samples 3 --m 2000");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("# holds = true"), std::string::npos);
}
