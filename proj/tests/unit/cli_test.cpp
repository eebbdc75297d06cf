#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "json.hpp"
#include "support/fixtures.hpp"

using tonscan::testing::fixture;
using tonscan::testing::fixtureFiles;
using json = nlohmann::json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

// Runs the scanner with `args` (already shell-quoted), capturing stdout.
Run scanner(const std::string& args) {
    const std::string cmd = std::string("NO_COLOR=1 '") + TONSCANNER_BIN + "' " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(p);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, Listing1BadRandomnessAsJson) {
    const auto r = scanner(q(fixture("listings/listing1.fc")) + " --detectors br --format json --fail-on-findings");
    EXPECT_EQ(r.status, 1);
    const json j = json::parse(r.out);
    ASSERT_EQ(j["files"].size(), 1u);
    ASSERT_EQ(j["files"][0]["findings"].size(), 1u);
    EXPECT_EQ(j["files"][0]["findings"][0]["detector"], "BR");
    EXPECT_EQ(j["summary"]["br"], 1);
    EXPECT_EQ(j["summary"]["total"], 1);
}

TEST(Cli, FindingsWithoutFailFlagExitZero) {
    EXPECT_EQ(scanner(q(fixture("listings/listing1.fc"))).status, 0);
}

TEST(Cli, CleanFileExitsZeroEvenWithFailFlag) {
    const auto r = scanner(q(fixture("fixed/listing1.fc")) + " --fail-on-findings");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "0 findings in 1 files\n");
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(scanner("--detectors nosuch").status, 2);
    EXPECT_EQ(scanner(q(fixture("listings/listing1.fc")) + " --detectors br,nosuch").status, 2);
    EXPECT_EQ(scanner(q(fixture("listings/listing1.fc")) + " --format xml").status, 2);
    EXPECT_EQ(scanner("").status, 2);
}

TEST(Cli, MissingInputExitsTwo) {
    EXPECT_EQ(scanner(q(fixture("does/not/exist.fc"))).status, 2);
}

TEST(Cli, UnparseableFileIsReportedAndExitsTwo) {
    const auto dir = std::filesystem::temp_directory_path() / "tonscanner_cli_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "bad.fc") << "#include \"missing.fc\";\n";
    }
    std::filesystem::copy_file(fixture("listings/listing1.fc"), dir / "good.fc",
                               std::filesystem::copy_options::overwrite_existing);
    const auto r = scanner(q(dir) + " --format json");
    EXPECT_EQ(r.status, 2);
    const json j = json::parse(r.out);
    ASSERT_EQ(j["files"].size(), 2u);
    EXPECT_FALSE(j["files"][0]["errors"].empty());
    EXPECT_EQ(j["files"][1]["findings"].size(), 1u);  // the batch continues
    std::filesystem::remove_all(dir);
}

TEST(Cli, DirectoryRunEqualsMergedFileRuns) {
    const auto whole = json::parse(scanner(q(fixture("listings")) + " --format json").out);
    json files = json::array();
    json summary = json::object();
    for (const auto& p : fixtureFiles("listings")) {
        const auto one = json::parse(scanner(q(p) + " --format json").out);
        ASSERT_EQ(one["files"].size(), 1u);
        files.push_back(one["files"][0]);
        for (auto it = one["summary"].begin(); it != one["summary"].end(); ++it) {
            summary[it.key()] = summary.value(it.key(), 0) + it.value().get<int>();
        }
    }
    EXPECT_EQ(whole["files"], files);
    EXPECT_EQ(whole["summary"], summary);
    EXPECT_EQ(whole["summary"]["total"], 16);
}

TEST(Cli, ExcludeAndDetectorSelection) {
    const auto r = scanner(q(fixture("corpus")) + " --exclude '*/imports/*' --exclude 'lottery.fc' --detectors br,ubm --format json");
    EXPECT_EQ(r.status, 0);
    const json j = json::parse(r.out);
    for (const auto& f : j["files"]) {
        EXPECT_EQ(f["path"].get<std::string>().find("lottery"), std::string::npos);
        EXPECT_EQ(f["path"].get<std::string>().find("imports"), std::string::npos);
        for (const auto& x : f["findings"]) EXPECT_TRUE(x["detector"] == "BR" || x["detector"] == "UBM");
    }
    EXPECT_EQ(j["summary"]["br"], 1);  // dice.fc only
    EXPECT_EQ(j["summary"]["lep"], 0);
}

TEST(Cli, JobsDoNotChangeOutput) {
    const std::string args = q(fixture("corpus")) + " --exclude '*/imports/*' --format json";
    EXPECT_EQ(scanner(args + " --jobs 1").out, scanner(args + " --jobs 4").out);
}

TEST(Cli, VersionFlag) {
    const auto r = scanner("--version");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("tonscanner ", 0), 0u);
}
