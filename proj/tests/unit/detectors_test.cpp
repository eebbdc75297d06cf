#include <gtest/gtest.h>

#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "support/fixtures.hpp"
#include "tonscan/detectors/pipeline.hpp"

using namespace tonscan;
using namespace tonscan::detectors;
using tonscan::testing::fixture;
using tonscan::testing::fixtureFiles;
using tonscan::testing::readFile;

namespace {

std::vector<Finding> scan(const std::string& text, DetectorSet enabled = kAllDetectorsSet) {
    PipelineOptions opts;
    opts.enabled = enabled;
    const auto r = analyzeText("t.fc", text, opts);
    EXPECT_TRUE(r.errors.empty()) << r.errors.front().message;
    EXPECT_TRUE(r.warnings.empty()) << r.warnings.front().message;
    return r.findings;
}

std::vector<Finding> scanFile(const std::filesystem::path& p, DetectorSet enabled = kAllDetectorsSet) {
    PipelineOptions opts;
    opts.enabled = enabled;
    const auto r = analyzeFile(p, opts);
    EXPECT_TRUE(r.errors.empty()) << p;
    return r.findings;
}

std::vector<Finding> only(const std::vector<Finding>& fs, DetectorId id) {
    std::vector<Finding> out;
    for (const auto& f : fs) {
        if (f.detector == id) out.push_back(f);
    }
    return out;
}

std::vector<std::uint32_t> lines(const std::vector<Finding>& fs) {
    std::vector<std::uint32_t> out;
    for (const auto& f : fs) out.push_back(f.span.startLine);
    return out;
}

// Every contract except the shared include.
std::vector<std::filesystem::path> allContracts() {
    std::vector<std::filesystem::path> out;
    for (const char* dir : {"listings", "fixed", "corpus"}) {
        for (auto& p : fixtureFiles(dir)) {
            if (p.parent_path().filename() != "imports") out.push_back(p);
        }
    }
    return out;
}

const std::string kSend =
    "() send(slice to, int op) impure {\n"
    "    send_raw_message(begin_cell().store_uint(0x18, 6).store_slice(to).store_coins(0)\n"
    "        .store_uint(0, 107).store_uint(op, 32).end_cell(), 1);\n"
    "}\n";

}  // namespace

// --- BR ---

TEST(BadRandomness, Listing1SeedFromLogicalTime) {
    const auto fs = only(scanFile(fixture("listings/listing1.fc")), DetectorId::BR);
    ASSERT_EQ(fs.size(), 1u);
    EXPECT_EQ(fs[0].span.startLine, 3u);
}

TEST(BadRandomness, SeedFromMessageIsClean) {
    EXPECT_TRUE(scan("() recv_internal(slice in_msg_body) impure {\n"
                     "    int seed = in_msg_body~load_uint(256);\n"
                     "    set_seed(seed);\n"
                     "    if (rand(10) == 7) { throw(1); }\n"
                     "}\n",
                     bitOf(DetectorId::BR))
                    .empty());
}

TEST(BadRandomness, LogicalTimeWithoutSinkIsClean) {
    EXPECT_TRUE(scan("global int last;\n"
                     "() recv_internal() impure {\n"
                     "    int t = cur_lt();\n"
                     "    last = t + block_lt();\n"
                     "}\n",
                     bitOf(DetectorId::BR))
                    .empty());
}

TEST(BadRandomness, RandomizeLtCountsAsTaintedSeed) {
    const auto fs = scan("() recv_internal() impure {\n"
                         "    randomize_lt();\n"
                         "    if (rand(2) == 1) { throw(1); }\n"
                         "}\n",
                         bitOf(DetectorId::BR));
    EXPECT_EQ(lines(fs), std::vector<std::uint32_t>{2});
}

// --- PL ---

TEST(PrecisionLoss, Listing2HasTwoFindings) {
    const auto fs = only(scanFile(fixture("listings/listing2.fc")), DetectorId::PL);
    EXPECT_EQ(lines(fs), (std::vector<std::uint32_t>{5, 6}));
}

TEST(PrecisionLoss, MultiplyThenDivideIsClean) {
    EXPECT_TRUE(scan("int f(int a, int b, int c) { return a * b / c; }\n", bitOf(DetectorId::PL)).empty());
}

TEST(PrecisionLoss, TransitiveThroughAddition) {
    const auto fs = scan("int f(int a, int b, int t) {\n"
                         "    int x = a / b;\n"
                         "    int y = x + 1;\n"
                         "    int z = y * t;\n"
                         "    return z;\n"
                         "}\n",
                         bitOf(DetectorId::PL));
    EXPECT_EQ(lines(fs), std::vector<std::uint32_t>{4});
}

// Random straight-line arithmetic checked against a dependency search over
// the generated statements themselves.
TEST(PrecisionLoss, MatchesDependencyOracleOnRandomPrograms) {
    std::mt19937 rng(2024);
    for (int iter = 0; iter < 300; ++iter) {
        const int n = 3 + static_cast<int>(rng() % 10);
        std::vector<char> op(n);
        std::ostringstream src;
        src << "int f(int p0, int p1, int p2) {\n";
        std::set<std::uint32_t> expected;
        std::vector<bool> reachesDiv(n, false);
        for (int i = 0; i < n; ++i) {
            const char ops[] = {'+', '-', '*', '/', 'm'};
            op[i] = ops[rng() % 5];
            auto operand = [&](std::vector<int>& u) {
                if (i > 0 && rng() % 3 != 0) {
                    const int j = static_cast<int>(rng() % i);
                    u.push_back(j);
                    return "v" + std::to_string(j);
                }
                u.push_back(-1);
                return "p" + std::to_string(rng() % 3);
            };
            std::vector<int> u;
            const std::string a = operand(u), b = operand(u);
            src << "    int v" << i << " = ";
            if (op[i] == 'm') {
                src << "muldiv(" << a << ", " << b << ", p2);\n";
            } else {
                src << a << ' ' << op[i] << ' ' << b << ";\n";
            }
            // Reaching a division goes through arithmetic only, not calls.
            bool operandDiv = false;
            for (int j : u) operandDiv = operandDiv || (j >= 0 && reachesDiv[j]);
            if (op[i] == '/') reachesDiv[i] = true;
            else if (op[i] != 'm') reachesDiv[i] = operandDiv;
            if (op[i] == '*' && operandDiv) expected.insert(static_cast<std::uint32_t>(i + 2));
        }
        src << "    return v" << n - 1;
        for (int i = 0; i + 1 < n; ++i) src << " + v" << i;
        src << ";\n}\n";
        const auto fs = scan(src.str(), bitOf(DetectorId::PL));
        const auto got = lines(fs);
        EXPECT_EQ(std::set<std::uint32_t>(got.begin(), got.end()), expected) << src.str();
        EXPECT_EQ(got.size(), expected.size()) << src.str();
    }
}

// --- UR ---

TEST(UncheckedReturn, Listing3Flags) {
    const auto fs = only(scanFile(fixture("listings/listing3.fc")), DetectorId::UR);
    ASSERT_EQ(fs.size(), 1u);
    EXPECT_EQ(fs[0].span.startLine, 3u);
    EXPECT_NE(fs[0].message.find("'flags'"), std::string::npos);
}

TEST(UncheckedReturn, UnderscoreDiscardIsClean) {
    EXPECT_TRUE(scan("(int, int) pair() { return (1, 2); }\n"
                     "int f() {\n"
                     "    (_, int v) = pair();\n"
                     "    return v;\n"
                     "}\n",
                     bitOf(DetectorId::UR))
                    .empty());
}

TEST(UncheckedReturn, UnusedLoadResultButUsedReceiver) {
    const auto fs = scan("int f(slice s) {\n"
                         "    slice s2 = s~load_bits(8);\n"
                         "    return s~load_uint(8);\n"
                         "}\n",
                         bitOf(DetectorId::UR));
    ASSERT_EQ(fs.size(), 1u);
    EXPECT_EQ(fs[0].span.startLine, 2u);
    EXPECT_NE(fs[0].message.find("'s2'"), std::string::npos);
}

TEST(UncheckedReturn, NeverOnUnderscoreOrReceiverAcrossCorpus) {
    const std::regex var("stored in '([^']+)'");
    for (const auto& p : allContracts()) {
        for (const auto& f : only(scanFile(p), DetectorId::UR)) {
            std::smatch m;
            ASSERT_TRUE(std::regex_search(f.message, m, var)) << f.message;
            const std::string name = m[1];
            EXPECT_NE(name, "_") << p;
            EXPECT_EQ(f.sourceLine.find(name + "~"), std::string::npos) << p << ": " << f.sourceLine;
        }
    }
}

// --- GVR ---

TEST(GlobalRedefined, Listing4Tokens) {
    const auto fs = only(scanFile(fixture("listings/listing4.fc")), DetectorId::GVR);
    EXPECT_EQ(lines(fs), std::vector<std::uint32_t>{5});
}

TEST(GlobalRedefined, AssignmentToGlobalIsClean) {
    EXPECT_TRUE(scan("global int total;\n"
                     "() add(int x) impure { total = total + x; }\n",
                     bitOf(DetectorId::GVR))
                    .empty());
}

TEST(GlobalRedefined, ParameterShadows) {
    const auto fs = scan("global int total;\n"
                         "int twice(int total) { return total * 2; }\n",
                         bitOf(DetectorId::GVR));
    ASSERT_EQ(fs.size(), 1u);
    EXPECT_EQ(fs[0].span.startLine, 2u);
    EXPECT_NE(fs[0].message.find("parameter"), std::string::npos);
}

// --- IFM ---

TEST(ImproperModifier, Listing5StoreBaseData) {
    const auto fs = only(scanFile(fixture("listings/listing5.fc")), DetectorId::IFM);
    ASSERT_EQ(fs.size(), 1u);
    EXPECT_EQ(fs[0].function, "store_base_data");
    EXPECT_EQ(fs[0].span.startLine, 1u);
}

TEST(ImproperModifier, ImpureIsClean) {
    std::string text = readFile(fixture("listings/listing5.fc"));
    text.replace(text.find("() {"), 4, "() impure {");
    EXPECT_TRUE(scan(text, bitOf(DetectorId::IFM)).empty());
}

TEST(ImproperModifier, UsedValueOfThrowingHelperIsClean) {
    EXPECT_TRUE(scan("int checked(int x) {\n"
                     "    throw_if(5, x < 0);\n"
                     "    return x;\n"
                     "}\n"
                     "() recv_internal(int v) impure {\n"
                     "    set_data(begin_cell().store_uint(checked(v), 8).end_cell());\n"
                     "}\n",
                     bitOf(DetectorId::IFM))
                    .empty());
}

TEST(ImproperModifier, NeverOnImpureAcrossCorpus) {
    for (const auto& p : allContracts()) {
        for (const auto& f : only(scanFile(p), DetectorId::IFM)) {
            EXPECT_EQ(f.sourceLine.find("impure"), std::string::npos) << p << ": " << f.sourceLine;
        }
    }
}

// --- UBM ---

TEST(UncheckedBounce, Listing6SendSite) {
    const auto fs = only(scanFile(fixture("listings/listing6.fc")), DetectorId::UBM);
    ASSERT_EQ(fs.size(), 1u);
    EXPECT_EQ(fs[0].span.startLine, 9u);
    EXPECT_NE(fs[0].message.find("0x5c1e0b2f"), std::string::npos);
}

TEST(UncheckedBounce, NonBounceableOnlyIsClean) {
    EXPECT_TRUE(scan("() recv_internal(cell in_msg_full, slice in_msg_body) impure {\n"
                     "    slice cs = in_msg_full.begin_parse();\n"
                     "    int flags = cs~load_uint(4);\n"
                     "    if (flags & 1) { return (); }\n"
                     "    send_raw_message(begin_cell().store_uint(0x10, 6).store_slice(cs~load_msg_addr())\n"
                     "        .store_coins(0).store_uint(0, 107).store_uint(7, 32).end_cell(), 64);\n"
                     "}\n",
                     bitOf(DetectorId::UBM))
                    .empty());
}

TEST(UncheckedBounce, ReportsOnlyTheUnhandledOp) {
    const auto fs = scan(kSend +
                             "() recv_internal(cell in_msg_full, slice in_msg_body) impure {\n"
                             "    slice cs = in_msg_full.begin_parse();\n"
                             "    int flags = cs~load_uint(4);\n"
                             "    if (flags & 1) {\n"
                             "        in_msg_body~skip_bits(32);\n"
                             "        int op = in_msg_body~load_uint(32);\n"
                             "        if (op == 0xaaaa0001) { return (); }\n"
                             "        return ();\n"
                             "    }\n"
                             "    slice to = cs~load_msg_addr();\n"
                             "    send(to, 0xaaaa0001);\n"
                             "    send(to, 0xbbbb0002);\n"
                             "}\n",
                         bitOf(DetectorId::UBM));
    ASSERT_EQ(fs.size(), 1u) << (fs.empty() ? "" : fs[0].message);
    EXPECT_NE(fs[0].message.find("0xbbbb0002"), std::string::npos);
}

// Random subsets of sent and handled ops: one finding per op in the
// difference.
TEST(UncheckedBounce, FindingsEqualSetDifference) {
    std::mt19937 rng(77);
    const std::vector<std::string> ops = {"0x10000001", "0x10000002", "0x10000003", "0x10000004"};
    for (int iter = 0; iter < 40; ++iter) {
        std::set<std::string> sent, handled;
        for (const auto& o : ops) {
            if (rng() % 2) sent.insert(o);
            if (rng() % 2) handled.insert(o);
        }
        std::string text = "() recv_internal(cell in_msg_full, slice in_msg_body) impure {\n"
                           "    slice cs = in_msg_full.begin_parse();\n"
                           "    int flags = cs~load_uint(4);\n"
                           "    if (flags & 1) {\n"
                           "        in_msg_body~skip_bits(32);\n"
                           "        int op = in_msg_body~load_uint(32);\n";
        for (const auto& h : handled) text += "        if (op == " + h + ") { return (); }\n";
        text += "        return ();\n    }\n    slice to = cs~load_msg_addr();\n";
        for (const auto& s : sent) text += "    send(to, " + s + ");\n";
        text += "}\n";
        std::set<std::string> expected;
        for (const auto& s : sent) {
            if (!handled.count(s)) expected.insert(s);
        }
        std::set<std::string> got;
        for (const auto& f : scan(kSend + text, bitOf(DetectorId::UBM))) {
            got.insert(f.message.substr(f.message.find("0x"), 10));
        }
        EXPECT_EQ(got, expected) << text;
    }
}

// --- ID ---

TEST(InconsistentData, Listing7Evidence) {
    const auto fs = only(scanFile(fixture("listings/listing7.fc")), DetectorId::ID);
    ASSERT_EQ(fs.size(), 1u);
    EXPECT_EQ(fs[0].span.startLine, 9u);
    EXPECT_EQ(fs[0].message, "stored Uint:2 but loaded Uint:32 for field #0");
    EXPECT_EQ(fs[0].evidence.rfind("stored Uint:2, loaded Uint:32", 0), 0u);
}

TEST(InconsistentData, SymmetricRoundTripIsClean) {
    EXPECT_TRUE(scan("() save(int a, int b) impure {\n"
                     "    set_data(begin_cell().store_uint(a, 8).store_coins(b).end_cell());\n"
                     "}\n"
                     "(int, int) load() {\n"
                     "    slice ds = get_data().begin_parse();\n"
                     "    return (ds~load_uint(8), ds~load_coins());\n"
                     "}\n",
                     bitOf(DetectorId::ID))
                    .empty());
}

TEST(InconsistentData, OneMismatchingBranchIsReportedAsPossible) {
    const auto fs = scan("() save(int a, int wide) impure {\n"
                         "    builder b = begin_cell();\n"
                         "    if (wide) {\n"
                         "        b = b.store_uint(a, 32);\n"
                         "    } else {\n"
                         "        b = b.store_uint(a, 16);\n"
                         "    }\n"
                         "    set_data(b.end_cell());\n"
                         "}\n"
                         "int load() {\n"
                         "    slice ds = get_data().begin_parse();\n"
                         "    return ds~load_uint(32);\n"
                         "}\n",
                         bitOf(DetectorId::ID));
    ASSERT_EQ(fs.size(), 1u);
    EXPECT_EQ(fs[0].span.startLine, 12u);
    EXPECT_NE(fs[0].evidence.find("stored Uint:16, loaded Uint:32"), std::string::npos);
    EXPECT_NE(fs[0].evidence.find("possible"), std::string::npos);
}

TEST(InconsistentData, EvidenceNamesFieldPairAcrossCorpus) {
    const std::regex pair("^stored [A-Za-z<>: ?0-9]+, loaded [A-Za-z:?0-9]+; set_data at \\d+:\\d+");
    for (const auto& p : allContracts()) {
        for (const auto& f : only(scanFile(p), DetectorId::ID)) {
            EXPECT_TRUE(std::regex_search(f.evidence, pair)) << p << ": " << f.evidence;
        }
    }
}

// --- LEP ---

TEST(LackEndParse, Listing8LastLoad) {
    const auto fs = only(scanFile(fixture("listings/listing8.fc")), DetectorId::LEP);
    EXPECT_EQ(lines(fs), std::vector<std::uint32_t>{4});
}

TEST(LackEndParse, ValidatedSliceIsClean) {
    EXPECT_TRUE(scan("int f(cell c) {\n"
                     "    slice s = c.begin_parse();\n"
                     "    int x = s~load_uint(8);\n"
                     "    s.end_parse();\n"
                     "    return x;\n"
                     "}\n",
                     bitOf(DetectorId::LEP))
                    .empty());
}

TEST(LackEndParse, ValidatedOnOneBranchOnly) {
    const auto fs = scan("int f(cell c, int strict) {\n"
                         "    slice s = c.begin_parse();\n"
                         "    int x = s~load_uint(8);\n"
                         "    if (strict) {\n"
                         "        s.end_parse();\n"
                         "    }\n"
                         "    return x;\n"
                         "}\n",
                         bitOf(DetectorId::LEP));
    EXPECT_EQ(lines(fs), std::vector<std::uint32_t>{3});
}

TEST(LackEndParse, SlicePassedToHelperIsClean) {
    EXPECT_TRUE(scan("int rest(slice s) { return s~load_uint(8); }\n"
                     "int f(cell c) {\n"
                     "    slice s = c.begin_parse();\n"
                     "    int x = s~load_uint(8);\n"
                     "    return x + rest(s);\n"
                     "}\n",
                     bitOf(DetectorId::LEP))
                    .empty());
}

// --- whole pipeline ---

TEST(Detectors, EmptySelectionReportsNothing) {
    for (const auto& p : allContracts()) EXPECT_TRUE(scanFile(p, 0).empty()) << p;
}

TEST(Detectors, DeterministicAcrossRuns) {
    for (const auto& p : allContracts()) EXPECT_EQ(scanFile(p), scanFile(p)) << p;
}

TEST(Detectors, PerDetectorIsolation) {
    for (const auto& p : allContracts()) {
        const auto all = scanFile(p);
        for (DetectorId id : kAllDetectors) {
            EXPECT_EQ(scanFile(p, bitOf(id)), only(all, id)) << p << ' ' << detectorCode(id);
            std::vector<Finding> rest;
            for (const auto& f : all) {
                if (f.detector != id) rest.push_back(f);
            }
            EXPECT_EQ(scanFile(p, static_cast<DetectorSet>(kAllDetectorsSet & ~bitOf(id))), rest) << p;
        }
    }
}

TEST(Detectors, FindingsAreSortedAndUnique) {
    for (const auto& p : allContracts()) {
        const auto fs = scanFile(p);
        for (std::size_t i = 1; i < fs.size(); ++i) {
            EXPECT_TRUE(findingLess(fs[i - 1], fs[i])) << p;
            EXPECT_FALSE(fs[i - 1].detector == fs[i].detector && fs[i - 1].span == fs[i].span) << p;
        }
    }
}

TEST(Detectors, ContractsMatchReviewedExpectations) {
    for (const auto& p : allContracts()) {
        std::ostringstream got;
        for (const auto& f : scanFile(p)) {
            got << f.span.startLine << ':' << f.span.startCol << ' ' << detectorCode(f.detector) << ' ' << f.function
                << '\n';
        }
        auto expectedPath = p;
        expectedPath.replace_extension(".expected");
        EXPECT_EQ(got.str(), readFile(expectedPath)) << p;
    }
}

TEST(Detectors, SeveritiesFollowDetector) {
    const std::map<DetectorId, Severity> want = {
        {DetectorId::BR, Severity::High},    {DetectorId::UBM, Severity::High}, {DetectorId::ID, Severity::High},
        {DetectorId::PL, Severity::Medium},  {DetectorId::IFM, Severity::Medium}, {DetectorId::GVR, Severity::Medium},
        {DetectorId::UR, Severity::Low},     {DetectorId::LEP, Severity::Low}};
    for (const auto& [id, sev] : want) EXPECT_EQ(severityOf(id), sev);
    for (DetectorId id : kAllDetectors) EXPECT_EQ(parseDetectorKey(detectorKey(id)), id);
    EXPECT_FALSE(parseDetectorKey("nosuch").has_value());
}
