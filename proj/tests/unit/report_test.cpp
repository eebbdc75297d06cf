#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "json.hpp"
#include "support/fixtures.hpp"
#include "tonscan/detectors/pipeline.hpp"
#include "tonscan/report/report.hpp"

using namespace tonscan;
using namespace tonscan::report;
using tonscan::testing::fixture;
using tonscan::testing::fixtureFiles;
using tonscan::testing::readFile;
using json = nlohmann::json;

namespace {

std::vector<std::filesystem::path> contracts() {
    std::vector<std::filesystem::path> out;
    for (const char* dir : {"listings", "fixed", "corpus"}) {
        for (auto& p : fixtureFiles(dir)) {
            if (p.parent_path().filename() != "imports") out.push_back(p);
        }
    }
    return out;
}

Report reportOf(const std::vector<std::filesystem::path>& files) {
    return detectors::analyzeFiles(files, {}, 2);
}

std::vector<std::string> splitLines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

// Text between two 1-based (line, column) positions, end inclusive.
std::string extract(const std::string& file, const frontend::Span& s) {
    const auto lines = splitLines(file);
    std::string out;
    for (std::uint32_t l = s.startLine; l <= s.endLine && l <= lines.size(); ++l) {
        const std::string& text = lines[l - 1];
        const std::size_t from = l == s.startLine ? s.startCol - 1 : 0;
        const std::size_t to = l == s.endLine ? std::min<std::size_t>(s.endCol, text.size()) : text.size();
        if (from < to) out += text.substr(from, to - from);
        if (l != s.endLine) out += '\n';
    }
    return out;
}

}  // namespace

TEST(TextReport, Listing7Line) {
    const auto rep = reportOf({fixture("listings/listing7.fc")});
    const auto text = renderText(rep, false);
    const std::string want = "listing7.fc:9:18: [ID] high: stored Uint:2 but loaded Uint:32 for field #0";
    bool found = false;
    for (const auto& line : splitLines(text)) {
        if (line.size() >= want.size() && line.compare(line.size() - want.size(), want.size(), want) == 0) found = true;
    }
    EXPECT_TRUE(found) << text;
}

TEST(TextReport, EmptyReportIsFooterOnly) {
    Report rep;
    rep.files.resize(3);
    EXPECT_EQ(renderText(rep, false), "0 findings in 3 files\n");
    EXPECT_EQ(renderText(Report{}, true), "0 findings in 0 files\n");
}

TEST(TextReport, CaretSitsAtStartColumn) {
    const auto rep = reportOf(contracts());
    const auto lines = splitLines(renderText(rep, false));
    std::size_t checked = 0;
    for (const auto& file : rep.files) {
        const auto source = splitLines(readFile(file.path));
        for (const auto& f : file.findings) {
            const std::string head = file.path + ':' + std::to_string(f.span.startLine) + ':' +
                                     std::to_string(f.span.startCol) + ": [" + detectors::detectorCode(f.detector) + ']';
            auto it = std::find_if(lines.begin(), lines.end(), [&](const std::string& l) { return l.rfind(head, 0) == 0; });
            ASSERT_NE(it, lines.end()) << head;
            ASSERT_LT(it + 2 - lines.begin(), static_cast<std::ptrdiff_t>(lines.size()));
            EXPECT_EQ(*(it + 1), "    " + source[f.span.startLine - 1]) << head;
            const std::string& caret = *(it + 2);
            EXPECT_EQ(caret.find('^'), 4 + f.span.startCol - 1) << head;
            ++checked;
        }
    }
    EXPECT_GT(checked, 60u);
}

TEST(TextReport, ColorOnlyWhenAsked) {
    const auto rep = reportOf({fixture("listings/listing1.fc")});
    EXPECT_EQ(renderText(rep, false).find('\x1b'), std::string::npos);
    EXPECT_NE(renderText(rep, true).find('\x1b'), std::string::npos);
}

TEST(JsonReport, SchemaKeysAndTypes) {
    const auto rep = reportOf({fixture("listings/listing7.fc"), fixture("listings/listing2.fc")});
    const json j = json::parse(renderJson(rep));
    auto keys = [](const json& o) {
        std::set<std::string> k;
        for (auto it = o.begin(); it != o.end(); ++it) k.insert(it.key());
        return k;
    };
    // parse() sorts keys, so the raw key order is checked separately below.
    EXPECT_EQ(keys(j), (std::set<std::string>{"tool", "version", "files", "summary"}));
    EXPECT_TRUE(j["tool"].is_string());
    EXPECT_TRUE(j["version"].is_string());
    ASSERT_EQ(j["files"].size(), 2u);
    for (const auto& file : j["files"]) {
        EXPECT_EQ(keys(file), (std::set<std::string>{"path", "findings", "errors"}));
        for (const auto& f : file["findings"]) {
            EXPECT_EQ(keys(f),
                      (std::set<std::string>{"detector", "severity", "message", "function", "line", "column", "endLine",
                                             "endColumn", "evidence"}));
            for (const char* s : {"detector", "severity", "message", "function", "evidence"}) EXPECT_TRUE(f[s].is_string());
            for (const char* n : {"line", "column", "endLine", "endColumn"}) EXPECT_TRUE(f[n].is_number_integer());
            EXPECT_TRUE(f["severity"] == "high" || f["severity"] == "medium" || f["severity"] == "low");
        }
    }
    EXPECT_EQ(keys(j["summary"]),
              (std::set<std::string>{"br", "pl", "ur", "gvr", "ifm", "ubm", "id", "lep", "total"}));
    const std::string raw = renderJson(rep);
    EXPECT_LT(raw.find("\"tool\""), raw.find("\"version\""));
    EXPECT_LT(raw.find("\"version\""), raw.find("\"files\""));
    EXPECT_LT(raw.find("\"files\""), raw.find("\"summary\""));
    EXPECT_LT(raw.find("\"endColumn\""), raw.find("\"evidence\""));
}

TEST(JsonReport, FileErrorsAppearUnderErrors) {
    Report rep;
    FileReport f;
    f.path = "broken.fc";
    f.errors.push_back({"cannot open", 0, 0});
    rep.files.push_back(f);
    const json j = json::parse(renderJson(rep));
    ASSERT_EQ(j["files"][0]["errors"].size(), 1u);
    EXPECT_EQ(j["files"][0]["errors"][0]["message"], "cannot open");
    EXPECT_EQ(j["summary"]["total"], 0);
}

TEST(JsonReport, RoundTripsThroughGenericParser) {
    const auto rep = reportOf(contracts());
    const json j = json::parse(renderJson(rep));
    EXPECT_EQ(j["tool"], rep.tool);
    EXPECT_EQ(j["version"], rep.version);
    ASSERT_EQ(j["files"].size(), rep.files.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < rep.files.size(); ++i) {
        const auto& jf = j["files"][i];
        const auto& f = rep.files[i];
        EXPECT_EQ(jf["path"], f.path);
        ASSERT_EQ(jf["findings"].size(), f.findings.size());
        for (std::size_t k = 0; k < f.findings.size(); ++k) {
            const auto& a = jf["findings"][k];
            const auto& b = f.findings[k];
            EXPECT_EQ(a["detector"], detectors::detectorCode(b.detector));
            EXPECT_EQ(a["severity"], detectors::severityName(b.severity));
            EXPECT_EQ(a["message"], b.message);
            EXPECT_EQ(a["function"], b.function);
            EXPECT_EQ(a["line"], b.span.startLine);
            EXPECT_EQ(a["column"], b.span.startCol);
            EXPECT_EQ(a["endLine"], b.span.endLine);
            EXPECT_EQ(a["endColumn"], b.span.endCol);
            EXPECT_EQ(a["evidence"], b.evidence);
        }
        total += f.findings.size();
    }
    const auto counts = rep.counts();
    for (auto id : detectors::kAllDetectors) {
        EXPECT_EQ(j["summary"][detectors::detectorKey(id)], counts[static_cast<std::size_t>(id)]);
    }
    EXPECT_EQ(j["summary"]["total"], total);
}

TEST(JsonReport, DistinctReportsRenderDistinctly) {
    std::set<std::string> seen;
    std::size_t n = 0;
    for (const auto& p : contracts()) {
        seen.insert(renderJson(reportOf({p})));
        ++n;
    }
    EXPECT_EQ(seen.size(), n);
}

TEST(JsonReport, ByteIdenticalAcrossRuns) {
    const auto files = contracts();
    EXPECT_EQ(renderJson(reportOf(files)), renderJson(reportOf(files)));
}

TEST(Spans, EveryFindingExtractsNonEmptySnippet) {
    for (const auto& file : reportOf(contracts()).files) {
        const std::string text = readFile(file.path);
        for (const auto& f : file.findings) {
            ASSERT_TRUE(f.span.valid()) << file.path;
            const std::string snippet = extract(text, f.span);
            EXPECT_NE(snippet.find_first_not_of(" \t\n"), std::string::npos)
                << file.path << ':' << f.span.startLine << ':' << f.span.startCol;
        }
    }
}
