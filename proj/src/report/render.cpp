#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "tonscan/report/report.hpp"

namespace tonscan::report {

using detectors::DetectorId;
using detectors::Finding;

std::array<std::size_t, detectors::kDetectorCount> Report::counts() const {
    std::array<std::size_t, detectors::kDetectorCount> c{};
    for (const auto& f : files) {
        for (const auto& x : f.findings) ++c[static_cast<std::size_t>(x.detector)];
    }
    return c;
}

std::size_t Report::total() const {
    std::size_t n = 0;
    for (const auto& f : files) n += f.findings.size();
    return n;
}

void Report::sortFiles() {
    std::stable_sort(files.begin(), files.end(),
                     [](const FileReport& a, const FileReport& b) { return a.path < b.path; });
}

namespace {

const char* severityColor(detectors::Severity s) {
    switch (s) {
        case detectors::Severity::High:
            return "\x1b[31m";
        case detectors::Severity::Medium:
            return "\x1b[33m";
        case detectors::Severity::Low:
            return "\x1b[36m";
    }
    return "";
}

void caretLine(std::ostringstream& out, const Finding& f) {
    if (f.sourceLine.empty()) return;
    out << "    " << f.sourceLine << "\n    ";
    const std::size_t start = f.span.startCol > 0 ? f.span.startCol - 1 : 0;
    for (std::size_t i = 0; i < start && i < f.sourceLine.size(); ++i) out << (f.sourceLine[i] == '\t' ? '\t' : ' ');
    out << '^';
    if (f.span.endLine == f.span.startLine && f.span.endCol > f.span.startCol) {
        out << std::string(f.span.endCol - f.span.startCol, '~');
    }
    out << '\n';
}

}  // namespace

std::string renderText(const Report& report, bool colorize) {
    std::ostringstream out;
    const char* reset = colorize ? "\x1b[0m" : "";
    for (const auto& file : report.files) {
        for (const auto& e : file.errors) {
            out << file.path << ':' << e.line << ':' << e.column << ": " << (colorize ? "\x1b[1;31m" : "")
                << "error" << reset << ": " << e.message << '\n';
        }
        for (const auto& f : file.findings) {
            out << file.path << ':' << f.span.startLine << ':' << f.span.startCol << ": "
                << (colorize ? "\x1b[1m" : "") << '[' << detectors::detectorCode(f.detector) << ']' << reset << ' '
                << (colorize ? severityColor(f.severity) : "") << detectors::severityName(f.severity) << reset
                << ": " << f.message << '\n';
            caretLine(out, f);
        }
    }
    out << report.total() << " findings in " << report.files.size() << " files\n";
    return out.str();
}

std::string renderJson(const Report& report) {
    using json = nlohmann::ordered_json;
    json root;
    root["tool"] = report.tool;
    root["version"] = report.version;
    json files = json::array();
    for (const auto& file : report.files) {
        json jf;
        jf["path"] = file.path;
        json findings = json::array();
        for (const auto& f : file.findings) {
            json j;
            j["detector"] = detectors::detectorCode(f.detector);
            j["severity"] = detectors::severityName(f.severity);
            j["message"] = f.message;
            j["function"] = f.function;
            j["line"] = f.span.startLine;
            j["column"] = f.span.startCol;
            j["endLine"] = f.span.endLine;
            j["endColumn"] = f.span.endCol;
            j["evidence"] = f.evidence;
            findings.push_back(std::move(j));
        }
        jf["findings"] = std::move(findings);
        json errors = json::array();
        for (const auto& e : file.errors) {
            json j;
            j["message"] = e.message;
            j["line"] = e.line;
            j["column"] = e.column;
            errors.push_back(std::move(j));
        }
        jf["errors"] = std::move(errors);
        files.push_back(std::move(jf));
    }
    root["files"] = std::move(files);
    json summary;
    const auto counts = report.counts();
    for (DetectorId id : detectors::kAllDetectors) summary[detectors::detectorKey(id)] = counts[static_cast<std::size_t>(id)];
    summary["total"] = report.total();
    root["summary"] = std::move(summary);
    return root.dump(2) + "\n";
}

}  // namespace tonscan::report
