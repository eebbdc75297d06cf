// tonscanner: static defect scanner for FunC contracts.

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tonscan/analysis/catalog.hpp"
#include "tonscan/detectors/pipeline.hpp"
#include "tonscan/report/report.hpp"

namespace {

using namespace tonscan;

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

std::vector<std::string> splitCsv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Static defect scanner for FunC smart contracts", "tonscanner"};
    std::vector<std::string> inputs;
    std::string detectorsCsv;
    std::vector<std::string> excludes;
    std::vector<std::string> includeDirs;
    std::string format = "text";
    std::string catalogPath;
    bool failOnFindings = false;
    unsigned jobs = 0;

    app.add_option("inputs", inputs, "FunC files or directories (searched recursively for .fc/.func)")->required();
    app.add_option("--detectors", detectorsCsv, "Comma-separated detector ids: br,pl,ur,gvr,ifm,ubm,id,lep (default: all)");
    app.add_option("--exclude", excludes, "Skip inputs matching this glob (repeatable)");
    app.add_option("--include-path", includeDirs, "Directory searched for #include files (repeatable)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--catalog", catalogPath, "JSON file overriding builtin catalog entries");
    app.add_flag("--fail-on-findings", failOnFindings, "Exit with status 1 when any finding is reported");
    app.add_option("--jobs", jobs, "Worker threads (default: logical CPU count)");
    app.set_version_flag("--version", std::string(report::kToolName) + " " + report::kToolVersion);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitError;
    }

    detectors::PipelineOptions options;
    if (!detectorsCsv.empty()) {
        options.enabled = 0;
        for (const auto& key : splitCsv(detectorsCsv)) {
            const auto id = detectors::parseDetectorKey(key);
            if (!id) {
                std::cerr << "tonscanner: unknown detector '" << key << "'\n" << app.help();
                return kExitError;
            }
            options.enabled |= detectors::bitOf(*id);
        }
    }
    for (const auto& d : includeDirs) options.includeDirs.emplace_back(d);

    analysis::BuiltinCatalog catalog = analysis::BuiltinCatalog::standard();
    if (!catalogPath.empty()) {
        std::ifstream in(catalogPath);
        if (!in) {
            std::cerr << "tonscanner: cannot read catalog '" << catalogPath << "'\n";
            return kExitError;
        }
        std::stringstream text;
        text << in.rdbuf();
        try {
            catalog.applyOverride(text.str());
        } catch (const std::exception& e) {
            std::cerr << "tonscanner: invalid catalog '" << catalogPath << "': " << e.what() << "\n";
            return kExitError;
        }
    }
    options.catalog = &catalog;

    std::vector<std::filesystem::path> files;
    try {
        std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
        files = detectors::discoverInputs(paths, excludes);
    } catch (const std::exception& e) {
        std::cerr << "tonscanner: " << e.what() << "\n";
        return kExitError;
    }

    const report::Report rep = detectors::analyzeFiles(files, options, jobs);

    bool fatal = false;
    for (const auto& f : rep.files) {
        for (const auto& w : f.warnings) {
            std::cerr << f.path << ':' << w.line << ':' << w.column << ": warning: " << w.message << '\n';
        }
        if (!f.errors.empty()) fatal = true;
    }

    if (format == "json") {
        std::cout << report::renderJson(rep);
    } else {
        const bool color = std::getenv("NO_COLOR") == nullptr && isatty(STDOUT_FILENO);
        std::cout << report::renderText(rep, color);
    }
    std::cout.flush();

    if (fatal) return kExitError;
    if (failOnFindings && rep.total() > 0) return kExitFindings;
    return kExitClean;
}
