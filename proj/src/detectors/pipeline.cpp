#include "tonscan/detectors/pipeline.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <thread>

#include "tonscan/analysis/program.hpp"
#include "tonscan/detectors/detectors.hpp"
#include "tonscan/frontend/includes.hpp"
#include "tonscan/frontend/parser.hpp"

namespace tonscan::detectors {

namespace {

namespace fs = std::filesystem;

// Runs the analyses on files already loaded into `sources`; `entry` is the
// file whose findings are kept.
void analyzeLoaded(report::FileReport& out, const frontend::SourceManager& sources,
                   const std::vector<frontend::FileId>& files, frontend::FileId entry, const PipelineOptions& options) {
    const auto& catalog = options.catalog ? *options.catalog : analysis::BuiltinCatalog::standard();
    try {
        const frontend::SourceUnit unit = frontend::parseFiles(sources, files);
        for (const auto& d : unit.diagnostics) {
            if (d.span.file == entry) out.warnings.push_back({d.message, d.span.startLine, d.span.startCol});
        }
        const analysis::Program program = analysis::buildProgram(unit, catalog);
        AnalysisContext ctx = buildContext(program);
        out.findings = runDetectors(ctx, options.enabled, entry);
        for (auto& f : out.findings) f.sourceLine = std::string(sources.lineText(entry, f.span.startLine));
    } catch (const frontend::SourceError& e) {
        out.errors.push_back({e.what(), e.span().startLine, e.span().startCol});
    } catch (const std::exception& e) {
        out.errors.push_back({e.what(), 0, 0});
    }
}

bool isSourceFile(const fs::path& p) { return p.extension() == ".fc" || p.extension() == ".func"; }

bool excluded(const fs::path& p, const std::vector<std::string>& globs) {
    const std::string full = p.generic_string();
    const std::string name = p.filename().string();
    return std::any_of(globs.begin(), globs.end(), [&](const std::string& g) {
        return fnmatch(g.c_str(), full.c_str(), 0) == 0 || fnmatch(g.c_str(), name.c_str(), 0) == 0;
    });
}

}  // namespace

report::FileReport analyzeFile(const fs::path& path, const PipelineOptions& options) {
    report::FileReport out;
    out.path = path.generic_string();
    frontend::SourceManager sources;
    std::vector<frontend::FileId> files;
    try {
        files = frontend::resolveIncludes(sources, path, options.includeDirs);
    } catch (const frontend::SourceError& e) {
        out.errors.push_back({e.what(), e.span().startLine, e.span().startCol});
        return out;
    } catch (const std::exception& e) {
        out.errors.push_back({e.what(), 0, 0});
        return out;
    }
    analyzeLoaded(out, sources, files, files.back(), options);
    return out;
}

report::FileReport analyzeText(const std::string& path, const std::string& text, const PipelineOptions& options) {
    report::FileReport out;
    out.path = path;
    frontend::SourceManager sources;
    const frontend::FileId id = sources.add(path, text);
    analyzeLoaded(out, sources, {id}, id, options);
    return out;
}

report::Report analyzeFiles(const std::vector<fs::path>& files, const PipelineOptions& options, unsigned jobs) {
    report::Report rep;
    rep.files.resize(files.size());
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) rep.files[i] = analyzeFile(files[i], options);
    };
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    rep.sortFiles();
    return rep;
}

std::vector<fs::path> discoverInputs(const std::vector<fs::path>& inputs, const std::vector<std::string>& excludeGlobs) {
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::recursive_directory_iterator(in)) {
                if (e.is_regular_file() && isSourceFile(e.path())) found.push_back(e.path());
            }
            std::sort(found.begin(), found.end());
            for (auto& p : found) {
                if (!excluded(p, excludeGlobs)) out.push_back(std::move(p));
            }
        } else if (fs::is_regular_file(in)) {
            if (!excluded(in, excludeGlobs)) out.push_back(in);
        } else {
            throw std::runtime_error("no such file or directory: " + in.string());
        }
    }
    return out;
}

}  // namespace tonscan::detectors
