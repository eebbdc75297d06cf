#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tonscan/analysis/catalog.hpp"
#include "tonscan/detectors/finding.hpp"
#include "tonscan/report/report.hpp"

namespace tonscan::detectors {

struct PipelineOptions {
    std::vector<std::filesystem::path> includeDirs;
    DetectorSet enabled = kAllDetectorsSet;
    const analysis::BuiltinCatalog* catalog = nullptr;  // null = the standard catalog
};

/// Parses `path` with its includes and runs the enabled detectors. Never
/// throws: frontend failures become entries in `errors`. Only findings
/// inside `path` itself are kept.
report::FileReport analyzeFile(const std::filesystem::path& path, const PipelineOptions& options);

/// Same for in-memory text, without include resolution.
report::FileReport analyzeText(const std::string& path, const std::string& text, const PipelineOptions& options);

/// Analyzes `files` on up to `jobs` threads (0 = hardware concurrency) and
/// merges the results ordered by path.
report::Report analyzeFiles(const std::vector<std::filesystem::path>& files, const PipelineOptions& options,
                            unsigned jobs = 0);

/// Expands directories recursively to their `.fc` / `.func` files, keeps
/// plain file arguments as given, and drops anything matching one of
/// `excludeGlobs` (matched against the whole path and the file name).
/// Throws std::runtime_error for a missing input.
std::vector<std::filesystem::path> discoverInputs(const std::vector<std::filesystem::path>& inputs,
                                                  const std::vector<std::string>& excludeGlobs);

}  // namespace tonscan::detectors
