#pragma once

#include <array>
#include <string>
#include <vector>

#include "tonscan/detectors/finding.hpp"

namespace tonscan::report {

inline constexpr const char* kToolName = "tonscanner";
inline constexpr const char* kToolVersion = "0.1.0";

struct FileError {
    std::string message;
    std::uint32_t line = 0;
    std::uint32_t column = 0;

    friend bool operator==(const FileError&, const FileError&) = default;
};

struct FileReport {
    std::string path;
    std::vector<detectors::Finding> findings;  // sorted
    std::vector<FileError> errors;      // fatal: the file could not be analyzed
    std::vector<FileError> warnings;    // statements skipped by the parser; not part of JSON
};

struct Report {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::vector<FileReport> files;  // sorted by path

    std::array<std::size_t, detectors::kDetectorCount> counts() const;
    std::size_t total() const;
    /// Files sorted by path.
    void sortFiles();
};

/// `path:line:col: [ID] severity: message`, the source line with a caret
/// underline, then `N findings in M files`.
std::string renderText(const Report& report, bool colorize);

/// JSON with a fixed key order; see the README for the schema.
std::string renderJson(const Report& report);

}  // namespace tonscan::report
