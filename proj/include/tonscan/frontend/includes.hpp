#pragma once

#include <filesystem>
#include <vector>

#include "tonscan/frontend/source.hpp"

namespace tonscan::frontend {

class IncludeNotFound : public SourceError {
public:
    IncludeNotFound(std::string path, Span span)
        : SourceError("cannot find include file '" + path + "'", span), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class IncludeCycle : public std::runtime_error {
public:
    explicit IncludeCycle(std::vector<std::filesystem::path> chain);
    /// Files on the cycle, starting and ending with the same file.
    const std::vector<std::filesystem::path>& chain() const { return chain_; }

private:
    std::vector<std::filesystem::path> chain_;
};

/// Loads `entry` and everything it includes into `sources`. Returns the
/// files in dependency order (includes before includers), each once.
/// Relative includes are searched next to the including file first, then
/// in `includeDirs` in order.
std::vector<FileId> resolveIncludes(SourceManager& sources, const std::filesystem::path& entry,
                                    const std::vector<std::filesystem::path>& includeDirs);

}  // namespace tonscan::frontend
