#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tonscan::frontend {

using FileId = std::uint32_t;

/// A byte range in one source file, with 1-based line/column of both ends.
/// The end position is inclusive of the last character.
struct Span {
    FileId file = 0;
    std::uint32_t startLine = 0;
    std::uint32_t startCol = 0;
    std::uint32_t endLine = 0;
    std::uint32_t endCol = 0;
    std::uint32_t byteOffset = 0;
    std::uint32_t byteLen = 0;

    bool valid() const { return startLine != 0; }
    std::uint32_t byteEnd() const { return byteOffset + byteLen; }

    /// Smallest span covering both `a` and `b` (same file assumed).
    static Span cover(const Span& a, const Span& b);
    bool contains(const Span& other) const;

    friend bool operator==(const Span&, const Span&) = default;
};

/// Lexicographic (file, offset, length) order.
bool spanLess(const Span& a, const Span& b);

struct SourceFile {
    std::filesystem::path path;
    std::string text;
};

/// Owns the text of every loaded file. FileIds index into it.
class SourceManager {
public:
    FileId add(std::filesystem::path path, std::string text);
    /// Reads a file from disk; throws std::runtime_error when unreadable.
    FileId load(const std::filesystem::path& path);

    const SourceFile& file(FileId id) const { return files_.at(id); }
    std::size_t size() const { return files_.size(); }

    std::string_view slice(const Span& span) const;
    /// Full text of line `line` (1-based) without the trailing newline.
    std::string_view lineText(FileId id, std::uint32_t line) const;

private:
    std::vector<SourceFile> files_;
};

/// Error with an attached source location.
class SourceError : public std::runtime_error {
public:
    SourceError(const std::string& message, Span span)
        : std::runtime_error(message), span_(span) {}
    const Span& span() const { return span_; }

private:
    Span span_;
};

class LexError : public SourceError {
    using SourceError::SourceError;
};

}  // namespace tonscan::frontend
