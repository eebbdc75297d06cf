#include "tonscan/frontend/source.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

namespace tonscan::frontend {

Span Span::cover(const Span& a, const Span& b) {
    if (!a.valid()) return b;
    if (!b.valid()) return a;
    Span out = a;
    if (b.byteOffset < a.byteOffset) {
        out.startLine = b.startLine;
        out.startCol = b.startCol;
        out.byteOffset = b.byteOffset;
    }
    const auto end = std::max(a.byteEnd(), b.byteEnd());
    if (b.byteEnd() > a.byteEnd()) {
        out.endLine = b.endLine;
        out.endCol = b.endCol;
    }
    out.byteLen = end - out.byteOffset;
    return out;
}

bool Span::contains(const Span& other) const {
    return file == other.file && byteOffset <= other.byteOffset && other.byteEnd() <= byteEnd();
}

bool spanLess(const Span& a, const Span& b) {
    return std::tie(a.file, a.byteOffset, a.byteLen) < std::tie(b.file, b.byteOffset, b.byteLen);
}

FileId SourceManager::add(std::filesystem::path path, std::string text) {
    files_.push_back(SourceFile{std::move(path), std::move(text)});
    return static_cast<FileId>(files_.size() - 1);
}

FileId SourceManager::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return add(path, buf.str());
}

std::string_view SourceManager::slice(const Span& span) const {
    std::string_view text = files_.at(span.file).text;
    if (span.byteOffset > text.size()) return {};
    return text.substr(span.byteOffset, span.byteLen);
}

std::string_view SourceManager::lineText(FileId id, std::uint32_t line) const {
    std::string_view text = files_.at(id).text;
    std::size_t pos = 0;
    for (std::uint32_t l = 1; l < line; ++l) {
        pos = text.find('\n', pos);
        if (pos == std::string_view::npos) return {};
        ++pos;
    }
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto out = text.substr(pos, end - pos);
    if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
    return out;
}

}  // namespace tonscan::frontend
