#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tonscan/frontend/ast.hpp"
#include "tonscan/frontend/lexer.hpp"
#include "tonscan/frontend/source.hpp"

namespace tonscan::frontend {

class ParseError : public SourceError {
public:
    ParseError(const std::string& message, Span span, std::string hint = {})
        : SourceError(message, span), hint_(std::move(hint)) {}
    /// What the parser expected at the failure point, e.g. "';'".
    const std::string& hint() const { return hint_; }

private:
    std::string hint_;
};

/// Parses one file's token stream. Top-level syntax errors throw ParseError;
/// an unparseable statement inside a function body becomes an Opaque
/// statement plus a Diagnostic, and parsing continues with the next one.
SourceUnit parse(const std::vector<Token>& tokens);

/// Appends `part` (one parsed file) to `unit`, skipping globals and
/// constants whose names are already present, then re-indexes.
void merge(SourceUnit& unit, SourceUnit&& part);

/// Lexes and parses every file in order into one unit.
SourceUnit parseFiles(const SourceManager& sources, const std::vector<FileId>& files);

/// Integer pushed by an `asm "<n> PUSHINT"` body, if that is all it does.
std::optional<std::int64_t> asmConstant(const FunctionDecl& fn);

/// Parses a FunC integer literal (decimal, 0x, 0b, optional '-').
std::optional<std::int64_t> parseIntLiteral(std::string_view text);

}  // namespace tonscan::frontend
