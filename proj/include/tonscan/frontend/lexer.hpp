#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tonscan/frontend/source.hpp"

namespace tonscan::frontend {

enum class TokenKind {
    Identifier,
    Keyword,
    IntLiteral,
    StringLiteral,
    Punct,      // ( ) [ ] { } ; , . ~
    Operator,   // + - * / == += ? : -> ...
    Directive,  // #include, #pragma
    EndOfFile,
};

struct Token {
    TokenKind kind = TokenKind::EndOfFile;
    std::string text;
    Span span;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool isPunct(std::string_view t) const { return is(TokenKind::Punct, t); }
    bool isOp(std::string_view t) const { return is(TokenKind::Operator, t); }
    bool isKeyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
};

/// Splits FunC source into tokens. Whitespace and comments (`;;` to end of
/// line, nested `{- -}` blocks) are dropped. Identifiers follow FunC's loose
/// rules: any run of characters that is not whitespace or one of
/// `;,()[]{}~."` forms one token, so `slice_empty?` and `op::withdraw` are
/// single identifiers and binary operators must be space separated.
///
/// The returned stream always ends with an EndOfFile token.
std::vector<Token> tokenize(std::string_view source, FileId file);

bool isTypeKeyword(std::string_view word);

}  // namespace tonscan::frontend
