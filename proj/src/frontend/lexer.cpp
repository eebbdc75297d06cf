#include "tonscan/frontend/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace tonscan::frontend {
namespace {

constexpr std::array kKeywords = {
    "int",     "cell",   "slice",  "builder", "cont",       "tuple",  "var",       "type",
    "if",      "ifnot",  "else",   "elseif",  "elseifnot",  "while",  "repeat",    "do",
    "until",   "return", "global", "const",   "impure",     "inline", "inline_ref", "method_id",
    "asm",     "forall", "try",    "catch",
};

constexpr std::array kTypeKeywords = {"int", "cell", "slice", "builder", "cont", "tuple", "var"};

constexpr std::array kOperators = {
    "=",  "+=", "-=",  "*=", "/=", "%=", "~/=", "^/=", "~%=", "^%=", "<<=", ">>=", "~>>=", "^>>=",
    "&=", "|=", "^=",  "==", "!=", "<",  ">",   "<=",  ">=",  "<=>", "+",   "-",   "*",    "/",
    "%",  "~/", "^/",  "~%", "^%", "/%", "&",   "|",   "^",   "<<",  ">>",  "~>>", "^>>",  "?",
    ":",  "->",
};

// Operators that begin with '~', which otherwise splits tokens.
constexpr std::array kTildeOperators = {"~>>=", "~/=", "~%=", "~>>", "~/", "~%"};

bool isDelimiter(char c) {
    switch (c) {
        case ';': case ',': case '(': case ')': case '[': case ']':
        case '{': case '}': case '~': case '.': case '"':
            return true;
        default:
            return false;
    }
}

bool isSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

template <std::size_t N>
bool contains(const std::array<const char*, N>& set, std::string_view word) {
    return std::any_of(set.begin(), set.end(), [&](const char* s) { return word == s; });
}

bool isIntLiteral(std::string_view w) {
    if (!w.empty() && w.front() == '-') w.remove_prefix(1);
    if (w.empty()) return false;
    if (w.size() > 2 && w[0] == '0' && (w[1] == 'x' || w[1] == 'X')) {
        return std::all_of(w.begin() + 2, w.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
    }
    if (w.size() > 2 && w[0] == '0' && (w[1] == 'b' || w[1] == 'B')) {
        return std::all_of(w.begin() + 2, w.end(), [](char c) { return c == '0' || c == '1'; });
    }
    return std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Lexer {
public:
    Lexer(std::string_view src, FileId file) : src_(src), file_(file) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skipTrivia();
            if (pos_ >= src_.size()) break;
            out.push_back(next());
        }
        Token eof;
        eof.kind = TokenKind::EndOfFile;
        eof.span = spanFrom(pos_, line_, col_);
        eof.span.endLine = line_;
        eof.span.endCol = col_;
        out.push_back(std::move(eof));
        return out;
    }

private:
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    Span spanFrom(std::size_t start, std::uint32_t line, std::uint32_t col) const {
        Span s;
        s.file = file_;
        s.startLine = line;
        s.startCol = col;
        s.byteOffset = static_cast<std::uint32_t>(start);
        s.byteLen = static_cast<std::uint32_t>(pos_ - start);
        s.endLine = lastLine_;
        s.endCol = lastCol_;
        return s;
    }

    void advanceTracked() {
        lastLine_ = line_;
        lastCol_ = col_;
        advance();
    }

    void skipTrivia() {
        while (pos_ < src_.size()) {
            char c = peek();
            if (isSpace(c)) {
                advance();
            } else if (c == ';' && peek(1) == ';') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else if (c == '{' && peek(1) == '-') {
                skipBlockComment();
            } else {
                break;
            }
        }
    }

    void skipBlockComment() {
        const auto startPos = pos_;
        const auto startLine = line_, startCol = col_;
        int depth = 0;
        while (pos_ < src_.size()) {
            if (peek() == '{' && peek(1) == '-') {
                ++depth;
                advanceTracked();
                advanceTracked();
            } else if (peek() == '-' && peek(1) == '}') {
                --depth;
                advanceTracked();
                advanceTracked();
                if (depth == 0) return;
            } else {
                advanceTracked();
            }
        }
        throw LexError("unterminated block comment", spanFrom(startPos, startLine, startCol));
    }

    Token make(TokenKind kind, std::size_t start, std::uint32_t line, std::uint32_t col) const {
        Token t;
        t.kind = kind;
        t.text = std::string(src_.substr(start, pos_ - start));
        t.span = spanFrom(start, line, col);
        return t;
    }

    Token next() {
        const auto start = pos_;
        const auto line = line_, col = col_;
        const char c = peek();
        auto illegal = [&](std::string_view what) {
            advanceTracked();
            return LexError(std::string(what), spanFrom(start, line, col));
        };

        if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f) {
            throw illegal("illegal character");
        }
        if (c == '"') {
            advanceTracked();
            while (pos_ < src_.size() && peek() != '"' && peek() != '\n') advanceTracked();
            if (peek() != '"') throw LexError("unterminated string literal", spanFrom(start, line, col));
            advanceTracked();
            // Optional one-letter suffix: s a u h H c.
            if (std::string_view("sauhHc").find(peek()) != std::string_view::npos && peek() != '\0' &&
                (pos_ + 1 >= src_.size() || isSpace(peek(1)) || isDelimiter(peek(1)))) {
                advanceTracked();
            }
            return make(TokenKind::StringLiteral, start, line, col);
        }
        if (c == '~') {
            for (std::string_view op : kTildeOperators) {
                if (src_.substr(pos_, op.size()) == op) {
                    const char after = pos_ + op.size() < src_.size() ? src_[pos_ + op.size()] : ' ';
                    if (isSpace(after) || isDelimiter(after)) {
                        for (std::size_t i = 0; i < op.size(); ++i) advanceTracked();
                        return make(TokenKind::Operator, start, line, col);
                    }
                }
            }
        }
        if (isDelimiter(c)) {
            advanceTracked();
            return make(TokenKind::Punct, start, line, col);
        }
        if (c == '#') {
            advanceTracked();
            while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(peek()))) advanceTracked();
            Token t = make(TokenKind::Directive, start, line, col);
            if (t.text != "#include" && t.text != "#pragma") {
                throw LexError("unknown directive '" + t.text + "'", t.span);
            }
            return t;
        }
        while (pos_ < src_.size() && !isSpace(peek()) && !isDelimiter(peek())) {
            const auto uc = static_cast<unsigned char>(peek());
            if (uc < 0x20 || uc >= 0x7f) break;
            advanceTracked();
        }
        Token t = make(TokenKind::Identifier, start, line, col);
        if (contains(kKeywords, t.text)) {
            t.kind = TokenKind::Keyword;
        } else if (contains(kOperators, t.text)) {
            t.kind = TokenKind::Operator;
        } else if (isIntLiteral(t.text)) {
            t.kind = TokenKind::IntLiteral;
        }
        return t;
    }

    std::string_view src_;
    FileId file_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;
    std::uint32_t lastLine_ = 1;
    std::uint32_t lastCol_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, FileId file) {
    return Lexer(source, file).run();
}

bool isTypeKeyword(std::string_view word) { return contains(kTypeKeywords, word); }

}  // namespace tonscan::frontend
