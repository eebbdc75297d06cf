#include "tonscan/frontend/parser.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <regex>
#include <unordered_set>

namespace tonscan::frontend {
namespace {

constexpr std::array kAssignOps = {"=",   "+=",  "-=",  "*=",   "/=",   "%=", "~/=", "^/=", "~%=",
                                   "^%=", "<<=", ">>=", "~>>=", "^>>=", "&=", "|=",  "^="};
constexpr std::array kCompareOps = {"==", "!=", "<", ">", "<=", ">=", "<=>"};
constexpr std::array kShiftOps = {"<<", ">>", "~>>", "^>>"};
constexpr std::array kAddOps = {"+", "-", "|", "^"};
constexpr std::array kMulOps = {"*", "/", "%", "~/", "^/", "~%", "^%", "/%", "&"};

template <std::size_t N>
bool oneOf(const Token& t, const std::array<const char*, N>& ops) {
    if (t.kind != TokenKind::Operator) return false;
    return std::any_of(ops.begin(), ops.end(), [&](const char* op) { return t.text == op; });
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

    SourceUnit run() {
        if (!toks_.empty()) unit_.files.push_back(toks_.front().span.file);
        while (!at(TokenKind::EndOfFile)) parseTopLevel();
        unit_.index();
        return std::move(unit_);
    }

private:
    // ---- token helpers --------------------------------------------------

    const Token& peek(std::size_t k = 0) const {
        const auto i = std::min(pos_ + k, toks_.size() - 1);
        return toks_[i];
    }
    const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
    bool at(TokenKind k) const { return peek().kind == k; }
    bool atPunct(std::string_view p) const { return peek().isPunct(p); }
    bool atOp(std::string_view p) const { return peek().isOp(p); }
    bool atKw(std::string_view p) const { return peek().isKeyword(p); }

    const Token& take() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string& what, const std::string& hint) const {
        const Token& t = peek();
        std::string found = t.kind == TokenKind::EndOfFile ? "end of file" : "'" + t.text + "'";
        throw ParseError(what + ", found " + found, t.span, hint);
    }

    const Token& expectPunct(std::string_view p) {
        if (!atPunct(p)) fail("expected '" + std::string(p) + "'", "'" + std::string(p) + "'");
        return take();
    }

    const Token& expectIdent(const char* what) {
        if (!at(TokenKind::Identifier)) fail(std::string("expected ") + what, what);
        return take();
    }

    // ---- top level ------------------------------------------------------

    void parseTopLevel() {
        const Token& t = peek();
        if (t.kind == TokenKind::Directive) {
            parseDirective();
        } else if (t.isKeyword("global")) {
            parseGlobal();
        } else if (t.isKeyword("const")) {
            parseConst();
        } else if (t.isPunct(";")) {
            take();
        } else {
            parseFunction();
        }
    }

    void parseDirective() {
        const Token& head = take();
        Directive d;
        if (head.text == "#include") {
            d.kind = Directive::Kind::Include;
            if (!at(TokenKind::StringLiteral)) fail("expected include path", "string literal");
            const Token& path = take();
            d.argument = path.text.substr(1, path.text.rfind('"') - 1);
            const Token& semi = expectPunct(";");
            d.span = Span::cover(head.span, semi.span);
        } else {
            d.kind = Directive::Kind::Pragma;
            Span span = head.span;
            std::string text;
            while (!atPunct(";") && !at(TokenKind::EndOfFile)) {
                if (!text.empty()) text += ' ';
                text += peek().text;
                span = Span::cover(span, take().span);
            }
            span = Span::cover(span, expectPunct(";").span);
            d.argument = std::move(text);
            d.span = span;
        }
        unit_.directives.push_back(std::move(d));
    }

    void parseGlobal() {
        const Token& kw = take();
        while (true) {
            GlobalDecl g;
            const Token& first = peek();
            // `global int x` or `global x`
            if (at(TokenKind::Identifier) && (peek(1).isPunct(",") || peek(1).isPunct(";"))) {
                g.declaredType = TypeExpr::inferred();
            } else {
                g.declaredType = parseType();
            }
            const Token& name = expectIdent("global name");
            g.name = name.text;
            g.span = Span::cover(unit_.globals.empty() && &first == &first ? kw.span : kw.span, name.span);
            unit_.globals.push_back(std::move(g));
            if (atPunct(",")) {
                take();
                continue;
            }
            expectPunct(";");
            break;
        }
    }

    void parseConst() {
        const Token& kw = take();
        while (true) {
            ConstDecl c;
            if (at(TokenKind::Identifier) && peek(1).isOp("=")) {
                c.declaredType = TypeExpr::inferred();
            } else {
                c.declaredType = parseType();
            }
            c.name = expectIdent("constant name").text;
            if (!atOp("=")) fail("expected '='", "'='");
            take();
            c.value = parseExpr();
            c.span = Span::cover(kw.span, c.value.span);
            unit_.constants.push_back(std::move(c));
            if (atPunct(",")) {
                take();
                continue;
            }
            expectPunct(";");
            break;
        }
    }

    TypeExpr parseType() {
        const Token& t = peek();
        if (t.isPunct("(") || t.isPunct("[")) {
            const bool tensor = t.isPunct("(");
            take();
            TypeExpr out;
            out.kind = tensor ? TypeExpr::Kind::Tensor : TypeExpr::Kind::Tuple;
            const std::string close = tensor ? ")" : "]";
            if (!atPunct(close)) {
                while (true) {
                    out.items.push_back(parseType());
                    if (atPunct(",")) {
                        take();
                        continue;
                    }
                    break;
                }
            }
            expectPunct(close);
            return maybeArrow(std::move(out));
        }
        if (t.kind == TokenKind::Keyword && (isTypeKeyword(t.text) || t.text == "type")) {
            take();
            return maybeArrow(TypeExpr::atom(t.text));
        }
        if (t.kind == TokenKind::Identifier) {
            take();
            return maybeArrow(TypeExpr::atom(t.text));
        }
        fail("expected type", "type");
    }

    // Function types `a -> b` are kept as an opaque atom.
    TypeExpr maybeArrow(TypeExpr lhs) {
        if (!atOp("->") || inForallHeader_) return lhs;
        take();
        TypeExpr rhs = parseType();
        return TypeExpr::atom(lhs.str() + " -> " + rhs.str());
    }

    void parseFunction() {
        FunctionDecl fn;
        const Token& first = peek();
        if (atKw("forall")) {
            take();
            inForallHeader_ = true;
            while (true) {
                fn.forallVars.push_back(expectIdent("type variable").text);
                if (atPunct(",")) {
                    take();
                    continue;
                }
                break;
            }
            inForallHeader_ = false;
            if (!atOp("->")) fail("expected '->'", "'->'");
            take();
        }
        fn.returnType = parseType();
        Span nameSpan = peek().span;
        std::string name;
        if (atPunct("~")) {
            take();
            name = "~";
        }
        name += expectIdent("function name").text;
        fn.name = std::move(name);
        fn.nameSpan = Span::cover(nameSpan, prev().span);
        parseParams(fn);

        while (true) {
            if (atKw("impure")) {
                take();
                fn.modifiers.insert(Modifier::Impure);
            } else if (atKw("inline")) {
                take();
                fn.modifiers.insert(Modifier::Inline);
            } else if (atKw("inline_ref")) {
                take();
                fn.modifiers.insert(Modifier::InlineRef);
            } else if (atKw("method_id")) {
                take();
                fn.modifiers.insert(Modifier::MethodId);
                if (atPunct("(")) {
                    take();
                    while (!atPunct(")") && !at(TokenKind::EndOfFile)) take();
                    expectPunct(")");
                }
            } else {
                break;
            }
        }

        if (atKw("asm")) {
            take();
            if (atPunct("(")) {  // stack rearrangement spec
                int depth = 0;
                do {
                    if (atPunct("(")) ++depth;
                    if (atPunct(")")) --depth;
                    take();
                } while (depth > 0 && !at(TokenKind::EndOfFile));
            }
            std::string body;
            if (!at(TokenKind::StringLiteral)) fail("expected asm string", "string literal");
            while (at(TokenKind::StringLiteral)) {
                const std::string& lit = take().text;
                if (!body.empty()) body += ' ';
                body += lit.substr(1, lit.rfind('"') - 1);
            }
            fn.asmBody = std::move(body);
            const Token& semi = expectPunct(";");
            fn.span = Span::cover(first.span, semi.span);
        } else if (atPunct(";")) {
            const Token& semi = take();
            fn.span = Span::cover(first.span, semi.span);
        } else if (atPunct("{")) {
            fn.hasBody = true;
            Span close;
            fn.body = parseBlockBody(&close);
            fn.span = Span::cover(first.span, close);
        } else {
            fail("expected function body", "'{', 'asm' or ';'");
        }
        unit_.functions.push_back(std::move(fn));
    }

    void parseParams(FunctionDecl& fn) {
        expectPunct("(");
        std::unordered_set<std::string> seen;
        if (!atPunct(")")) {
            while (true) {
                Param p;
                const Token& start = peek();
                if (at(TokenKind::Identifier) && (peek(1).isPunct(",") || peek(1).isPunct(")"))) {
                    // bare name, type inferred
                    p.type = TypeExpr::inferred();
                    p.name = take().text;
                } else {
                    p.type = parseType();
                    if (at(TokenKind::Identifier)) p.name = take().text;
                }
                p.span = Span::cover(start.span, prev().span);
                if (!p.name.empty() && p.name != "_" && !seen.insert(p.name).second) {
                    throw ParseError("duplicate parameter '" + p.name + "'", p.span, "unique parameter name");
                }
                fn.params.push_back(std::move(p));
                if (atPunct(",")) {
                    take();
                    continue;
                }
                break;
            }
        }
        expectPunct(")");
    }

    // ---- statements -----------------------------------------------------

    std::vector<Stmt> parseBlockBody(Span* closeSpan = nullptr) {
        expectPunct("{");
        std::vector<Stmt> out;
        while (!atPunct("}")) {
            if (at(TokenKind::EndOfFile)) fail("expected '}'", "'}'");
            if (auto s = parseStatementRecovering()) out.push_back(std::move(*s));
        }
        const Token& close = take();
        if (closeSpan) *closeSpan = close.span;
        return out;
    }

    std::optional<Stmt> parseStatementRecovering() {
        const auto start = pos_;
        try {
            return parseStatement();
        } catch (const ParseError& err) {
            pos_ = start;
            Stmt s;
            s.kind = StmtKind::Opaque;
            s.span = skipStatement();
            unit_.diagnostics.push_back(Diagnostic{std::string("statement not analyzed: ") + err.what(), s.span});
            return s;
        }
    }

    // Skips one statement's worth of tokens; returns the covered span.
    Span skipStatement() {
        Span span = peek().span;
        int depth = 0;
        bool consumed = false;
        while (!at(TokenKind::EndOfFile)) {
            const Token& t = peek();
            if (depth == 0 && t.isPunct("}") ) {
                if (!consumed) span = Span::cover(span, take().span);
                break;
            }
            if (t.isPunct("(") || t.isPunct("[") || t.isPunct("{")) ++depth;
            if ((t.isPunct(")") || t.isPunct("]") || t.isPunct("}")) && depth > 0) --depth;
            span = Span::cover(span, take().span);
            consumed = true;
            if (depth == 0 && t.isPunct(";")) break;
            if (depth == 0 && t.isPunct("}")) {
                const Token& n = peek();
                if (!(n.isKeyword("catch") || n.isKeyword("else") || n.isKeyword("elseif") ||
                      n.isKeyword("elseifnot") || n.isKeyword("until"))) {
                    break;
                }
            }
        }
        return span;
    }

    std::optional<Stmt> parseStatement() {
        const Token& t = peek();
        if (t.isPunct(";")) {
            take();
            return std::nullopt;
        }
        if (t.isPunct("{")) {
            Stmt s;
            s.kind = StmtKind::Block;
            Span close;
            s.body = parseBlockBody(&close);
            s.span = Span::cover(t.span, close);
            return s;
        }
        if (t.isKeyword("return")) {
            take();
            Stmt s;
            s.kind = StmtKind::Return;
            if (!atPunct(";")) s.expr = parseExpr();
            s.span = Span::cover(t.span, expectPunct(";").span);
            return s;
        }
        if (t.isKeyword("if") || t.isKeyword("ifnot")) return parseIf();
        if (t.isKeyword("while") || t.isKeyword("repeat")) {
            take();
            Stmt s;
            s.kind = t.text == "while" ? StmtKind::While : StmtKind::Repeat;
            s.expr = parseExpr();
            Span close;
            s.body = parseBlockBody(&close);
            s.span = Span::cover(t.span, close);
            return s;
        }
        if (t.isKeyword("do")) {
            take();
            Stmt s;
            s.kind = StmtKind::DoUntil;
            s.body = parseBlockBody();
            if (!atKw("until")) fail("expected 'until'", "'until'");
            take();
            s.expr = parseExpr();
            s.span = Span::cover(t.span, s.expr->span);
            if (atPunct(";")) s.span = Span::cover(s.span, take().span);
            return s;
        }
        if (t.isKeyword("try")) {
            throw ParseError("try/catch is not analyzed", t.span, "statement");
        }
        Stmt s;
        s.kind = StmtKind::Expr;
        s.expr = parseExpr();
        s.span = Span::cover(s.expr->span, expectPunct(";").span);
        return s;
    }

    Stmt parseIf() {
        const Token& kw = take();
        Stmt s;
        s.kind = StmtKind::If;
        s.negated = kw.text == "ifnot" || kw.text == "elseifnot";
        s.expr = parseExpr();
        Span close;
        s.body = parseBlockBody(&close);
        s.span = Span::cover(kw.span, close);
        if (atKw("else")) {
            take();
            s.hasElse = true;
            if (atKw("if") || atKw("ifnot")) {
                s.elseBody.push_back(parseIf());
                s.span = Span::cover(s.span, s.elseBody.back().span);
            } else {
                s.elseBody = parseBlockBody(&close);
                s.span = Span::cover(s.span, close);
            }
        } else if (atKw("elseif") || atKw("elseifnot")) {
            s.hasElse = true;
            s.elseBody.push_back(parseIf());
            s.span = Span::cover(s.span, s.elseBody.back().span);
        }
        return s;
    }

    // ---- expressions ----------------------------------------------------

    Expr parseExpr() { return parseAssign(); }

    static Expr binary(ExprKind kind, std::string op, Expr lhs, Expr rhs) {
        Expr e;
        e.kind = kind;
        e.text = std::move(op);
        e.span = Span::cover(lhs.span, rhs.span);
        e.children.push_back(std::move(lhs));
        e.children.push_back(std::move(rhs));
        return e;
    }

    Expr parseAssign() {
        Expr lhs = parseTernary();
        if (oneOf(peek(), kAssignOps)) {
            std::string op = take().text;
            Expr rhs = parseAssign();
            return binary(ExprKind::Assign, std::move(op), std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr parseTernary() {
        Expr cond = parseCompare();
        if (atOp("?")) {
            take();
            Expr a = parseAssign();
            if (!atOp(":")) fail("expected ':'", "':'");
            take();
            Expr b = parseTernary();
            Expr e;
            e.kind = ExprKind::Ternary;
            e.span = Span::cover(cond.span, b.span);
            e.children.push_back(std::move(cond));
            e.children.push_back(std::move(a));
            e.children.push_back(std::move(b));
            return e;
        }
        return cond;
    }

    Expr parseCompare() {
        Expr lhs = parseShift();
        while (oneOf(peek(), kCompareOps)) {
            std::string op = take().text;
            lhs = binary(ExprKind::Binary, std::move(op), std::move(lhs), parseShift());
        }
        return lhs;
    }

    Expr parseShift() {
        Expr lhs = parseAdd();
        while (oneOf(peek(), kShiftOps)) {
            std::string op = take().text;
            lhs = binary(ExprKind::Binary, std::move(op), std::move(lhs), parseAdd());
        }
        return lhs;
    }

    Expr parseAdd() {
        Expr lhs = parseMul();
        while (oneOf(peek(), kAddOps)) {
            std::string op = take().text;
            lhs = binary(ExprKind::Binary, std::move(op), std::move(lhs), parseMul());
        }
        return lhs;
    }

    Expr parseMul() {
        Expr lhs = parseUnary();
        while (oneOf(peek(), kMulOps)) {
            std::string op = take().text;
            lhs = binary(ExprKind::Binary, std::move(op), std::move(lhs), parseUnary());
        }
        return lhs;
    }

    Expr parseUnary() {
        if (atOp("-") || atPunct("~")) {
            const Token& op = take();
            Expr operand = parseUnary();
            Expr e;
            e.kind = ExprKind::Unary;
            e.text = op.text;
            e.span = Span::cover(op.span, operand.span);
            e.children.push_back(std::move(operand));
            return e;
        }
        return parsePostfix();
    }

    std::vector<Expr> parseArgs(Span& close) {
        expectPunct("(");
        std::vector<Expr> args;
        if (!atPunct(")")) {
            while (true) {
                args.push_back(parseExpr());
                if (atPunct(",")) {
                    take();
                    continue;
                }
                break;
            }
        }
        close = expectPunct(")").span;
        return args;
    }

    Expr parsePostfix() {
        Expr e = parsePrimary();
        if (e.kind == ExprKind::Ident && atPunct("(")) {
            Span close;
            Expr call;
            call.kind = ExprKind::Call;
            call.text = e.text;
            call.children = parseArgs(close);
            call.span = Span::cover(e.span, close);
            e = std::move(call);
        }
        while (atPunct(".") || (atPunct("~") && peek(1).kind == TokenKind::Identifier)) {
            const bool tilde = atPunct("~");
            take();
            const Token& name = expectIdent("method name");
            Span close;
            Expr call;
            call.kind = tilde ? ExprKind::TildeCall : ExprKind::DotCall;
            call.text = name.text;
            std::vector<Expr> args = parseArgs(close);
            call.span = Span::cover(e.span, close);
            call.children.push_back(std::move(e));
            for (auto& a : args) call.children.push_back(std::move(a));
            e = std::move(call);
        }
        return e;
    }

    Expr parsePrimary() {
        const Token& t = peek();
        Expr e;
        e.span = t.span;
        switch (t.kind) {
            case TokenKind::IntLiteral:
                take();
                e.kind = ExprKind::IntLit;
                e.text = t.text;
                e.intValue = parseIntLiteral(t.text);
                return e;
            case TokenKind::StringLiteral:
                take();
                e.kind = ExprKind::StrLit;
                e.text = t.text;
                return e;
            case TokenKind::Identifier:
                take();
                e.kind = t.text == "_" ? ExprKind::Underscore : ExprKind::Ident;
                e.text = t.text;
                return e;
            case TokenKind::Keyword:
                if (isTypeKeyword(t.text)) return parseDeclaration();
                break;
            case TokenKind::Punct:
                if (t.text == "(" || t.text == "[") return parseGroup();
                break;
            default:
                break;
        }
        fail("expected expression", "expression");
    }

    Expr parseDeclaration() {
        const Token& typeTok = take();
        TypeExpr type = typeTok.text == "var" ? TypeExpr::inferred() : TypeExpr::atom(typeTok.text);
        auto makeDecl = [&](const Token& name, const Span& typeSpan) {
            Expr d;
            d.kind = ExprKind::VarDecl;
            d.text = name.text;
            d.type = type;
            d.span = Span::cover(typeSpan, name.span);
            return d;
        };
        if (at(TokenKind::Identifier)) {
            const Token& name = take();
            return makeDecl(name, typeTok.span);
        }
        if (atPunct("(") || atPunct("[")) {
            // `var (a, b)` declares every element
            Expr group = parseGroup();
            const auto convert = [&](auto& self, Expr& x) -> void {
                if (x.kind == ExprKind::Ident || x.kind == ExprKind::Underscore) {
                    if (x.kind == ExprKind::Ident) {
                        x.kind = ExprKind::VarDecl;
                        x.type = type;
                    }
                } else if (x.kind == ExprKind::Tensor || x.kind == ExprKind::Tuple) {
                    for (auto& c : x.children) self(self, c);
                } else if (x.kind != ExprKind::VarDecl) {
                    throw ParseError("expected variable name in declaration", x.span, "identifier");
                }
            };
            convert(convert, group);
            group.span = Span::cover(typeTok.span, group.span);
            return group;
        }
        fail("expected variable name", "identifier");
    }

    Expr parseGroup() {
        const Token& open = take();
        const bool tuple = open.isPunct("[");
        const std::string close = tuple ? "]" : ")";
        std::vector<Expr> items;
        bool trailingComma = false;
        if (!atPunct(close)) {
            while (true) {
                items.push_back(parseExpr());
                if (atPunct(",")) {
                    take();
                    trailingComma = true;
                    continue;
                }
                trailingComma = false;
                break;
            }
        }
        (void)trailingComma;
        const Token& end = expectPunct(close);
        const Span span = Span::cover(open.span, end.span);
        if (!tuple && items.size() == 1) {
            Expr inner = std::move(items.front());
            inner.span = span;  // parentheses belong to the node
            return inner;
        }
        Expr e;
        e.kind = tuple ? ExprKind::Tuple : ExprKind::Tensor;
        e.span = span;
        e.children = std::move(items);
        return e;
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
    bool inForallHeader_ = false;
    SourceUnit unit_;
};

}  // namespace

std::optional<std::int64_t> parseIntLiteral(std::string_view text) {
    bool negative = false;
    if (!text.empty() && text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        base = 16;
        text.remove_prefix(2);
    } else if (text.size() > 2 && text[0] == '0' && (text[1] == 'b' || text[1] == 'B')) {
        base = 2;
        text.remove_prefix(2);
    }
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    if (value > static_cast<std::uint64_t>(INT64_MAX)) return std::nullopt;
    const auto v = static_cast<std::int64_t>(value);
    return negative ? -v : v;
}

SourceUnit parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

void merge(SourceUnit& unit, SourceUnit&& part) {
    unit.files.insert(unit.files.end(), part.files.begin(), part.files.end());
    for (auto& f : part.functions) unit.functions.push_back(std::move(f));
    for (auto& g : part.globals) {
        const bool dup = std::any_of(unit.globals.begin(), unit.globals.end(),
                                     [&](const GlobalDecl& x) { return x.name == g.name; });
        if (!dup) unit.globals.push_back(std::move(g));
    }
    for (auto& c : part.constants) {
        const bool dup = std::any_of(unit.constants.begin(), unit.constants.end(),
                                     [&](const ConstDecl& x) { return x.name == c.name; });
        if (!dup) unit.constants.push_back(std::move(c));
    }
    for (auto& d : part.directives) unit.directives.push_back(std::move(d));
    for (auto& d : part.diagnostics) unit.diagnostics.push_back(std::move(d));
    unit.index();
}

SourceUnit parseFiles(const SourceManager& sources, const std::vector<FileId>& files) {
    SourceUnit unit;
    for (FileId id : files) merge(unit, parse(tokenize(sources.file(id).text, id)));
    return unit;
}

std::optional<std::int64_t> asmConstant(const FunctionDecl& fn) {
    if (!fn.asmBody || !fn.params.empty()) return std::nullopt;
    static const std::regex kPushInt(R"(^\s*(-?(?:0x[0-9a-fA-F]+|[0-9]+))\s+PUSHINT\s*$)");
    std::smatch m;
    if (!std::regex_match(*fn.asmBody, m, kPushInt)) return std::nullopt;
    return parseIntLiteral(m[1].str());
}

}  // namespace tonscan::frontend
