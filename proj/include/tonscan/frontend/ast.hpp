#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tonscan/frontend/source.hpp"

namespace tonscan::frontend {

/// Type expression as written: an atom (`int`, `slice`, `var`, `_`, a type
/// variable), a tensor `(a, b)` or a tuple `[a, b]`. `()` is the empty tensor.
struct TypeExpr {
    enum class Kind { Atom, Tensor, Tuple };
    Kind kind = Kind::Atom;
    std::string name;  // Atom only
    std::vector<TypeExpr> items;

    static TypeExpr atom(std::string n) { return TypeExpr{Kind::Atom, std::move(n), {}}; }
    static TypeExpr inferred() { return atom("inferred"); }

    /// Number of stack values: tensors flatten, tuples and atoms count one.
    std::size_t arity() const;
    std::string str() const;

    friend bool operator==(const TypeExpr&, const TypeExpr&) = default;
};

enum class ExprKind : std::uint8_t {
    IntLit,
    StrLit,
    Ident,
    Underscore,
    VarDecl,    // `int x`, `var y`; text = name, type = declared type
    Unary,      // text = operator
    Binary,     // text = operator
    Assign,     // text = `=`, `+=`, ...; children = {lhs, rhs}
    Ternary,    // children = {cond, then, else}
    Call,       // f(args): text = callee
    DotCall,    // x.f(args): text = method; children[0] = receiver
    TildeCall,  // x~f(args): text = method; children[0] = receiver
    Tensor,     // (a, b); zero children is the unit value ()
    Tuple,      // [a, b]
};

struct Expr {
    ExprKind kind = ExprKind::IntLit;
    Span span;
    std::string text;
    std::optional<std::int64_t> intValue;  // IntLit, when it fits
    TypeExpr type;                          // VarDecl
    std::vector<Expr> children;

    bool isCallLike() const {
        return kind == ExprKind::Call || kind == ExprKind::DotCall || kind == ExprKind::TildeCall;
    }
};

enum class StmtKind : std::uint8_t { Expr, Block, If, While, Repeat, DoUntil, Return, Opaque };

struct Stmt {
    StmtKind kind = StmtKind::Expr;
    Span span;
    std::optional<Expr> expr;  // expression, condition, repeat count or return value
    bool negated = false;      // `ifnot` / `elseifnot`
    bool hasElse = false;
    std::vector<Stmt> body;      // Block, loop body, then-branch
    std::vector<Stmt> elseBody;  // else-branch (an `elseif` is a nested If here)
};

enum class Modifier : std::uint8_t { Impure, Inline, InlineRef, MethodId };

struct Param {
    std::string name;  // empty for unnamed parameters
    TypeExpr type;
    Span span;
};

struct FunctionDecl {
    std::string name;
    std::vector<Param> params;
    TypeExpr returnType;
    std::set<Modifier> modifiers;
    std::vector<std::string> forallVars;
    bool hasBody = false;
    std::vector<Stmt> body;
    std::optional<std::string> asmBody;  // concatenated asm strings
    Span nameSpan;
    Span span;

    bool has(Modifier m) const { return modifiers.count(m) != 0; }
    bool isMessageEntry() const { return name == "recv_internal"; }
};

struct GlobalDecl {
    std::string name;
    TypeExpr declaredType;
    Span span;
};

struct ConstDecl {
    std::string name;
    TypeExpr declaredType;
    Expr value;
    Span span;
};

struct Directive {
    enum class Kind { Include, Pragma };
    Kind kind = Kind::Include;
    std::string argument;  // include path (unquoted) or pragma text
    Span span;
};

/// Non-fatal frontend problem, e.g. a statement that fell back to Opaque.
struct Diagnostic {
    std::string message;
    Span span;
};

/// One or more parsed files forming a compilation unit.
struct SourceUnit {
    std::vector<FileId> files;
    std::vector<FunctionDecl> functions;
    std::vector<GlobalDecl> globals;
    std::vector<ConstDecl> constants;
    std::vector<Directive> directives;
    std::vector<Diagnostic> diagnostics;

    /// Rebuilds the name lookup tables; call after mutating the vectors.
    void index();

    /// The definition with a body if any, else the first declaration.
    const FunctionDecl* findFunction(const std::string& name) const;
    const GlobalDecl* findGlobal(const std::string& name) const;
    const ConstDecl* findConst(const std::string& name) const;

    std::size_t opaqueCount() const;

private:
    std::unordered_map<std::string, std::size_t> fnIndex_;
    std::unordered_map<std::string, std::size_t> globalIndex_;
    std::unordered_map<std::string, std::size_t> constIndex_;
};

/// Calls `fn` on every expression in `e`, pre-order.
template <typename F>
void walkExpr(const Expr& e, F&& fn) {
    fn(e);
    for (const auto& c : e.children) walkExpr(c, fn);
}

/// Calls `fn` on every statement in `stmts`, pre-order, descending into bodies.
template <typename F>
void walkStmts(const std::vector<Stmt>& stmts, F&& fn) {
    for (const auto& s : stmts) {
        fn(s);
        walkStmts(s.body, fn);
        walkStmts(s.elseBody, fn);
    }
}

}  // namespace tonscan::frontend
