#include "tonscan/frontend/printer.hpp"

#include <sstream>

namespace tonscan::frontend {
namespace {

std::string typeText(const TypeExpr& t) { return t == TypeExpr::inferred() ? "var" : t.str(); }

std::string join(const std::vector<Expr>& items, std::size_t from = 0) {
    std::string out;
    for (std::size_t i = from; i < items.size(); ++i) {
        if (i > from) out += ", ";
        out += printExpr(items[i]);
    }
    return out;
}

std::string exprText(const Expr& e, bool topLevel) {
    switch (e.kind) {
        case ExprKind::IntLit:
        case ExprKind::StrLit:
        case ExprKind::Ident:
            return e.text;
        case ExprKind::Underscore:
            return "_";
        case ExprKind::VarDecl:
            return typeText(e.type) + " " + e.text;
        case ExprKind::Unary:
            return "(" + e.text + " " + exprText(e.children[0], false) + ")";
        case ExprKind::Binary:
            return "(" + exprText(e.children[0], false) + " " + e.text + " " + exprText(e.children[1], false) + ")";
        case ExprKind::Assign: {
            std::string s = exprText(e.children[0], false) + " " + e.text + " " + exprText(e.children[1], true);
            return topLevel ? s : "(" + s + ")";
        }
        case ExprKind::Ternary:
            return "(" + exprText(e.children[0], false) + " ? " + exprText(e.children[1], true) + " : " +
                   exprText(e.children[2], false) + ")";
        case ExprKind::Call:
            return e.text + "(" + join(e.children) + ")";
        case ExprKind::DotCall:
        case ExprKind::TildeCall:
            return exprText(e.children[0], false) + (e.kind == ExprKind::DotCall ? "." : "~") + e.text + "(" +
                   join(e.children, 1) + ")";
        case ExprKind::Tensor:
            return "(" + join(e.children) + ")";
        case ExprKind::Tuple:
            return "[" + join(e.children) + "]";
    }
    return {};
}

void printStmts(std::ostringstream& out, const std::vector<Stmt>& stmts, int depth);

void printBlock(std::ostringstream& out, const std::vector<Stmt>& stmts, int depth) {
    out << "{\n";
    printStmts(out, stmts, depth + 1);
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "}";
}

void printIf(std::ostringstream& out, const Stmt& s, int depth) {
    out << (s.negated ? "ifnot " : "if ") << exprText(*s.expr, false) << " ";
    printBlock(out, s.body, depth);
    if (!s.hasElse) return;
    out << " else ";
    if (s.elseBody.size() == 1 && s.elseBody[0].kind == StmtKind::If) {
        printIf(out, s.elseBody[0], depth);
    } else {
        printBlock(out, s.elseBody, depth);
    }
}

void printStmts(std::ostringstream& out, const std::vector<Stmt>& stmts, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    for (const auto& s : stmts) {
        out << pad;
        switch (s.kind) {
            case StmtKind::Expr:
                out << exprText(*s.expr, true) << ";";
                break;
            case StmtKind::Block:
                printBlock(out, s.body, depth);
                break;
            case StmtKind::If:
                printIf(out, s, depth);
                break;
            case StmtKind::While:
            case StmtKind::Repeat:
                out << (s.kind == StmtKind::While ? "while " : "repeat ") << exprText(*s.expr, false) << " ";
                printBlock(out, s.body, depth);
                break;
            case StmtKind::DoUntil:
                out << "do ";
                printBlock(out, s.body, depth);
                out << " until " << exprText(*s.expr, false) << ";";
                break;
            case StmtKind::Return:
                out << "return" << (s.expr ? " " + exprText(*s.expr, true) : "") << ";";
                break;
            case StmtKind::Opaque:
                out << ";; opaque";
                break;
        }
        out << "\n";
    }
}

bool sameType(const TypeExpr& a, const TypeExpr& b) { return a == b; }

bool sameStmt(const Stmt& a, const Stmt& b) {
    if (a.kind != b.kind || a.negated != b.negated || a.hasElse != b.hasElse) return false;
    if (a.expr.has_value() != b.expr.has_value()) return false;
    if (a.expr && !sameExpr(*a.expr, *b.expr)) return false;
    return sameStmts(a.body, b.body) && sameStmts(a.elseBody, b.elseBody);
}

}  // namespace

std::string printExpr(const Expr& e) { return exprText(e, true); }

std::string printAst(const SourceUnit& unit) {
    std::ostringstream out;
    for (const auto& d : unit.directives) {
        if (d.kind == Directive::Kind::Include) {
            out << "#include \"" << d.argument << "\";\n";
        } else {
            out << "#pragma " << d.argument << ";\n";
        }
    }
    for (const auto& g : unit.globals) {
        out << "global " << (g.declaredType == TypeExpr::inferred() ? "" : g.declaredType.str() + " ") << g.name
            << ";\n";
    }
    for (const auto& c : unit.constants) {
        out << "const " << (c.declaredType == TypeExpr::inferred() ? "" : c.declaredType.str() + " ") << c.name
            << " = " << exprText(c.value, true) << ";\n";
    }
    for (const auto& fn : unit.functions) {
        if (!fn.forallVars.empty()) {
            out << "forall ";
            for (std::size_t i = 0; i < fn.forallVars.size(); ++i) out << (i ? ", " : "") << fn.forallVars[i];
            out << " -> ";
        }
        out << fn.returnType.str() << " " << fn.name << "(";
        for (std::size_t i = 0; i < fn.params.size(); ++i) {
            const auto& p = fn.params[i];
            if (i) out << ", ";
            if (p.type == TypeExpr::inferred()) {
                out << p.name;
            } else {
                out << p.type.str() << (p.name.empty() ? "" : " " + p.name);
            }
        }
        out << ")";
        if (fn.has(Modifier::Impure)) out << " impure";
        if (fn.has(Modifier::Inline)) out << " inline";
        if (fn.has(Modifier::InlineRef)) out << " inline_ref";
        if (fn.has(Modifier::MethodId)) out << " method_id";
        if (fn.asmBody) {
            out << " asm \"" << *fn.asmBody << "\";\n";
        } else if (!fn.hasBody) {
            out << ";\n";
        } else {
            out << " ";
            printBlock(out, fn.body, 0);
            out << "\n";
        }
    }
    return out.str();
}

bool sameExpr(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.text != b.text || a.intValue != b.intValue || !sameType(a.type, b.type)) return false;
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!sameExpr(a.children[i], b.children[i])) return false;
    }
    return true;
}

bool sameStmts(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!sameStmt(a[i], b[i])) return false;
    }
    return true;
}

bool sameUnit(const SourceUnit& a, const SourceUnit& b) {
    if (a.functions.size() != b.functions.size() || a.globals.size() != b.globals.size() ||
        a.constants.size() != b.constants.size() || a.directives.size() != b.directives.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.globals.size(); ++i) {
        if (a.globals[i].name != b.globals[i].name || a.globals[i].declaredType != b.globals[i].declaredType) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.constants.size(); ++i) {
        const auto &x = a.constants[i], &y = b.constants[i];
        if (x.name != y.name || x.declaredType != y.declaredType || !sameExpr(x.value, y.value)) return false;
    }
    for (std::size_t i = 0; i < a.directives.size(); ++i) {
        if (a.directives[i].kind != b.directives[i].kind || a.directives[i].argument != b.directives[i].argument) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.functions.size(); ++i) {
        const auto &x = a.functions[i], &y = b.functions[i];
        if (x.name != y.name || x.returnType != y.returnType || x.modifiers != y.modifiers ||
            x.forallVars != y.forallVars || x.hasBody != y.hasBody || x.asmBody != y.asmBody ||
            x.params.size() != y.params.size()) {
            return false;
        }
        for (std::size_t k = 0; k < x.params.size(); ++k) {
            if (x.params[k].name != y.params[k].name || x.params[k].type != y.params[k].type) return false;
        }
        if (!sameStmts(x.body, y.body)) return false;
    }
    return true;
}

}  // namespace tonscan::frontend
