#pragma once

#include <string>

#include "tonscan/frontend/ast.hpp"

namespace tonscan::frontend {

/// Debug pretty-printer producing FunC that parses back to an equal AST.
/// Binary, unary and ternary expressions are fully parenthesized.
std::string printAst(const SourceUnit& unit);
std::string printExpr(const Expr& e);

/// Structural equality ignoring spans and diagnostics.
bool sameExpr(const Expr& a, const Expr& b);
bool sameStmts(const std::vector<Stmt>& a, const std::vector<Stmt>& b);
bool sameUnit(const SourceUnit& a, const SourceUnit& b);

}  // namespace tonscan::frontend
