#pragma once

#include <functional>
#include <optional>
#include <string>

#include "tonscan/frontend/ast.hpp"
#include "tonscan/ir/cfg.hpp"

namespace tonscan::ir {

struct LowerContext {
    const frontend::SourceUnit* unit = nullptr;
    /// Size of the value tensor returned by callee `name`. For the
    /// modifying form (`tilde`) this includes the updated receiver. Empty
    /// when the callee is unknown.
    std::function<std::optional<std::size_t>(const std::string& name, bool tilde)> returnArity;
};

/// Lowers one function body to a non-SSA CFG. Unreachable blocks are
/// pruned; opaque statements become Nop instructions.
Cfg lower(const frontend::FunctionDecl& fn, const LowerContext& ctx);

/// Folds a constant expression built from literals, other constants,
/// `asm "<n> PUSHINT"` functions and integer operators.
std::optional<std::int64_t> evalConst(const frontend::Expr& e, const frontend::SourceUnit& unit);

/// crc32 of the text between the quotes of a `"..."c` literal.
std::int64_t crc32Literal(std::string_view literal);

}  // namespace tonscan::ir
