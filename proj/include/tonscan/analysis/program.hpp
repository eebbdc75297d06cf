#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tonscan/analysis/catalog.hpp"
#include "tonscan/frontend/ast.hpp"
#include "tonscan/ir/cfg.hpp"
#include "tonscan/ir/dominance.hpp"

namespace tonscan::analysis {

/// Every function body of a compilation unit in SSA form, plus the lookups
/// shared by the analyses. Holds pointers into `unit` and `catalog`, which
/// must outlive it.
struct Program {
    const frontend::SourceUnit* unit = nullptr;
    const BuiltinCatalog* catalog = nullptr;
    std::vector<const frontend::FunctionDecl*> functions;  // with a body, unit order
    std::vector<ir::Cfg> cfgs;                             // SSA, parallel to `functions`
    std::vector<ir::Dominance> dominance;                  // parallel to `cfgs`

    /// Index into `functions`/`cfgs`, or -1 when `name` has no body.
    int indexOf(const std::string& name) const;
    const ir::Cfg* cfg(const std::string& name) const;

    /// Values produced by a call to `name`; see LowerContext::returnArity.
    std::optional<std::size_t> returnArity(const std::string& name, bool tilde) const;

    std::unordered_map<std::string, int> byName;
};

Program buildProgram(const frontend::SourceUnit& unit, const BuiltinCatalog& catalog);

/// Declared return arity, or for `_` the arity of the first `return`.
std::size_t declaredReturnArity(const frontend::FunctionDecl& fn);

}  // namespace tonscan::analysis
