#include "tonscan/analysis/program.hpp"

#include "tonscan/ir/lower.hpp"
#include "tonscan/ir/ssa.hpp"

namespace tonscan::analysis {

std::size_t declaredReturnArity(const frontend::FunctionDecl& fn) {
    const auto& t = fn.returnType;
    if (t.kind != frontend::TypeExpr::Kind::Atom || t.name != "_") return t.arity();
    std::optional<std::size_t> found;
    frontend::walkStmts(fn.body, [&](const frontend::Stmt& s) {
        if (found || s.kind != frontend::StmtKind::Return || !s.expr) return;
        found = s.expr->kind == frontend::ExprKind::Tensor ? s.expr->children.size() : 1;
    });
    return found.value_or(0);
}

int Program::indexOf(const std::string& name) const {
    auto it = byName.find(name);
    return it == byName.end() ? -1 : it->second;
}

const ir::Cfg* Program::cfg(const std::string& name) const {
    const int i = indexOf(name);
    return i < 0 ? nullptr : &cfgs[static_cast<std::size_t>(i)];
}

std::optional<std::size_t> Program::returnArity(const std::string& name, bool tilde) const {
    if (tilde) {
        if (const auto* fn = unit->findFunction("~" + name)) return declaredReturnArity(*fn);
    }
    if (const auto* fn = unit->findFunction(name)) return declaredReturnArity(*fn);
    return catalog->returnArity(name, tilde);
}

Program buildProgram(const frontend::SourceUnit& unit, const BuiltinCatalog& catalog) {
    Program p;
    p.unit = &unit;
    p.catalog = &catalog;
    ir::LowerContext ctx;
    ctx.unit = &unit;
    ctx.returnArity = [&p](const std::string& name, bool tilde) { return p.returnArity(name, tilde); };
    for (const auto& fn : unit.functions) {
        if (!fn.hasBody || p.byName.count(fn.name)) continue;
        p.byName[fn.name] = static_cast<int>(p.functions.size());
        p.functions.push_back(&fn);
        p.cfgs.push_back(ir::toSsa(ir::lower(fn, ctx)));
        p.dominance.push_back(ir::computeDominance(p.cfgs.back()));
    }
    return p;
}

}  // namespace tonscan::analysis
