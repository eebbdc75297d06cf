#include "tonscan/frontend/ast.hpp"

namespace tonscan::frontend {

std::size_t TypeExpr::arity() const {
    if (kind != Kind::Tensor) return 1;
    std::size_t n = 0;
    for (const auto& item : items) n += item.arity();
    return n;
}

std::string TypeExpr::str() const {
    if (kind == Kind::Atom) return name;
    std::string out = kind == Kind::Tensor ? "(" : "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i].str();
    }
    out += kind == Kind::Tensor ? ")" : "]";
    return out;
}

void SourceUnit::index() {
    fnIndex_.clear();
    globalIndex_.clear();
    constIndex_.clear();
    for (std::size_t i = 0; i < functions.size(); ++i) {
        auto [it, inserted] = fnIndex_.emplace(functions[i].name, i);
        if (!inserted && !functions[it->second].hasBody && functions[i].hasBody) it->second = i;
    }
    for (std::size_t i = 0; i < globals.size(); ++i) globalIndex_.emplace(globals[i].name, i);
    for (std::size_t i = 0; i < constants.size(); ++i) constIndex_.emplace(constants[i].name, i);
}

const FunctionDecl* SourceUnit::findFunction(const std::string& name) const {
    auto it = fnIndex_.find(name);
    return it == fnIndex_.end() ? nullptr : &functions[it->second];
}

const GlobalDecl* SourceUnit::findGlobal(const std::string& name) const {
    auto it = globalIndex_.find(name);
    return it == globalIndex_.end() ? nullptr : &globals[it->second];
}

const ConstDecl* SourceUnit::findConst(const std::string& name) const {
    auto it = constIndex_.find(name);
    return it == constIndex_.end() ? nullptr : &constants[it->second];
}

std::size_t SourceUnit::opaqueCount() const {
    std::size_t n = 0;
    for (const auto& fn : functions) {
        walkStmts(fn.body, [&](const Stmt& s) {
            if (s.kind == StmtKind::Opaque) ++n;
        });
    }
    return n;
}

}  // namespace tonscan::frontend
