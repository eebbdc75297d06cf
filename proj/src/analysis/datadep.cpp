#include "tonscan/analysis/datadep.hpp"

#include <algorithm>

namespace tonscan::analysis {

DataDepTree buildDataDep(const ir::Cfg& cfg) {
    DataDepTree t;
    t.deps.resize(cfg.vars.size());
    for (const auto& b : cfg.blocks) {
        for (const auto& ins : b.instrs) {
            const bool phi = ins.op == ir::Opcode::Phi;
            for (ir::VarId d : ins.dests) {
                auto& list = t.deps[d];
                for (ir::VarId u : ins.uses()) {
                    const bool dup = std::any_of(list.begin(), list.end(),
                                                 [&](const DataDepTree::Dep& x) { return x.var == u; });
                    if (!dup) list.push_back({u, phi});
                }
            }
        }
    }
    return t;
}

std::vector<ir::VarId> DataDepTree::closure(ir::VarId v) const {
    std::vector<bool> seen(deps.size(), false);
    std::vector<ir::VarId> stack;
    for (const auto& d : deps[v]) stack.push_back(d.var);
    std::vector<ir::VarId> out;
    while (!stack.empty()) {
        const ir::VarId w = stack.back();
        stack.pop_back();
        if (seen[w]) continue;
        seen[w] = true;
        out.push_back(w);
        for (const auto& d : deps[w]) stack.push_back(d.var);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool DataDepTree::dependsOn(ir::VarId v, ir::VarId w) const {
    const auto c = closure(v);
    return std::binary_search(c.begin(), c.end(), w);
}

}  // namespace tonscan::analysis
