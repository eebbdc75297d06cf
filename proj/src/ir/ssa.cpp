#include "tonscan/ir/ssa.hpp"

#include <algorithm>
#include <map>

namespace tonscan::ir {
namespace {

std::vector<std::vector<bool>> liveIn(const Cfg& cfg) {
    const std::size_t nb = cfg.blocks.size(), nv = cfg.vars.size();
    std::vector<std::vector<bool>> use(nb, std::vector<bool>(nv)), def(nb, std::vector<bool>(nv));
    for (const auto& b : cfg.blocks) {
        for (const auto& ins : b.instrs) {
            for (VarId u : ins.uses()) {
                if (!def[b.id][u]) use[b.id][u] = true;
            }
            for (VarId d : ins.dests) def[b.id][d] = true;
        }
    }
    std::vector<std::vector<bool>> in(nb, std::vector<bool>(nv));
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = cfg.blocks.rbegin(); it != cfg.blocks.rend(); ++it) {
            const auto& b = *it;
            for (VarId v = 0; v < nv; ++v) {
                if (in[b.id][v]) continue;
                bool live = use[b.id][v];
                if (!live && !def[b.id][v]) {
                    for (BlockId s : b.succs) {
                        if (in[s][v]) {
                            live = true;
                            break;
                        }
                    }
                }
                if (live) {
                    in[b.id][v] = true;
                    changed = true;
                }
            }
        }
    }
    return in;
}

class Renamer {
public:
    Renamer(const Cfg& src, Cfg& out, const DomTree& tree) : src_(src), out_(out), tree_(tree) {
        stacks_.resize(src.vars.size());
        zero_.assign(src.vars.size(), kNoVar);
        for (VarId p : src.params) zero(p);
    }

    void run() {
        // iterative walk over the dominator tree; the second visit pops
        std::vector<std::pair<BlockId, bool>> work{{out_.entry, false}};
        std::vector<std::vector<VarId>> pushed(out_.blocks.size());
        while (!work.empty()) {
            auto [b, leaving] = work.back();
            work.pop_back();
            if (leaving) {
                for (VarId old : pushed[b]) stacks_[old].pop_back();
                continue;
            }
            visit(b, pushed[b]);
            work.push_back({b, true});
            const auto& kids = tree_.children(b);
            for (auto it = kids.rbegin(); it != kids.rend(); ++it) work.push_back({*it, false});
        }
    }

    // source variable of the phi at (block, position)
    std::map<std::pair<BlockId, std::size_t>, VarId> phiVar;

private:
    VarId zero(VarId old) {
        if (zero_[old] != kNoVar) return zero_[old];
        Variable v = src_.vars[old];
        v.version = 0;
        v.undefinedUse = v.role != VarRole::Param;
        zero_[old] = out_.addVar(std::move(v));
        return zero_[old];
    }

    VarId current(VarId old) { return stacks_[old].empty() ? zero(old) : stacks_[old].back(); }

    VarId fresh(VarId old, std::vector<VarId>& pushed) {
        Variable v = src_.vars[old];
        v.version = ++counters_[v.base];
        const VarId id = out_.addVar(std::move(v));
        stacks_[old].push_back(id);
        pushed.push_back(old);
        return id;
    }

    void visit(BlockId b, std::vector<VarId>& pushed) {
        auto& block = out_.blocks[b];
        for (std::size_t i = 0; i < block.instrs.size(); ++i) {
            auto& ins = block.instrs[i];
            if (ins.op == Opcode::Phi) {
                ins.dests[0] = fresh(phiVar.at({b, i}), pushed);
                continue;
            }
            for (auto& a : ins.args) {
                if (a.isVar()) a.var = current(a.var);
            }
            for (auto& d : ins.dests) d = fresh(d, pushed);
        }
        for (BlockId s : block.succs) {
            auto& succ = out_.blocks[s];
            for (std::size_t i = 0; i < succ.instrs.size() && succ.instrs[i].op == Opcode::Phi; ++i) {
                succ.instrs[i].incoming.push_back({b, current(phiVar.at({s, i}))});
            }
        }
    }

    const Cfg& src_;
    Cfg& out_;
    const DomTree& tree_;
    std::vector<std::vector<VarId>> stacks_;
    std::vector<VarId> zero_;
    std::map<std::string, int> counters_;
};

}  // namespace

Cfg toSsa(const Cfg& cfg) {
    const Dominance dom = computeDominance(cfg);
    const auto live = liveIn(cfg);

    std::vector<std::vector<BlockId>> defBlocks(cfg.vars.size());
    for (const auto& b : cfg.blocks) {
        for (const auto& ins : b.instrs) {
            for (VarId d : ins.dests) {
                if (defBlocks[d].empty() || defBlocks[d].back() != b.id) defBlocks[d].push_back(b.id);
            }
        }
    }

    // phi placement: per block, the source variables needing a phi
    std::vector<std::vector<VarId>> phis(cfg.blocks.size());
    for (VarId v = 0; v < cfg.vars.size(); ++v) {
        if (defBlocks[v].empty()) continue;
        std::vector<bool> placed(cfg.blocks.size(), false), queued(cfg.blocks.size(), false);
        std::vector<BlockId> work = defBlocks[v];
        for (BlockId b : work) queued[b] = true;
        while (!work.empty()) {
            const BlockId x = work.back();
            work.pop_back();
            for (std::uint32_t y : dom.frontiers[x]) {
                if (placed[y] || !live[y][v]) continue;
                placed[y] = true;
                phis[y].push_back(v);
                if (!queued[y]) {
                    queued[y] = true;
                    work.push_back(y);
                }
            }
        }
    }

    Cfg out;
    out.function = cfg.function;
    out.entry = cfg.entry;
    out.span = cfg.span;
    out.isSsa = true;
    out.blocks = cfg.blocks;
    Renamer renamer(cfg, out, dom.tree);
    for (auto& b : out.blocks) {
        std::vector<Instruction> prefix;
        std::sort(phis[b.id].begin(), phis[b.id].end());
        for (std::size_t i = 0; i < phis[b.id].size(); ++i) {
            Instruction phi;
            phi.op = Opcode::Phi;
            phi.span = cfg.span;
            phi.stmtSpan = cfg.span;
            phi.dests = {kNoVar};
            phi.destSpans = {Span{}};
            renamer.phiVar[{b.id, i}] = phis[b.id][i];
            prefix.push_back(std::move(phi));
        }
        b.instrs.insert(b.instrs.begin(), prefix.begin(), prefix.end());
    }
    renamer.run();
    // the renamer created the parameters' version-0 variables first, in order
    for (VarId i = 0; i < cfg.params.size(); ++i) out.params.push_back(i);
    return out;
}

std::vector<DefSite> definitionSites(const Cfg& cfg) {
    std::vector<DefSite> sites(cfg.vars.size(), DefSite{cfg.entry, SIZE_MAX});
    for (const auto& b : cfg.blocks) {
        for (std::size_t i = 0; i < b.instrs.size(); ++i) {
            for (VarId d : b.instrs[i].dests) sites[d] = {b.id, i};
        }
    }
    return sites;
}

std::vector<std::string> checkSsa(const Cfg& cfg) {
    std::vector<std::string> errors;
    std::vector<int> defs(cfg.vars.size(), 0);
    for (const auto& b : cfg.blocks) {
        for (const auto& ins : b.instrs) {
            for (VarId d : ins.dests) ++defs[d];
        }
    }
    for (VarId v = 0; v < cfg.vars.size(); ++v) {
        const int expected = cfg.vars[v].version == 0 ? 0 : 1;
        if (defs[v] != expected) {
            errors.push_back(cfg.vars[v].name() + " defined " + std::to_string(defs[v]) + " times");
        }
    }
    const Dominance dom = computeDominance(cfg);
    const auto sites = definitionSites(cfg);
    for (const auto& b : cfg.blocks) {
        bool seenNonPhi = false;
        for (std::size_t i = 0; i < b.instrs.size(); ++i) {
            const auto& ins = b.instrs[i];
            if (ins.isTerminator() && i + 1 != b.instrs.size()) {
                errors.push_back("terminator in the middle of bb" + std::to_string(b.id));
            }
            if (ins.op == Opcode::Phi) {
                if (seenNonPhi) errors.push_back("phi after non-phi in bb" + std::to_string(b.id));
                if (ins.incoming.size() != b.preds.size()) {
                    errors.push_back("phi arity mismatch in bb" + std::to_string(b.id));
                }
                for (const auto& in : ins.incoming) {
                    if (std::find(b.preds.begin(), b.preds.end(), in.pred) == b.preds.end()) {
                        errors.push_back("phi names a non-predecessor in bb" + std::to_string(b.id));
                    }
                    const auto& site = sites[in.var];
                    if (!dom.tree.dominates(site.block, in.pred)) {
                        errors.push_back(cfg.vars[in.var].name() + " does not reach phi edge into bb" +
                                         std::to_string(b.id));
                    }
                }
                continue;
            }
            seenNonPhi = true;
            for (VarId u : ins.uses()) {
                const auto& site = sites[u];
                const bool ok = site.block == b.id ? (site.index == SIZE_MAX || site.index < i)
                                                   : dom.tree.dominates(site.block, b.id);
                if (!ok) {
                    errors.push_back("use of " + cfg.vars[u].name() + " in bb" + std::to_string(b.id) +
                                     " not dominated by its definition");
                }
            }
        }
    }
    return errors;
}

}  // namespace tonscan::ir
