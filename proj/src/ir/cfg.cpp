#include "tonscan/ir/cfg.hpp"

#include <algorithm>

namespace tonscan::ir {

std::vector<VarId> Instruction::uses() const {
    std::vector<VarId> out;
    for (const auto& a : args) {
        if (a.isVar()) out.push_back(a.var);
    }
    for (const auto& in : incoming) out.push_back(in.var);
    return out;
}

void Cfg::linkEdges() {
    for (auto& b : blocks) {
        b.succs.clear();
        b.preds.clear();
    }
    for (auto& b : blocks) {
        if (const Instruction* t = b.terminator()) {
            for (BlockId s : t->targets) {
                if (std::find(b.succs.begin(), b.succs.end(), s) == b.succs.end()) b.succs.push_back(s);
            }
        }
    }
    for (const auto& b : blocks) {
        for (BlockId s : b.succs) blocks[s].preds.push_back(b.id);
    }
}

void Cfg::pruneUnreachable() {
    linkEdges();
    std::vector<bool> seen(blocks.size(), false);
    std::vector<BlockId> stack{entry};
    seen[entry] = true;
    while (!stack.empty()) {
        const BlockId b = stack.back();
        stack.pop_back();
        for (BlockId s : blocks[b].succs) {
            if (!seen[s]) {
                seen[s] = true;
                stack.push_back(s);
            }
        }
    }
    std::vector<BlockId> remap(blocks.size(), UINT32_MAX);
    std::vector<BasicBlock> kept;
    for (auto& b : blocks) {
        if (!seen[b.id]) continue;
        remap[b.id] = static_cast<BlockId>(kept.size());
        kept.push_back(std::move(b));
    }
    for (auto& b : kept) {
        b.id = remap[b.id];
        for (auto& ins : b.instrs) {
            for (auto& t : ins.targets) t = remap[t];
            std::erase_if(ins.incoming, [&](const PhiIncoming& in) { return remap[in.pred] == UINT32_MAX; });
            for (auto& in : ins.incoming) in.pred = remap[in.pred];
        }
    }
    entry = remap[entry];
    blocks = std::move(kept);
    linkEdges();
}

std::size_t Cfg::instructionCount() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.instrs.size();
    return n;
}

}  // namespace tonscan::ir
