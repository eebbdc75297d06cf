#include "tonscan/analysis/callgraph.hpp"

#include <map>

#include "tonscan/analysis/constants.hpp"

namespace tonscan::analysis {

using ir::Opcode;

namespace {

bool isFourBitFlags(const ConstEval& ce, ir::VarId v) {
    const ir::Instruction* d = ce.def(ce.root(v));
    if (!d || d->op != Opcode::Call || d->args.size() < 2) return false;
    if (d->name != "load_uint" && d->name != "~load_uint") return false;
    const ir::VarId result = d->modifying ? (d->dests.size() > 1 ? d->dests[1] : ir::kNoVar) : d->dests.back();
    if (result != ce.root(v)) return false;
    return ce.value(d->args[1]) == 4;
}

}  // namespace

std::optional<BouncedCheck> findBouncedCheck(const ir::Cfg& cfg) {
    const ConstEval ce(cfg);
    for (const auto& b : cfg.blocks) {
        const ir::Instruction* t = b.terminator();
        if (!t || t->op != Opcode::Branch || !t->args[0].isVar()) continue;
        const ir::Instruction* cond = ce.def(ce.root(t->args[0].var));
        if (!cond || cond->op != Opcode::Assign || cond->name != "&" || cond->args.size() != 2) continue;
        for (int side = 0; side < 2; ++side) {
            const auto& flags = cond->args[static_cast<std::size_t>(side)];
            const auto& mask = cond->args[static_cast<std::size_t>(1 - side)];
            if (!flags.isVar() || ce.value(mask) != 1 || !isFourBitFlags(ce, flags.var)) continue;
            BouncedCheck check;
            check.block = b.id;
            check.bouncedTarget = t->targets[t->negated ? 1 : 0];
            check.flags = ce.root(flags.var);
            check.span = t->span;
            return check;
        }
    }
    return std::nullopt;
}

int CallGraph::functionNode(const std::string& name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].kind == NodeKind::Function && nodes[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

std::vector<const CallGraph::Edge*> CallGraph::outgoing(std::uint32_t node) const {
    std::vector<const Edge*> out;
    for (const auto& e : edges) {
        if (e.from == node) out.push_back(&e);
    }
    return out;
}

std::vector<const CallGraph::Edge*> CallGraph::incoming(std::uint32_t node) const {
    std::vector<const Edge*> out;
    for (const auto& e : edges) {
        if (e.to == node) out.push_back(&e);
    }
    return out;
}

CallGraph buildCallGraph(const Program& program) {
    CallGraph g;
    // Step 1: one node per function body; Program function i is node i.
    for (const auto* fn : program.functions) g.nodes.push_back({CallGraph::NodeKind::Function, fn->name, {}});
    std::map<std::string, std::uint32_t> external;
    auto externalNode = [&](const std::string& name) {
        auto it = external.find(name);
        if (it != external.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(g.nodes.size());
        g.nodes.push_back({CallGraph::NodeKind::ExternalBuiltin, name, {}});
        external.emplace(name, id);
        return id;
    };
    // Steps 2 and 3: a Call edge per call site; message sends get their own node.
    for (std::size_t f = 0; f < program.cfgs.size(); ++f) {
        const auto& cfg = program.cfgs[f];
        for (const auto& b : cfg.blocks) {
            for (std::size_t i = 0; i < b.instrs.size(); ++i) {
                const auto& ins = b.instrs[i];
                if (ins.op != Opcode::Call) continue;
                CallGraph::Edge e;
                e.from = static_cast<std::uint32_t>(f);
                e.site = ins.span;
                e.caller = static_cast<int>(f);
                e.block = b.id;
                e.instr = i;
                const int callee = program.indexOf(ins.name);
                if (callee >= 0) {
                    e.to = static_cast<std::uint32_t>(callee);
                } else if (ins.name == "send_raw_message") {
                    e.to = static_cast<std::uint32_t>(g.nodes.size());
                    g.nodes.push_back({CallGraph::NodeKind::SendMessage, ins.name, ins.span});
                } else {
                    e.to = externalNode(ins.name);
                }
                g.edges.push_back(e);
            }
        }
    }
    // Step 4: bounced messages re-enter through recv_internal.
    const int recv = program.indexOf("recv_internal");
    if (recv >= 0) {
        if (auto check = findBouncedCheck(program.cfgs[static_cast<std::size_t>(recv)])) {
            const auto id = static_cast<std::uint32_t>(g.nodes.size());
            g.nodes.push_back({CallGraph::NodeKind::RecvBounced, "recv_bounced", check->span});
            CallGraph::Edge e;
            e.from = id;
            e.to = static_cast<std::uint32_t>(recv);
            e.kind = CallGraph::EdgeKind::Bounce;
            e.site = check->span;
            g.edges.push_back(e);
        }
    }
    return g;
}

std::vector<EffectSet> transitiveEffects(const Program& program, const CallGraph& graph) {
    const std::size_t n = program.cfgs.size();
    std::vector<EffectSet> fx(n, 0);
    for (std::size_t f = 0; f < n; ++f) {
        for (const auto& b : program.cfgs[f].blocks) {
            for (const auto& ins : b.instrs) {
                if (ins.op == Opcode::SetGlob) fx[f] |= bit(Effect::GlobalWrite);
                if (ins.op == Opcode::Call && program.indexOf(ins.name) < 0) {
                    if (const auto* info = program.catalog->find(ins.name)) fx[f] |= info->effects;
                }
            }
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& e : graph.edges) {
            if (e.kind != CallGraph::EdgeKind::Call || e.to >= n) continue;
            const EffectSet merged = fx[e.from] | fx[e.to];
            if (merged != fx[e.from]) {
                fx[e.from] = merged;
                changed = true;
            }
        }
    }
    return fx;
}

}  // namespace tonscan::analysis
