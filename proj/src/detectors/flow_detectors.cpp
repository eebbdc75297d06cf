#include <algorithm>
#include <set>

#include "tonscan/analysis/constants.hpp"
#include "tonscan/detectors/detectors.hpp"
#include "util.hpp"

namespace tonscan::detectors {

using detail::loc;
using detail::make;
using ir::Opcode;

std::vector<Finding> detectBR(const AnalysisContext& ctx) {
    std::vector<Finding> out;
    for (std::size_t f = 0; f < ctx.taint.size(); ++f) {
        const auto& hits = ctx.taint[f].hits;
        std::string downstream;
        for (const auto& h : hits) {
            if (h.kind == analysis::SinkKind::SeedArg || h.source != analysis::TaintSource::Randomness) continue;
            if (!downstream.empty()) downstream += ", ";
            downstream += std::string(analysis::sinkKindName(h.kind)) + " at " + loc(h.span);
        }
        for (const auto& h : hits) {
            if (h.kind != analysis::SinkKind::SeedArg) continue;
            std::string evidence = "seed carries logical time";
            evidence += downstream.empty() ? "; no downstream use of the random value found"
                                           : "; random value reaches " + downstream;
            out.push_back(make(DetectorId::BR, ctx.name(f), h.span,
                               "random generator seeded from logical time, which validators can predict",
                               evidence));
        }
    }
    return out;
}

namespace {

bool isDivision(const std::string& op) { return op == "/" || op == "~/" || op == "^/"; }

// Division reached from `start` through pure operators and copies.
const ir::Instruction* divisionSource(const ir::Cfg& cfg, const std::vector<const ir::Instruction*>& defs,
                                      ir::VarId start) {
    std::vector<bool> seen(cfg.vars.size(), false);
    std::vector<ir::VarId> stack{start};
    while (!stack.empty()) {
        const ir::VarId v = stack.back();
        stack.pop_back();
        if (seen[v]) continue;
        seen[v] = true;
        const auto* d = defs[v];
        if (!d || d->op != Opcode::Assign || d->dests.size() != 1 || !analysis::isPureOperator(d->name)) continue;
        if (isDivision(d->name)) return d;
        for (const auto& a : d->args) {
            if (a.isVar()) stack.push_back(a.var);
        }
    }
    return nullptr;
}

std::vector<const ir::Instruction*> definitions(const ir::Cfg& cfg) {
    std::vector<const ir::Instruction*> defs(cfg.vars.size(), nullptr);
    for (const auto& b : cfg.blocks) {
        for (const auto& ins : b.instrs) {
            for (ir::VarId d : ins.dests) defs[d] = &ins;
        }
    }
    return defs;
}

const std::set<std::string>& entryPoints() {
    static const std::set<std::string> names = {"recv_internal", "recv_external", "run_ticktock",
                                                "split_prepare", "split_install", "main"};
    return names;
}

std::string effectList(analysis::EffectSet effects) {
    using analysis::Effect;
    std::string out;
    for (Effect e : {Effect::StorageWrite, Effect::MessageSend, Effect::Throws, Effect::GlobalWrite}) {
        if (!analysis::has(effects, e)) continue;
        if (!out.empty()) out += ", ";
        out += analysis::effectName(e);
    }
    return out;
}

}  // namespace

std::vector<Finding> detectPL(const AnalysisContext& ctx) {
    std::vector<Finding> out;
    for (std::size_t f = 0; f < ctx.program->cfgs.size(); ++f) {
        const auto& cfg = ctx.cfg(f);
        const auto defs = definitions(cfg);
        for (const auto& b : cfg.blocks) {
            for (const auto& ins : b.instrs) {
                if (ins.op != Opcode::Assign || ins.name != "*") continue;
                for (const auto& a : ins.args) {
                    if (!a.isVar()) continue;
                    if (const auto* div = divisionSource(cfg, defs, a.var)) {
                        out.push_back(make(DetectorId::PL, ctx.name(f), ins.span,
                                           "multiplication after division loses precision; multiply first or use muldiv",
                                           "division at " + loc(div->span) + " feeds multiplication at " +
                                               loc(ins.span)));
                        break;
                    }
                }
            }
        }
    }
    return out;
}

std::vector<Finding> detectUR(const AnalysisContext& ctx) {
    std::vector<Finding> out;
    for (std::size_t f = 0; f < ctx.program->cfgs.size(); ++f) {
        const auto& cfg = ctx.cfg(f);
        const auto& uses = ctx.useCounts[f];
        for (const auto& b : cfg.blocks) {
            for (const auto& ins : b.instrs) {
                if (ins.op != Opcode::Call) continue;
                for (std::size_t i = 0; i < ins.dests.size(); ++i) {
                    if (ins.modifying && i == 0) continue;
                    const ir::VarId v = ins.dests[i];
                    const auto& var = cfg.var(v);
                    if (var.role != ir::VarRole::Local || uses[v] != 0) continue;
                    const bool hasSpan = i < ins.destSpans.size() && ins.destSpans[i].valid();
                    out.push_back(make(DetectorId::UR, ctx.name(f), hasSpan ? ins.destSpans[i] : ins.span,
                                       "return value of " + ins.name + "() stored in '" + var.base +
                                           "' is never used",
                                       "call at " + loc(ins.span)));
                }
            }
        }
    }
    return out;
}

std::vector<Finding> detectGVR(const AnalysisContext& ctx) {
    std::vector<Finding> out;
    const auto& unit = *ctx.program->unit;
    auto report = [&](const frontend::FunctionDecl& fn, const std::string& name, const frontend::Span& span,
                      const char* what) {
        const auto* g = unit.findGlobal(name);
        if (!g) return;
        out.push_back(make(DetectorId::GVR, fn.name, span,
                           std::string(what) + " '" + name + "' shadows the global variable of the same name",
                           "global declared at " + loc(g->span)));
    };
    for (const auto* fn : ctx.program->functions) {
        for (const auto& p : fn->params) {
            if (!p.name.empty()) report(*fn, p.name, p.span, "parameter");
        }
        frontend::walkStmts(fn->body, [&](const frontend::Stmt& s) {
            if (!s.expr) return;
            frontend::walkExpr(*s.expr, [&](const frontend::Expr& e) {
                if (e.kind == frontend::ExprKind::VarDecl) report(*fn, e.text, e.span, "local");
            });
        });
    }
    return out;
}

std::vector<Finding> detectIFM(const AnalysisContext& ctx) {
    using analysis::Effect;
    constexpr analysis::EffectSet kObservable = analysis::bit(Effect::StorageWrite) |
                                                analysis::bit(Effect::MessageSend) | analysis::bit(Effect::Throws) |
                                                analysis::bit(Effect::GlobalWrite);
    std::vector<Finding> out;
    const auto& program = *ctx.program;
    for (std::size_t f = 0; f < program.functions.size(); ++f) {
        const auto* fn = program.functions[f];
        if (fn->has(frontend::Modifier::Impure) || fn->has(frontend::Modifier::MethodId)) continue;
        if (entryPoints().count(fn->name)) continue;
        const analysis::EffectSet effects = ctx.effects[f] & kObservable;
        if (effects == 0) continue;
        const bool returnsNothing = analysis::declaredReturnArity(*fn) == 0;
        std::size_t calls = 0;
        bool resultUsed = false;
        const int node = ctx.graph.functionNode(fn->name);
        if (node >= 0) {
            for (const auto* e : ctx.graph.incoming(static_cast<std::uint32_t>(node))) {
                if (e->kind != analysis::CallGraph::EdgeKind::Call || e->caller < 0) continue;
                ++calls;
                const auto caller = static_cast<std::size_t>(e->caller);
                const auto& ins = program.cfgs[caller].blocks[e->block].instrs[e->instr];
                for (ir::VarId d : ins.dests) {
                    if (ctx.useCounts[caller][d] != 0) resultUsed = true;
                }
            }
        }
        if (!returnsNothing && (calls == 0 || resultUsed)) continue;
        out.push_back(make(DetectorId::IFM, fn->name, fn->nameSpan,
                           "function '" + fn->name +
                               "' has side effects but lacks the impure modifier, so the compiler may drop calls to it",
                           "effects: " + effectList(effects) +
                               (returnsNothing ? "; returns nothing" : "; results unused at every call site")));
    }
    return out;
}

}  // namespace tonscan::detectors
