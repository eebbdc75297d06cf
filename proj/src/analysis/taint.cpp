#include "tonscan/analysis/taint.hpp"

#include "tonscan/analysis/constants.hpp"

namespace tonscan::analysis {

using ir::Opcode;

const char* taintSourceName(TaintSource s) { return s == TaintSource::LogicalTime ? "logical time" : "randomness"; }

const char* sinkKindName(SinkKind k) {
    switch (k) {
        case SinkKind::Comparison: return "comparison";
        case SinkKind::BranchCond: return "branch condition";
        case SinkKind::IndexAccess: return "index access";
        case SinkKind::SeedArg: return "seed argument";
    }
    return "";
}

namespace {

constexpr TaintMask kLt = maskOf(TaintSource::LogicalTime);
constexpr TaintMask kRand = maskOf(TaintSource::Randomness);

bool isSeeding(const BuiltinInfo* b) { return b && has(b->effects, Effect::RandomnessApi) && b->rets == 0; }
bool isRandomValue(const BuiltinInfo* b) {
    return b && has(b->effects, Effect::RandomnessApi) && b->rets > 0 && b->name != "get_seed";
}

}  // namespace

TaintEngine::TaintEngine(const Program& program, std::size_t function, const TaintConfig& config,
                         const std::vector<TaintMask>& returnSummaries)
    : program_(program),
      cfg_(program.cfgs.at(function)),
      dom_(program.dominance.at(function)),
      summaries_(returnSummaries) {
    state_.vars.assign(cfg_.vars.size(), 0);
    for (auto [v, s] : config.seeds) state_.vars.at(v) |= maskOf(s);
    order_ = ir::reversePostorder(cfg_);
    const std::size_t n = cfg_.blocks.size();
    reach_.assign(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<ir::BlockId> stack(cfg_.blocks[a].succs.begin(), cfg_.blocks[a].succs.end());
        while (!stack.empty()) {
            const ir::BlockId b = stack.back();
            stack.pop_back();
            if (reach_[a][b]) continue;
            reach_[a][b] = true;
            for (ir::BlockId s : cfg_.blocks[b].succs) stack.push_back(s);
        }
    }
}

void TaintEngine::taint(ir::VarId v, TaintMask m, bool& changed) {
    if ((state_.vars[v] | m) != state_.vars[v]) {
        state_.vars[v] |= m;
        changed = true;
    }
}

bool TaintEngine::isTaintedSeed(const ir::Instruction& ins) const {
    if (ins.op != Opcode::Call || program_.indexOf(ins.name) >= 0) return false;
    const BuiltinInfo* b = program_.catalog->find(ins.name);
    if (!isSeeding(b)) return false;
    if (b->args == 0) return b->name == "randomize_lt";
    for (const auto& a : ins.args) {
        if (a.isVar() && (state_.vars[a.var] & kLt)) return true;
    }
    return false;
}

bool TaintEngine::afterTaintedSeed(ir::BlockId block, std::size_t index) const {
    for (const auto& b : cfg_.blocks) {
        for (std::size_t i = 0; i < b.instrs.size(); ++i) {
            if (!isTaintedSeed(b.instrs[i])) continue;
            if ((b.id == block && i < index) || reach_[b.id][block]) return true;
        }
    }
    return false;
}

bool TaintEngine::pass() {
    bool changed = false;
    ++state_.passes;
    for (ir::BlockId bid : order_) {
        const auto& block = cfg_.blocks[bid];
        for (std::size_t i = 0; i < block.instrs.size(); ++i) {
            const auto& ins = block.instrs[i];
            TaintMask in = 0;
            for (ir::VarId u : ins.uses()) in |= state_.vars[u];
            switch (ins.op) {
                case Opcode::Assign:
                case Opcode::Phi:
                    for (ir::VarId d : ins.dests) taint(d, in, changed);
                    break;
                case Opcode::Call: {
                    TaintMask out = in;
                    const int callee = program_.indexOf(ins.name);
                    if (callee >= 0) {
                        out |= summaries_[static_cast<std::size_t>(callee)];
                    } else if (const BuiltinInfo* b = program_.catalog->find(ins.name)) {
                        if (has(b->effects, Effect::LogicalTimeSource)) out |= kLt;
                        if (isRandomValue(b) && afterTaintedSeed(bid, i)) out |= kRand;
                    }
                    for (ir::VarId d : ins.dests) taint(d, out, changed);
                    break;
                }
                case Opcode::GlobRead: {
                    auto it = state_.globals.find(ins.name);
                    if (it != state_.globals.end()) taint(ins.dests[0], it->second, changed);
                    break;
                }
                case Opcode::SetGlob: {
                    TaintMask& g = state_.globals[ins.name];
                    if ((g | in) != g) {
                        g |= in;
                        changed = true;
                    }
                    break;
                }
                case Opcode::Return:
                    state_.returns |= in;
                    break;
                case Opcode::Branch: {
                    if (in == 0) break;
                    for (const auto& other : cfg_.blocks) {
                        bool dominated = false;
                        for (ir::BlockId t : ins.targets) dominated |= dom_.tree.dominates(t, other.id);
                        if (!dominated) continue;
                        for (const auto& def : other.instrs) {
                            for (ir::VarId d : def.dests) taint(d, in, changed);
                        }
                    }
                    break;
                }
                default:
                    break;
            }
        }
    }
    return changed;
}

void TaintEngine::collectHits() {
    state_.hits.clear();
    auto record = [&](SinkKind kind, TaintMask m, const ir::Instruction& ins, ir::BlockId b, std::size_t i) {
        for (TaintSource s : {TaintSource::LogicalTime, TaintSource::Randomness}) {
            if (m & maskOf(s)) state_.hits.push_back({kind, s, ins.span, b, i});
        }
    };
    for (const auto& block : cfg_.blocks) {
        for (std::size_t i = 0; i < block.instrs.size(); ++i) {
            const auto& ins = block.instrs[i];
            TaintMask in = 0;
            for (ir::VarId u : ins.uses()) in |= state_.vars[u];
            if (ins.op == Opcode::Assign && isComparison(ins.name)) {
                record(SinkKind::Comparison, in, ins, block.id, i);
            } else if (ins.op == Opcode::Branch) {
                record(SinkKind::BranchCond, in, ins, block.id, i);
            } else if (ins.op == Opcode::Call && program_.indexOf(ins.name) < 0) {
                const BuiltinInfo* b = program_.catalog->find(ins.name);
                if (isSeeding(b)) {
                    if (isTaintedSeed(ins)) state_.hits.push_back({SinkKind::SeedArg, TaintSource::LogicalTime, ins.span, block.id, i});
                } else if (b && b->indexArg >= 0 && static_cast<std::size_t>(b->indexArg) < ins.args.size()) {
                    const auto& key = ins.args[static_cast<std::size_t>(b->indexArg)];
                    if (key.isVar()) record(SinkKind::IndexAccess, state_.vars[key.var], ins, block.id, i);
                }
            }
        }
    }
}

TaintState TaintEngine::finish() {
    while (pass()) {
    }
    collectHits();
    return state_;
}

TaintState runTaint(const Program& program, std::size_t function, const TaintConfig& config) {
    std::vector<TaintMask> summaries(program.cfgs.size(), 0);
    auto all = runTaint(program);
    for (std::size_t f = 0; f < all.size(); ++f) summaries[f] = all[f].returns;
    return TaintEngine(program, function, config, summaries).finish();
}

std::vector<TaintState> runTaint(const Program& program) {
    const std::size_t n = program.cfgs.size();
    std::vector<TaintMask> summaries(n, 0);
    std::vector<TaintState> states(n);
    for (std::size_t round = 0; round <= n + 1; ++round) {
        bool changed = false;
        for (std::size_t f = 0; f < n; ++f) {
            states[f] = TaintEngine(program, f, {}, summaries).finish();
            if (states[f].returns != summaries[f]) {
                summaries[f] |= states[f].returns;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return states;
}

}  // namespace tonscan::analysis
