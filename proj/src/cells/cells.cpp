#include "tonscan/cells/cells.hpp"

#include <algorithm>
#include <set>

#include "tonscan/analysis/constants.hpp"

namespace tonscan::cells {

using analysis::CellOp;
using ir::Opcode;
using Kind = CellValue::Kind;

CellValue join(const CellValue& a, const CellValue& b) {
    if (a.kind == Kind::Bottom) return b;
    if (b.kind == Kind::Bottom) return a;
    if (a.kind != b.kind) return CellValue::none();
    CellValue out = a;
    out.layout = join(a.layout, b.layout);
    out.source = join(a.source, b.source);
    out.fromStorage = a.fromStorage || b.fromStorage;
    out.relative = a.relative && b.relative;
    out.roots.insert(b.roots.begin(), b.roots.end());
    return out;
}

const ParseChain* CellAnalysis::chain(ir::VarId root) const {
    for (const auto& c : chains) {
        if (c.root == root) return &c;
    }
    return nullptr;
}

namespace {

CellValue builderOf(LayoutSet l, bool relative = false) {
    CellValue v;
    v.kind = Kind::Builder;
    v.layout = std::move(l);
    v.relative = relative;
    return v;
}

CellValue cellOf(LayoutSet l, bool fromStorage = false, bool relative = false) {
    CellValue v;
    v.kind = Kind::Cell;
    v.layout = std::move(l);
    v.fromStorage = fromStorage;
    v.relative = relative;
    return v;
}

CellValue sliceOf(LayoutSet consumed, LayoutSet source) {
    CellValue v;
    v.kind = Kind::Slice;
    v.layout = std::move(consumed);
    v.source = std::move(source);
    return v;
}

class Analyzer {
public:
    Analyzer(const analysis::Program& program, std::size_t function, const std::vector<HelperSummary>* summaries)
        : program_(program), cfg_(program.cfgs.at(function)), summaries_(summaries), ce_(cfg_) {
        result_.values.assign(cfg_.vars.size(), CellValue{});
        const auto rpo = ir::reversePostorder(cfg_);
        rpoIndex_.assign(cfg_.blocks.size(), SIZE_MAX);
        for (std::size_t i = 0; i < rpo.size(); ++i) rpoIndex_[rpo[i]] = i;
        header_.assign(cfg_.blocks.size(), false);
        for (const auto& b : cfg_.blocks) {
            for (ir::BlockId p : b.preds) {
                if (rpoIndex_[p] >= rpoIndex_[b.id]) header_[b.id] = true;
            }
        }
        defs_.assign(cfg_.vars.size(), nullptr);
        for (const auto& b : cfg_.blocks) {
            for (const auto& ins : b.instrs) {
                for (ir::VarId d : ins.dests) defs_[d] = &ins;
            }
        }
        for (ir::BlockId b : rpo) rpo_.push_back(b);
    }

    // Two sweeps in reverse postorder. The first sees only forward edges at
    // loop headers. Header phis that the back edges would still change, or
    // whose back-edge values depend on such a phi, are widened to Top before
    // the second sweep, which then reaches the fixpoint.
    CellAnalysis run() {
        initParams();
        for (ir::BlockId b : rpo_) visit(b);
        if (std::find(header_.begin(), header_.end(), true) != header_.end()) {
            markUnstable();
            for (ir::BlockId b : rpo_) visit(b);
        }
        collect();
        return std::move(result_);
    }

private:
    void initParams() {
        const auto* fn = program_.functions.at(static_cast<std::size_t>(program_.indexOf(cfg_.function)));
        for (std::size_t i = 0; i < cfg_.params.size(); ++i) {
            const ir::VarId p = cfg_.params[i];
            const auto& type = i < fn->params.size() ? fn->params[i].type : frontend::TypeExpr::inferred();
            CellValue v = CellValue::none();
            if (type.kind == frontend::TypeExpr::Kind::Atom) {
                if (type.name == "builder") {
                    const bool relative = i == 0 && summaries_ == nullptr;
                    v = builderOf(relative ? LayoutSet::single({}) : LayoutSet::topValue(), relative);
                } else if (type.name == "slice") {
                    v = sliceOf(LayoutSet::single({}), LayoutSet::topValue());
                } else if (type.name == "cell") {
                    v = cellOf(LayoutSet::topValue());
                }
            }
            result_.values[p] = v;
        }
        for (ir::VarId v = 0; v < cfg_.vars.size(); ++v) {
            if (cfg_.vars[v].version == 0 && result_.values[v].kind == Kind::Bottom) result_.values[v] = CellValue::none();
        }
    }

    const CellValue& valueOf(const ir::Operand& o) const {
        static const CellValue none = CellValue::none();
        return o.isVar() ? result_.values[o.var] : none;
    }

    void set(ir::VarId v, CellValue value) { result_.values[v] = std::move(value); }

    bool dependsOnUnstable(ir::VarId start) const {
        std::vector<bool> seen(cfg_.vars.size(), false);
        std::vector<ir::VarId> stack{start};
        while (!stack.empty()) {
            const ir::VarId v = stack.back();
            stack.pop_back();
            if (v == ir::kNoVar || seen[v]) continue;
            seen[v] = true;
            if (unstable_.count(v)) return true;
            if (defs_[v]) {
                for (ir::VarId u : defs_[v]->uses()) stack.push_back(u);
            }
        }
        return false;
    }

    void markUnstable() {
        std::vector<const ir::Instruction*> phis;
        std::vector<ir::BlockId> phiBlocks;
        for (ir::BlockId b : rpo_) {
            if (!header_[b]) continue;
            for (const auto& ins : cfg_.blocks[b].instrs) {
                if (ins.op != Opcode::Phi) continue;
                CellValue v;
                for (const auto& in : ins.incoming) v = join(v, result_.values[in.var]);
                if (!(v == result_.values[ins.dests[0]])) unstable_.insert(ins.dests[0]);
                phis.push_back(&ins);
                phiBlocks.push_back(b);
            }
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < phis.size(); ++i) {
                const auto* phi = phis[i];
                if (unstable_.count(phi->dests[0])) continue;
                for (const auto& in : phi->incoming) {
                    if (rpoIndex_[in.pred] < rpoIndex_[phiBlocks[i]]) continue;
                    if (dependsOnUnstable(in.var)) {
                        unstable_.insert(phi->dests[0]);
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    Width widthFrom(const ir::Instruction& ins, const CellOp& op) const {
        if (op.width >= 0) return Width::exact(op.width);
        if (op.widthArg >= 0 && static_cast<std::size_t>(op.widthArg) < ins.args.size()) {
            auto w = ce_.value(ins.args[static_cast<std::size_t>(op.widthArg)]);
            if (w && *w >= 0 && *w <= 1023) return Width::exact(static_cast<int>(*w));
            return Width::unknown();
        }
        return defaultWidth(op.field);
    }

    void visit(ir::BlockId bid) {
        ++result_.visits;
        const auto& block = cfg_.blocks[bid];
        for (const auto& ins : block.instrs) {
            switch (ins.op) {
                case Opcode::Phi: {
                    CellValue v;
                    for (const auto& in : ins.incoming) v = join(v, result_.values[in.var]);
                    if (unstable_.count(ins.dests[0]) && v.kind != Kind::None) {
                        v.layout = LayoutSet::topValue();
                        if (v.kind == Kind::Slice) v.source = LayoutSet::topValue();
                    }
                    set(ins.dests[0], std::move(v));
                    break;
                }
                case Opcode::Assign:
                    if (ins.dests.size() != 1) {
                        for (ir::VarId d : ins.dests) set(d, CellValue::none());
                    } else if (ins.name.empty() && ins.args.size() == 1) {
                        set(ins.dests[0], valueOf(ins.args[0]));
                    } else if (ins.name == "select" && ins.args.size() == 3) {
                        set(ins.dests[0], join(valueOf(ins.args[1]), valueOf(ins.args[2])));
                    } else {
                        set(ins.dests[0], CellValue::none());
                    }
                    break;
                case Opcode::Call:
                    transferCall(ins);
                    break;
                case Opcode::GlobRead:
                    set(ins.dests[0], CellValue::none());
                    break;
                default:
                    break;
            }
        }
    }

    void transferCall(const ir::Instruction& ins) {
        auto setDests = [&](std::size_t from) {
            for (std::size_t i = from; i < ins.dests.size(); ++i) set(ins.dests[i], CellValue::none());
        };
        const int callee = program_.indexOf(ins.name);
        if (callee >= 0) {
            if (summaries_ && !ins.dests.empty()) {
                const auto& s = (*summaries_)[static_cast<std::size_t>(callee)];
                switch (s.kind) {
                    case HelperSummary::Kind::AppendBuilder: {
                        const CellValue& recv = ins.args.empty() ? CellValue{} : valueOf(ins.args[0]);
                        if (recv.kind == Kind::Builder) {
                            set(ins.dests[0], builderOf(recv.layout.concat(s.layout), recv.relative));
                        } else {
                            set(ins.dests[0], builderOf(LayoutSet::topValue()));
                        }
                        setDests(1);
                        return;
                    }
                    case HelperSummary::Kind::ReturnBuilder:
                        set(ins.dests[0], builderOf(s.layout));
                        setDests(1);
                        return;
                    case HelperSummary::Kind::ReturnCell:
                        set(ins.dests[0], cellOf(s.layout));
                        setDests(1);
                        return;
                    case HelperSummary::Kind::None:
                        break;
                }
            }
            setDests(0);
            return;
        }
        const analysis::BuiltinInfo* info = program_.catalog->find(ins.name);
        if (!info || info->cellOp.kind == CellOp::Kind::None) {
            setDests(0);
            return;
        }
        const CellOp& op = info->cellOp;
        const CellValue& recv = ins.args.empty() ? CellValue::none() : valueOf(ins.args[0]);
        switch (op.kind) {
            case CellOp::Kind::NewBuilder:
                if (!ins.dests.empty()) set(ins.dests[0], builderOf(LayoutSet::single({})));
                setDests(1);
                break;
            case CellOp::Kind::Store:
            case CellOp::Kind::StoreBuilder: {
                if (ins.dests.empty()) break;
                CellValue next = recv.kind == Kind::Builder ? recv : builderOf(LayoutSet::topValue());
                if (op.kind == CellOp::Kind::Store) {
                    CellField f;
                    f.kind = op.field;
                    f.width = widthFrom(ins, op);
                    f.origin = ins.span;
                    if (op.valueArg >= 0 && static_cast<std::size_t>(op.valueArg) < ins.args.size()) {
                        const auto& val = ins.args[static_cast<std::size_t>(op.valueArg)];
                        f.constValue = ce_.value(val);
                        if (val.isVar()) f.valueVar = val.var;
                    }
                    next.layout = next.layout.append(f);
                } else {
                    const CellValue& other = ins.args.size() > 1 ? valueOf(ins.args[1]) : CellValue::none();
                    next.layout = other.kind == Kind::Builder && !other.relative ? next.layout.concat(other.layout)
                                                                                 : LayoutSet::topValue();
                }
                set(ins.dests[0], std::move(next));
                setDests(1);
                break;
            }
            case CellOp::Kind::EndCell:
                if (ins.dests.empty()) break;
                if (recv.kind == Kind::Builder) {
                    set(ins.dests[0], cellOf(recv.layout, false, recv.relative));
                } else {
                    set(ins.dests[0], cellOf(LayoutSet::topValue()));
                }
                setDests(1);
                break;
            case CellOp::Kind::BeginParse: {
                if (ins.dests.empty()) break;
                CellValue s = sliceOf(LayoutSet::single({}), recv.kind == Kind::Cell && !recv.relative
                                                                 ? recv.layout
                                                                 : LayoutSet::topValue());
                s.fromStorage = recv.kind == Kind::Cell && recv.fromStorage;
                s.roots = {ins.dests[0]};
                set(ins.dests[0], std::move(s));
                setDests(1);
                break;
            }
            case CellOp::Kind::Load:
            case CellOp::Kind::Skip: {
                if (ins.dests.empty()) break;
                CellValue next = recv.kind == Kind::Slice ? recv : sliceOf(LayoutSet::topValue(), LayoutSet::topValue());
                CellField f;
                f.kind = op.field;
                f.width = widthFrom(ins, op);
                f.origin = ins.span;
                if (op.kind == CellOp::Kind::Load && ins.dests.size() > 1) f.valueVar = ins.dests[1];
                next.layout = next.layout.append(f);
                set(ins.dests[0], std::move(next));
                setDests(1);
                break;
            }
            case CellOp::Kind::ReadStorage:
                if (!ins.dests.empty()) set(ins.dests[0], cellOf(LayoutSet::topValue(), true));
                setDests(1);
                break;
            default:
                setDests(0);
                break;
        }
    }

    // Side tables, from the final values.
    void collect() {
        std::map<ir::VarId, std::size_t> chainIndex;
        for (ir::VarId v = 0; v < cfg_.vars.size(); ++v) {
            const auto& val = result_.values[v];
            if (val.kind == Kind::Slice && val.roots.size() == 1 && *val.roots.begin() == v) {
                ParseChain c;
                c.root = v;
                c.fromStorage = val.fromStorage;
                chainIndex[v] = result_.chains.size();
                result_.chains.push_back(c);
            }
        }
        auto chainsOf = [&](const ir::Operand& o) {
            std::vector<ParseChain*> out;
            if (!o.isVar()) return out;
            const auto& val = result_.values[o.var];
            if (val.kind != Kind::Slice) return out;
            for (ir::VarId r : val.roots) {
                auto it = chainIndex.find(r);
                if (it != chainIndex.end()) out.push_back(&result_.chains[it->second]);
            }
            return out;
        };
        auto escape = [&](const ir::Operand& o) {
            for (auto* c : chainsOf(o)) c->escaped = true;
        };
        for (ir::VarId v = 0; v < cfg_.vars.size(); ++v) {
            const auto& val = result_.values[v];
            if (val.kind != Kind::Slice || !val.layout.top) continue;
            for (ir::VarId r : val.roots) {
                auto it = chainIndex.find(r);
                if (it != chainIndex.end()) result_.chains[it->second].widened = true;
            }
        }
        for (const auto& b : cfg_.blocks) {
            for (std::size_t i = 0; i < b.instrs.size(); ++i) {
                const auto& ins = b.instrs[i];
                if (ins.op == Opcode::Return || ins.op == Opcode::SetGlob) {
                    for (const auto& a : ins.args) escape(a);
                    continue;
                }
                if (ins.op == Opcode::Assign && (ins.name == "tuple" || ins.name == "pack")) {
                    for (const auto& a : ins.args) escape(a);
                    continue;
                }
                if (ins.op != Opcode::Call) continue;
                const analysis::BuiltinInfo* info =
                    program_.indexOf(ins.name) >= 0 ? nullptr : program_.catalog->find(ins.name);
                if (!info) {
                    for (const auto& a : ins.args) escape(a);
                    continue;
                }
                const CellOp& op = info->cellOp;
                switch (op.kind) {
                    case CellOp::Kind::BeginParse:
                        if (!ins.dests.empty()) {
                            auto it = chainIndex.find(ins.dests[0]);
                            if (it != chainIndex.end()) result_.chains[it->second].span = ins.span;
                        }
                        break;
                    case CellOp::Kind::Load:
                    case CellOp::Kind::Skip:
                        if (!ins.args.empty() && !ins.dests.empty()) {
                            const auto& after = result_.values[ins.dests[0]];
                            for (auto* c : chainsOf(ins.args[0])) {
                                ParseChain::Load load;
                                if (!after.layout.top && !after.layout.alts.empty() &&
                                    !after.layout.alts.front().empty()) {
                                    load.field = after.layout.alts.front().back();
                                } else {
                                    load.field.kind = op.field;
                                    load.field.origin = ins.span;
                                }
                                load.block = b.id;
                                load.instr = i;
                                c->loads.push_back(load);
                            }
                        }
                        break;
                    case CellOp::Kind::EndParse:
                        if (!ins.args.empty()) {
                            for (auto* c : chainsOf(ins.args[0])) c->endParses.push_back({b.id, i});
                        }
                        break;
                    case CellOp::Kind::Store:
                        if (op.valueArg >= 0 && static_cast<std::size_t>(op.valueArg) < ins.args.size()) {
                            escape(ins.args[static_cast<std::size_t>(op.valueArg)]);
                        }
                        break;
                    case CellOp::Kind::WriteStorage:
                        if (!ins.args.empty()) {
                            const auto& val = valueOf(ins.args[0]);
                            result_.storageWrites.push_back(
                                {ins.span, ins.args[0].isVar() ? ins.args[0].var : ir::kNoVar,
                                 val.kind == Kind::Cell && !val.relative ? val.layout : LayoutSet::topValue()});
                        }
                        break;
                    case CellOp::Kind::SendMessage:
                        if (!ins.args.empty()) {
                            const auto& val = valueOf(ins.args[0]);
                            result_.sends.push_back(
                                {ins.span, ins.args[0].isVar() ? ins.args[0].var : ir::kNoVar,
                                 val.kind == Kind::Cell && !val.relative ? val.layout : LayoutSet::topValue(), b.id,
                                 i});
                        }
                        break;
                    default:
                        break;
                }
            }
        }
    }

    const analysis::Program& program_;
    const ir::Cfg& cfg_;
    const std::vector<HelperSummary>* summaries_;
    analysis::ConstEval ce_;
    CellAnalysis result_;
    std::vector<std::size_t> rpoIndex_;
    std::vector<bool> header_;
    std::vector<ir::BlockId> rpo_;
    std::vector<const ir::Instruction*> defs_;
    std::set<ir::VarId> unstable_;
};

}  // namespace

CellAnalysis analyzeCells(const analysis::Program& program, std::size_t function,
                          const std::vector<HelperSummary>* summaries) {
    return Analyzer(program, function, summaries).run();
}

std::vector<HelperSummary> helperSummaries(const analysis::Program& program) {
    std::vector<HelperSummary> out(program.cfgs.size());
    for (std::size_t f = 0; f < program.cfgs.size(); ++f) {
        const auto cells = analyzeCells(program, f, nullptr);
        HelperSummary s;
        bool first = true;
        for (const auto& b : program.cfgs[f].blocks) {
            const auto* t = b.terminator();
            if (!t || t->op != Opcode::Return) continue;
            HelperSummary here;
            if (t->args.size() == 1 && t->args[0].isVar()) {
                const auto& v = cells.values[t->args[0].var];
                if (v.kind == Kind::Builder) {
                    here.kind = v.relative ? HelperSummary::Kind::AppendBuilder : HelperSummary::Kind::ReturnBuilder;
                    here.layout = v.layout;
                } else if (v.kind == Kind::Cell && !v.relative && !v.fromStorage) {
                    here.kind = HelperSummary::Kind::ReturnCell;
                    here.layout = v.layout;
                }
            }
            if (first) {
                s = here;
                first = false;
            } else if (s.kind != here.kind) {
                s = HelperSummary{};
            } else {
                s.layout = join(s.layout, here.layout);
            }
        }
        out[f] = s;
    }
    return out;
}

std::vector<CellAnalysis> analyzeProgramCells(const analysis::Program& program) {
    const auto summaries = helperSummaries(program);
    std::vector<CellAnalysis> out;
    out.reserve(program.cfgs.size());
    for (std::size_t f = 0; f < program.cfgs.size(); ++f) out.push_back(analyzeCells(program, f, &summaries));
    return out;
}

std::vector<EndParseStatus> endParseStatus(const ir::Cfg& cfg, CellAnalysis& cells) {
    constexpr std::uint8_t kNotCreated = 1, kOpen = 2, kClosed = 4;
    std::vector<EndParseStatus> out;
    for (const auto& chain : cells.chains) {
        if (chain.loads.empty()) continue;
        EndParseStatus st;
        st.root = chain.root;
        if (chain.escaped) {
            st.kind = EndParseStatus::Kind::Escaped;
            out.push_back(st);
            continue;
        }
        if (chain.widened) {
            st.kind = EndParseStatus::Kind::Unknown;
            out.push_back(st);
            continue;
        }
        auto inChain = [&](const ir::Operand& o) {
            return o.isVar() && cells.values[o.var].kind == Kind::Slice && cells.values[o.var].roots.count(chain.root);
        };
        auto isEndParse = [&](ir::BlockId b, std::size_t i) {
            return std::any_of(chain.endParses.begin(), chain.endParses.end(),
                               [&](const ParseChain::Site& s) { return s.block == b && s.instr == i; });
        };
        auto isLoad = [&](ir::BlockId b, std::size_t i) {
            return std::any_of(chain.loads.begin(), chain.loads.end(),
                               [&](const ParseChain::Load& l) { return l.block == b && l.instr == i; });
        };
        const std::size_t n = cfg.blocks.size();
        std::vector<std::uint8_t> in(n, 0), out_(n, 0);
        in[cfg.entry] = kNotCreated;
        const auto rpo = ir::reversePostorder(cfg);
        bool open = false;
        bool changed = true;
        while (changed) {
            changed = false;
            for (ir::BlockId b : rpo) {
                std::uint8_t s = b == cfg.entry ? kNotCreated : 0;
                for (ir::BlockId p : cfg.blocks[b].preds) s |= out_[p];
                in[b] = s;
                const auto& instrs = cfg.blocks[b].instrs;
                for (std::size_t i = 0; i < instrs.size(); ++i) {
                    const auto& ins = instrs[i];
                    if (std::find(ins.dests.begin(), ins.dests.end(), chain.root) != ins.dests.end()) s = kOpen;
                    if (isEndParse(b, i)) s = kClosed;
                    if (isLoad(b, i) && (s & kClosed) && !ins.args.empty() && inChain(ins.args[0])) {
                        const std::string msg = "load after end_parse at " + std::to_string(ins.span.startLine) +
                                                ":" + std::to_string(ins.span.startCol);
                        if (std::find(cells.errors.begin(), cells.errors.end(), msg) == cells.errors.end()) {
                            cells.errors.push_back(msg);
                        }
                    }
                }
                if (s != out_[b]) {
                    out_[b] = s;
                    changed = true;
                }
            }
        }
        for (const auto& b : cfg.blocks) {
            const auto* t = b.terminator();
            if (t && t->op == Opcode::Return && (out_[b.id] & kOpen)) open = true;
        }
        if (open) {
            st.kind = EndParseStatus::Kind::NotValidated;
            const auto last = std::max_element(chain.loads.begin(), chain.loads.end(),
                                               [](const ParseChain::Load& a, const ParseChain::Load& b) {
                                                   return a.field.origin.byteOffset < b.field.origin.byteOffset;
                                               });
            st.lastLoad = last->field.origin;
        }
        out.push_back(st);
    }
    return out;
}

}  // namespace tonscan::cells
