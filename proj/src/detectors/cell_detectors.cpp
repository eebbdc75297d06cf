#include <algorithm>
#include <set>

#include "tonscan/analysis/constants.hpp"
#include "tonscan/detectors/detectors.hpp"
#include "util.hpp"

namespace tonscan::detectors {

using cells::CellField;
using cells::FieldKind;
using cells::Layout;
using cells::Width;
using detail::hex32;
using detail::loc;
using detail::make;
using ir::Opcode;

std::optional<bool> headerBounceable(const Layout& message) {
    if (message.empty()) return std::nullopt;
    const CellField& h = message.front();
    if (h.kind != FieldKind::Uint || h.width.kind != Width::Kind::Exact || h.width.bits < 3 || !h.constValue) {
        return std::nullopt;
    }
    return ((*h.constValue >> (h.width.bits - 3)) & 1) != 0;
}

namespace {

bool isUint32(const CellField& f) {
    return f.kind == FieldKind::Uint && f.width.kind == Width::Kind::Exact && f.width.bits == 32;
}

}  // namespace

namespace {

// The field carrying the op: the first 32-bit uint of a referenced body
// cell, else the first constant 32-bit uint after the coins field, else the
// first 32-bit uint there whose value is a variable.
const CellField* opField(const AnalysisContext& ctx, std::size_t function, const Layout& message) {
    const auto coins = std::find_if(message.begin(), message.end(),
                                    [](const CellField& f) { return f.kind == FieldKind::Coins; });
    if (coins == message.end()) return nullptr;
    const auto& values = ctx.cells[function].values;
    for (auto it = coins + 1; it != message.end(); ++it) {
        if (it->kind != FieldKind::Ref || it->valueVar == ir::kNoVar) continue;
        const auto& body = values[it->valueVar];
        if (body.kind != cells::CellValue::Kind::Cell || !body.layout.isEqual() || body.layout.alts[0].empty()) continue;
        const auto& first = body.layout.alts[0].front();
        if (isUint32(first)) return &first;
    }
    for (auto it = coins + 1; it != message.end(); ++it) {
        if (isUint32(*it) && it->constValue) return &*it;
    }
    for (auto it = coins + 1; it != message.end(); ++it) {
        if (isUint32(*it) && it->valueVar != ir::kNoVar) return &*it;
    }
    return nullptr;
}

// Index of the parameter `v` is a copy of, if any.
std::optional<std::size_t> paramIndex(const ir::Cfg& cfg, ir::VarId v) {
    const ir::VarId root = analysis::ConstEval(cfg).root(v);
    const auto it = std::find(cfg.params.begin(), cfg.params.end(), root);
    if (it == cfg.params.end()) return std::nullopt;
    return static_cast<std::size_t>(it - cfg.params.begin());
}

}  // namespace

std::optional<std::int64_t> sentOp(const AnalysisContext& ctx, std::size_t function, const Layout& message) {
    const CellField* f = opField(ctx, function, message);
    if (!f) return std::nullopt;
    return f->constValue;
}

namespace {

struct OpScan {
    const AnalysisContext& ctx;
    std::set<std::int64_t> ops;

    static std::optional<int> width(const analysis::ConstEval& ce, const ir::Instruction& ins,
                                    const analysis::CellOp& op) {
        if (op.width >= 0) return op.width;
        if (op.widthArg < 0 || static_cast<std::size_t>(op.widthArg) >= ins.args.size()) return std::nullopt;
        auto w = ce.value(ins.args[static_cast<std::size_t>(op.widthArg)]);
        if (!w) return std::nullopt;
        return static_cast<int>(*w);
    }

    // Scans `blocks` of function `f` for the marker load, the op load after
    // it and the constants the op is compared with. Helpers called from the
    // region are scanned whole, one level deep.
    void scan(std::size_t f, const std::vector<ir::BlockId>& blocks, bool descend) {
        const auto& program = *ctx.program;
        const auto& cfg = program.cfgs[f];
        analysis::ConstEval ce(cfg);
        bool markerSeen = false;
        std::set<ir::VarId> opVars;
        for (ir::BlockId b : blocks) {
            for (const auto& ins : cfg.blocks[b].instrs) {
                if (ins.op != Opcode::Call) continue;
                const int callee = program.indexOf(ins.name);
                if (callee >= 0) {
                    if (descend && static_cast<std::size_t>(callee) != f) {
                        scan(static_cast<std::size_t>(callee), ir::reversePostorder(program.cfgs[callee]), false);
                    }
                    continue;
                }
                const auto* info = program.catalog->find(ins.name);
                if (!info) continue;
                const auto& op = info->cellOp;
                const bool consumes = op.kind == analysis::CellOp::Kind::Load || op.kind == analysis::CellOp::Kind::Skip;
                if (!consumes || width(ce, ins, op) != 32) continue;
                if (!markerSeen) {
                    markerSeen = true;
                } else if (opVars.empty() && op.kind == analysis::CellOp::Kind::Load && op.field == FieldKind::Uint &&
                           ins.dests.size() > 1) {
                    opVars.insert(ins.dests[1]);
                }
            }
        }
        if (opVars.empty()) return;
        for (ir::BlockId b : blocks) {
            for (const auto& ins : cfg.blocks[b].instrs) {
                if (ins.op != Opcode::Assign || (ins.name != "==" && ins.name != "!=") || ins.args.size() != 2) continue;
                for (int side = 0; side < 2; ++side) {
                    const auto& v = ins.args[static_cast<std::size_t>(side)];
                    const auto& c = ins.args[static_cast<std::size_t>(1 - side)];
                    if (!v.isVar() || !opVars.count(ce.root(v.var))) continue;
                    if (auto k = ce.value(c)) ops.insert(*k);
                }
            }
        }
    }
};

}  // namespace

std::set<std::int64_t> handledBouncedOps(const AnalysisContext& ctx) {
    const auto& program = *ctx.program;
    const int recv = program.indexOf("recv_internal");
    if (recv < 0) return {};
    const auto& cfg = program.cfgs[static_cast<std::size_t>(recv)];
    const auto check = analysis::findBouncedCheck(cfg);
    if (!check) return {};
    const auto& dom = program.dominance[static_cast<std::size_t>(recv)].tree;
    std::vector<ir::BlockId> region;
    for (ir::BlockId b : ir::reversePostorder(cfg)) {
        if (dom.dominates(check->bouncedTarget, b)) region.push_back(b);
    }
    OpScan scan{ctx, {}};
    scan.scan(static_cast<std::size_t>(recv), region, true);
    return scan.ops;
}

std::vector<Finding> detectUBM(const AnalysisContext& ctx) {
    std::vector<Finding> out;
    const auto handled = handledBouncedOps(ctx);
    std::string handledText;
    for (auto op : handled) handledText += (handledText.empty() ? "" : ", ") + hex32(op);
    if (handledText.empty()) handledText = "none";
    const bool hasRecv = ctx.program->indexOf("recv_internal") >= 0;
    auto report = [&](std::size_t f, const frontend::Span& site, std::int64_t op, const std::string& header) {
        out.push_back(make(DetectorId::UBM, ctx.name(f), site,
                           "bounceable message with op " + hex32(op) +
                               " is sent but its bounce is not handled in recv_internal",
                           header + "; handled bounced ops: " + handledText + (hasRecv ? "" : "; no recv_internal")));
    };
    const auto& program = *ctx.program;
    for (std::size_t f = 0; f < ctx.cells.size(); ++f) {
        for (const auto& send : ctx.cells[f].sends) {
            if (send.layout.top) continue;
            std::set<std::int64_t> reported;
            for (const auto& alt : send.layout.alts) {
                const auto bounceable = headerBounceable(alt);
                if (bounceable && !*bounceable) continue;
                const std::string header = bounceable ? "header " + hex32(*alt.front().constValue) + " is bounceable"
                                                      : "header not constant, assumed bounceable";
                const CellField* field = opField(ctx, f, alt);
                if (!field) continue;
                if (field->constValue) {
                    const std::int64_t op = *field->constValue;
                    if (handled.count(op) || !reported.insert(op).second) continue;
                    report(f, send.site, op, header);
                    continue;
                }
                // The op is a parameter: take the constant argument of each
                // call, reported where the op is chosen.
                const auto k = paramIndex(ctx.cfg(f), field->valueVar);
                if (!k) continue;
                for (std::size_t g = 0; g < program.cfgs.size(); ++g) {
                    const auto& cfg = program.cfgs[g];
                    analysis::ConstEval ce(cfg);
                    for (const auto& b : cfg.blocks) {
                        for (const auto& ins : b.instrs) {
                            if (ins.op != Opcode::Call || ins.name != ctx.name(f) || *k >= ins.args.size()) continue;
                            const auto op = ce.value(ins.args[*k]);
                            if (!op || handled.count(*op)) continue;
                            report(g, ins.span, *op, header + "; op passed to " + ctx.name(f) + "() at " + loc(ins.span) +
                                                         ", sent at " + loc(send.site));
                        }
                    }
                }
            }
        }
    }
    return out;
}

std::vector<Finding> detectID(const AnalysisContext& ctx) {
    struct Stored {
        Layout layout;
        frontend::Span site;
        bool possible;
    };
    std::vector<Stored> stored;
    for (const auto& c : ctx.cells) {
        for (const auto& w : c.storageWrites) {
            if (w.layout.top) continue;
            for (const auto& alt : w.layout.alts) stored.push_back({alt, w.site, w.layout.alts.size() > 1});
        }
    }
    std::vector<Finding> out;
    if (stored.empty()) return out;
    for (std::size_t f = 0; f < ctx.cells.size(); ++f) {
        const auto& cfg = ctx.cfg(f);
        const auto& cells = ctx.cells[f];
        for (const auto& chain : cells.chains) {
            if (!chain.fromStorage) continue;
            for (const auto& load : chain.loads) {
                const auto& ins = cfg.blocks[load.block].instrs[load.instr];
                if (ins.dests.empty()) continue;
                const auto& consumed = cells.values[ins.dests[0]].layout;
                if (consumed.top) continue;
                for (const auto& alt : consumed.alts) {
                    for (const auto& s : stored) {
                        const auto r = cells::layoutMatch(s.layout, alt);
                        if (r.kind == cells::MatchResult::Kind::Compatible) continue;
                        const CellField& actual = alt[r.index];
                        const std::string idx = std::to_string(r.index);
                        std::string message, evidence;
                        if (r.kind == cells::MatchResult::Kind::MismatchAt) {
                            message = "stored " + describe(*r.expected) + " but loaded " + describe(actual) +
                                      " for field #" + idx;
                            evidence = "stored " + describe(*r.expected) + ", loaded " + describe(actual);
                        } else {
                            message = "loaded " + describe(actual) + " as field #" + idx + " but only " +
                                      std::to_string(s.layout.size()) + " fields are stored";
                            evidence = "stored <end of data>, loaded " + describe(actual);
                        }
                        evidence += "; set_data at " + loc(s.site);
                        if (s.possible || consumed.alts.size() > 1) evidence += "; possible (one branch only)";
                        out.push_back(make(DetectorId::ID, ctx.name(f), actual.origin, message, evidence));
                    }
                }
            }
        }
    }
    return out;
}

std::vector<Finding> detectLEP(AnalysisContext& ctx) {
    std::vector<Finding> out;
    for (std::size_t f = 0; f < ctx.cells.size(); ++f) {
        auto& cells = ctx.cells[f];
        for (const auto& st : cells::endParseStatus(ctx.cfg(f), cells)) {
            if (st.kind != cells::EndParseStatus::Kind::NotValidated) continue;
            const auto* chain = cells.chain(st.root);
            out.push_back(make(DetectorId::LEP, ctx.name(f), st.lastLoad,
                               "slice is not checked with end_parse() after its last load",
                               "begin_parse at " + loc(chain ? chain->span : st.lastLoad)));
        }
    }
    return out;
}

}  // namespace tonscan::detectors
