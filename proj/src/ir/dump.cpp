#include "tonscan/ir/dump.hpp"

#include <sstream>

namespace tonscan::ir {
namespace {

std::string operand(const Cfg& cfg, const Operand& o) {
    switch (o.kind) {
        case Operand::Kind::Var:
            return cfg.var(o.var).name();
        case Operand::Kind::Int:
            return o.value && o.text.find('"') != std::string::npos ? std::to_string(*o.value) : o.text;
        case Operand::Kind::Str:
            return o.text;
    }
    return {};
}

std::string list(const Cfg& cfg, const std::vector<Operand>& ops) {
    std::string out;
    for (std::size_t i = 0; i < ops.size(); ++i) out += (i ? ", " : "") + operand(cfg, ops[i]);
    return out;
}

std::string dests(const Cfg& cfg, const std::vector<VarId>& ds) {
    if (ds.size() == 1) return cfg.var(ds[0]).name();
    std::string out = "(";
    for (std::size_t i = 0; i < ds.size(); ++i) out += (i ? ", " : "") + cfg.var(ds[i]).name();
    return out + ")";
}

template <typename T>
std::string ids(const std::vector<T>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
    return out + "]";
}

}  // namespace

std::string dumpInstruction(const Cfg& cfg, const Instruction& ins) {
    std::string s;
    switch (ins.op) {
        case Opcode::Assign:
            s = dests(cfg, ins.dests) + " := " + (ins.name.empty() ? list(cfg, ins.args) : ins.name + "(" + list(cfg, ins.args) + ")");
            break;
        case Opcode::Call:
            s = (ins.dests.empty() ? std::string() : dests(cfg, ins.dests) + " := ") + "call " +
                (ins.modifying ? "~" : "") + ins.name + "(" + list(cfg, ins.args) + ")";
            break;
        case Opcode::GlobRead:
            s = dests(cfg, ins.dests) + " := glob " + ins.name;
            break;
        case Opcode::SetGlob:
            s = "setglob " + ins.name + ", " + list(cfg, ins.args);
            break;
        case Opcode::Branch:
            s = std::string(ins.negated ? "branchnot " : "branch ") + list(cfg, ins.args) + " -> bb" +
                std::to_string(ins.targets[0]) + ", bb" + std::to_string(ins.targets[1]);
            break;
        case Opcode::Jump:
            s = "jump bb" + std::to_string(ins.targets[0]);
            break;
        case Opcode::Return:
            s = "return (" + list(cfg, ins.args) + ")";
            break;
        case Opcode::Phi: {
            s = dests(cfg, ins.dests) + " := phi(";
            for (std::size_t i = 0; i < ins.incoming.size(); ++i) {
                s += (i ? ", bb" : "bb") + std::to_string(ins.incoming[i].pred) + ": " +
                     cfg.var(ins.incoming[i].var).name();
            }
            s += ")";
            break;
        }
        case Opcode::Nop:
            s = "nop";
            break;
    }
    return s + " @" + std::to_string(ins.span.startLine) + ":" + std::to_string(ins.span.startCol);
}

std::string dump(const Cfg& cfg) {
    std::ostringstream out;
    out << "function " << cfg.function << (cfg.isSsa ? " (ssa)" : "") << "\n";
    for (const auto& b : cfg.blocks) {
        out << "\nbb" << b.id << ": preds=" << ids(b.preds) << " succs=" << ids(b.succs) << "\n";
        for (const auto& ins : b.instrs) out << "  " << dumpInstruction(cfg, ins) << "\n";
    }
    return out.str();
}

}  // namespace tonscan::ir
