#include "tonscan/analysis/constants.hpp"

#include <set>
#include <string>

namespace tonscan::analysis {

using ir::Opcode;

bool isComparison(const std::string& op) {
    return op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=" || op == "<=>";
}

bool isPureOperator(const std::string& op) {
    static const std::set<std::string> ops = {"",   "+",  "-",  "*",  "/",   "%",   "~/",  "^/",  "~%",  "^%",
                                              "&",  "|",  "^",  "~",  "<<",  ">>",  "~>>", "^>>", "==",  "!=",
                                              "<",  ">",  "<=", ">=", "<=>", "select"};
    return ops.count(op) != 0;
}

namespace {

std::optional<std::int64_t> floorDiv(std::int64_t a, std::int64_t b) {
    if (b == 0 || (a == INT64_MIN && b == -1)) return std::nullopt;
    std::int64_t q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

std::optional<std::int64_t> cmp(bool v) { return v ? -1 : 0; }

}  // namespace

std::optional<std::int64_t> foldOperator(const std::string& op, const std::vector<std::int64_t>& v) {
    if (op.empty() && v.size() == 1) return v[0];
    if (v.size() == 1) {
        if (op == "-") return v[0] == INT64_MIN ? std::nullopt : std::optional<std::int64_t>(-v[0]);
        if (op == "~") return ~v[0];
        return std::nullopt;
    }
    if (op == "select" && v.size() == 3) return v[0] != 0 ? v[1] : v[2];
    if (v.size() != 2) return std::nullopt;
    const std::int64_t a = v[0], b = v[1];
    std::int64_t r = 0;
    if (op == "+") return __builtin_add_overflow(a, b, &r) ? std::nullopt : std::optional<std::int64_t>(r);
    if (op == "-") return __builtin_sub_overflow(a, b, &r) ? std::nullopt : std::optional<std::int64_t>(r);
    if (op == "*") return __builtin_mul_overflow(a, b, &r) ? std::nullopt : std::optional<std::int64_t>(r);
    if (op == "/") return floorDiv(a, b);
    if (op == "%") {
        auto q = floorDiv(a, b);
        if (!q) return std::nullopt;
        return a - *q * b;
    }
    if (op == "&") return a & b;
    if (op == "|") return a | b;
    if (op == "^") return a ^ b;
    if (op == "<<") {
        if (b < 0 || b >= 63) return std::nullopt;
        if (a != 0 && (a > (INT64_MAX >> b) || a < (INT64_MIN >> b))) return std::nullopt;
        return a * (std::int64_t{1} << b);
    }
    if (op == ">>") {
        if (b < 0) return std::nullopt;
        return b >= 63 ? (a < 0 ? -1 : 0) : (a >> b);
    }
    if (op == "==") return cmp(a == b);
    if (op == "!=") return cmp(a != b);
    if (op == "<") return cmp(a < b);
    if (op == ">") return cmp(a > b);
    if (op == "<=") return cmp(a <= b);
    if (op == ">=") return cmp(a >= b);
    if (op == "<=>") return a < b ? -1 : (a > b ? 1 : 0);
    return std::nullopt;
}

ConstEval::ConstEval(const ir::Cfg& cfg)
    : cfg_(cfg), sites_(ir::definitionSites(cfg)), state_(cfg.vars.size(), State::Unknown), memo_(cfg.vars.size()) {}

const ir::Instruction* ConstEval::def(ir::VarId v) const {
    const auto& s = sites_.at(v);
    if (s.index == SIZE_MAX) return nullptr;
    return &cfg_.blocks[s.block].instrs[s.index];
}

ir::VarId ConstEval::root(ir::VarId v) const {
    for (std::size_t guard = 0; guard < cfg_.vars.size(); ++guard) {
        const auto* d = def(v);
        if (!d || d->op != Opcode::Assign || !d->name.empty() || d->args.size() != 1 || !d->args[0].isVar()) break;
        v = d->args[0].var;
    }
    return v;
}

std::optional<std::int64_t> ConstEval::value(const ir::Operand& o) const {
    if (o.isVar()) return value(o.var);
    if (o.kind == ir::Operand::Kind::Int) return o.value;
    return std::nullopt;
}

std::optional<std::int64_t> ConstEval::value(ir::VarId v) const {
    if (v >= state_.size()) return std::nullopt;
    if (state_[v] == State::Done) return memo_[v];
    if (state_[v] == State::Busy) return std::nullopt;  // cycle through a phi
    state_[v] = State::Busy;
    memo_[v] = compute(v);
    state_[v] = State::Done;
    return memo_[v];
}

std::optional<std::int64_t> ConstEval::compute(ir::VarId v) const {
    const ir::Instruction* d = def(v);
    if (!d) return std::nullopt;
    if (d->op == Opcode::Assign && d->dests.size() == 1 && isPureOperator(d->name)) {
        std::vector<std::int64_t> vals;
        for (const auto& a : d->args) {
            auto x = value(a);
            if (!x) return std::nullopt;
            vals.push_back(*x);
        }
        return foldOperator(d->name, vals);
    }
    if (d->op == Opcode::Phi) {
        std::optional<std::int64_t> common;
        for (const auto& in : d->incoming) {
            if (in.var == v) continue;
            auto x = value(in.var);
            if (!x || (common && *common != *x)) return std::nullopt;
            common = x;
        }
        return common;
    }
    return std::nullopt;
}

}  // namespace tonscan::analysis
