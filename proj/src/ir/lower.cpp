#include "tonscan/ir/lower.hpp"

#include <zlib.h>

#include <unordered_map>

#include "tonscan/frontend/parser.hpp"

namespace tonscan::ir {
namespace {

using frontend::Expr;
using frontend::ExprKind;
using frontend::FunctionDecl;
using frontend::SourceUnit;
using frontend::Stmt;
using frontend::StmtKind;

std::optional<std::int64_t> evalConstDepth(const Expr& e, const SourceUnit& unit, int depth) {
    if (depth > 32) return std::nullopt;
    switch (e.kind) {
        case ExprKind::IntLit:
            return e.intValue;
        case ExprKind::StrLit:
            if (e.text.size() >= 2 && e.text.back() == 'c') return crc32Literal(e.text);
            return std::nullopt;
        case ExprKind::Ident:
            if (const auto* c = unit.findConst(e.text)) return evalConstDepth(c->value, unit, depth + 1);
            return std::nullopt;
        case ExprKind::Call:
            if (!e.children.empty()) return std::nullopt;
            if (const auto* fn = unit.findFunction(e.text)) return frontend::asmConstant(*fn);
            return std::nullopt;
        case ExprKind::Unary: {
            auto v = evalConstDepth(e.children[0], unit, depth + 1);
            if (!v) return std::nullopt;
            return e.text == "-" ? -*v : ~*v;
        }
        case ExprKind::Binary: {
            auto a = evalConstDepth(e.children[0], unit, depth + 1);
            auto b = evalConstDepth(e.children[1], unit, depth + 1);
            if (!a || !b) return std::nullopt;
            const std::string& op = e.text;
            if (op == "+") return *a + *b;
            if (op == "-") return *a - *b;
            if (op == "*") return *a * *b;
            if (op == "&") return *a & *b;
            if (op == "|") return *a | *b;
            if (op == "^") return *a ^ *b;
            if ((op == "<<" || op == ">>") && *b >= 0 && *b < 63) return op == "<<" ? *a << *b : *a >> *b;
            if (op == "/" && *b != 0) {
                // FunC division rounds toward negative infinity
                std::int64_t q = *a / *b;
                if ((*a % *b != 0) && ((*a < 0) != (*b < 0))) --q;
                return q;
            }
            return std::nullopt;
        }
        default:
            return std::nullopt;
    }
}

// One assignment target after flattening a pattern.
struct Leaf {
    enum class Kind { Local, Global, Discard, Tuple } kind = Kind::Discard;
    VarId var = kNoVar;          // Local / Discard
    std::string global;          // Global
    const Expr* pattern = nullptr;  // Tuple sub-pattern
    Span span;
};

class Lowerer {
public:
    Lowerer(const FunctionDecl& fn, const LowerContext& ctx) : fn_(fn), ctx_(ctx) {}

    Cfg run() {
        cfg_.function = fn_.name;
        cfg_.span = fn_.span;
        cfg_.entry = newBlock();
        cur_ = cfg_.entry;
        std::size_t index = 0;
        for (const auto& p : fn_.params) {
            Variable v;
            v.base = p.name.empty() || p.name == "_" ? "$arg" + std::to_string(index) : p.name;
            v.role = VarRole::Param;
            v.declType = p.type;
            v.declSpan = p.span;
            v.declared = true;
            const VarId id = cfg_.addVar(std::move(v));
            cfg_.params.push_back(id);
            if (!p.name.empty() && p.name != "_") locals_[p.name] = id;
            ++index;
        }
        stmtSpan_ = fn_.span;
        lowerStmts(fn_.body);
        if (!cfg_.blocks[cur_].terminator()) {
            Instruction ret;
            ret.op = Opcode::Return;
            ret.span = fn_.span;
            stmtSpan_ = fn_.span;
            emit(std::move(ret));
        }
        cfg_.pruneUnreachable();
        return std::move(cfg_);
    }

private:
    // ---- plumbing -------------------------------------------------------

    BlockId newBlock() {
        BasicBlock b;
        b.id = static_cast<BlockId>(cfg_.blocks.size());
        cfg_.blocks.push_back(std::move(b));
        return cfg_.blocks.back().id;
    }

    void emit(Instruction ins) {
        if (cfg_.blocks[cur_].terminator()) cur_ = newBlock();  // dead code after return
        ins.stmtSpan = stmtSpan_;
        if (ins.destSpans.size() < ins.dests.size()) ins.destSpans.resize(ins.dests.size());
        cfg_.blocks[cur_].instrs.push_back(std::move(ins));
    }

    void jump(BlockId to, const Span& span) {
        Instruction j;
        j.op = Opcode::Jump;
        j.span = span;
        j.targets = {to};
        emit(std::move(j));
    }

    VarId temp() {
        Variable v;
        v.base = "$t" + std::to_string(tempCount_++);
        v.role = VarRole::Temp;
        return cfg_.addVar(std::move(v));
    }

    VarId underscore(const Span& span) {
        Variable v;
        v.base = "_";
        v.role = VarRole::Underscore;
        v.declSpan = span;
        return cfg_.addVar(std::move(v));
    }

    VarId declare(const Expr& decl) {
        auto it = locals_.find(decl.text);
        if (it != locals_.end()) return it->second;  // FunC treats a redeclaration as assignment
        Variable v;
        v.base = decl.text;
        v.role = VarRole::Local;
        v.declType = decl.type;
        v.declSpan = decl.span;
        v.declared = true;
        const VarId id = cfg_.addVar(std::move(v));
        locals_[decl.text] = id;
        return id;
    }

    // ---- statements -----------------------------------------------------

    void lowerStmts(const std::vector<Stmt>& stmts) {
        for (const auto& s : stmts) lowerStmt(s);
    }

    void lowerStmt(const Stmt& s) {
        stmtSpan_ = s.span;
        switch (s.kind) {
            case StmtKind::Expr:
                value(*s.expr);
                break;
            case StmtKind::Block:
                lowerStmts(s.body);
                break;
            case StmtKind::Opaque: {
                Instruction nop;
                nop.op = Opcode::Nop;
                nop.span = s.span;
                emit(std::move(nop));
                break;
            }
            case StmtKind::Return: {
                Instruction ret;
                ret.op = Opcode::Return;
                ret.span = s.span;
                if (s.expr) ret.args = value(*s.expr);
                stmtSpan_ = s.span;
                emit(std::move(ret));
                break;
            }
            case StmtKind::If:
                lowerIf(s);
                break;
            case StmtKind::While:
                lowerWhile(s);
                break;
            case StmtKind::Repeat:
                lowerRepeat(s);
                break;
            case StmtKind::DoUntil:
                lowerDoUntil(s);
                break;
        }
    }

    Operand scalar(const Expr& e) {
        auto vals = value(e);
        if (vals.size() == 1) return vals[0];
        const VarId t = temp();
        Instruction pack;
        pack.op = Opcode::Assign;
        pack.name = "pack";
        pack.span = e.span;
        pack.dests = {t};
        pack.args = std::move(vals);
        emit(std::move(pack));
        return Operand::ofVar(t);
    }

    void branch(const Operand& cond, bool negated, BlockId a, BlockId b, const Span& span) {
        Instruction br;
        br.op = Opcode::Branch;
        br.span = span;
        br.args = {cond};
        br.negated = negated;
        br.targets = {a, b};
        emit(std::move(br));
    }

    void lowerIf(const Stmt& s) {
        const Operand cond = scalar(*s.expr);
        const BlockId thenB = newBlock();
        const BlockId elseB = s.hasElse ? newBlock() : 0;
        const Span headSpan = s.expr->span;
        stmtSpan_ = s.span;
        // the merge block is created after both arms so ids follow source order
        Instruction br;
        br.op = Opcode::Branch;
        br.span = headSpan;
        br.args = {cond};
        br.negated = s.negated;
        br.targets = {thenB, elseB};
        emit(std::move(br));
        const BlockId branchBlock = cur_;
        const std::size_t branchIndex = cfg_.blocks[cur_].instrs.size() - 1;

        cur_ = thenB;
        lowerStmts(s.body);
        const BlockId thenEnd = cur_;
        BlockId elseEnd = 0;
        if (s.hasElse) {
            cur_ = elseB;
            lowerStmts(s.elseBody);
            elseEnd = cur_;
        }
        const BlockId merge = newBlock();
        if (!s.hasElse) cfg_.blocks[branchBlock].instrs[branchIndex].targets[1] = merge;
        stmtSpan_ = s.span;
        cur_ = thenEnd;
        if (!cfg_.blocks[cur_].terminator()) jump(merge, s.span);
        if (s.hasElse) {
            cur_ = elseEnd;
            if (!cfg_.blocks[cur_].terminator()) jump(merge, s.span);
        }
        cur_ = merge;
    }

    void lowerWhile(const Stmt& s) {
        const BlockId header = newBlock();
        jump(header, s.span);
        cur_ = header;
        const Operand cond = scalar(*s.expr);
        const BlockId body = newBlock();
        stmtSpan_ = s.span;
        branch(cond, false, body, 0, s.expr->span);
        const BlockId condEnd = cur_;
        const std::size_t brIndex = cfg_.blocks[cur_].instrs.size() - 1;
        cur_ = body;
        lowerStmts(s.body);
        stmtSpan_ = s.span;
        if (!cfg_.blocks[cur_].terminator()) jump(header, s.span);
        const BlockId exit = newBlock();
        cfg_.blocks[condEnd].instrs[brIndex].targets[1] = exit;
        cur_ = exit;
    }

    void lowerRepeat(const Stmt& s) {
        const Operand count = scalar(*s.expr);
        const VarId counter = temp();
        {
            Instruction init;
            init.op = Opcode::Assign;
            init.span = s.expr->span;
            init.dests = {counter};
            init.args = {count};
            emit(std::move(init));
        }
        const BlockId header = newBlock();
        jump(header, s.span);
        cur_ = header;
        const VarId test = temp();
        {
            Instruction cmp;
            cmp.op = Opcode::Assign;
            cmp.name = ">";
            cmp.span = s.expr->span;
            cmp.dests = {test};
            cmp.args = {Operand::ofVar(counter), Operand::ofInt(0, "0")};
            emit(std::move(cmp));
        }
        const BlockId body = newBlock();
        branch(Operand::ofVar(test), false, body, 0, s.expr->span);
        const std::size_t brIndex = cfg_.blocks[header].instrs.size() - 1;
        cur_ = body;
        {
            Instruction dec;
            dec.op = Opcode::Assign;
            dec.name = "-";
            dec.span = s.expr->span;
            dec.dests = {counter};
            dec.args = {Operand::ofVar(counter), Operand::ofInt(1, "1")};
            emit(std::move(dec));
        }
        lowerStmts(s.body);
        stmtSpan_ = s.span;
        if (!cfg_.blocks[cur_].terminator()) jump(header, s.span);
        const BlockId exit = newBlock();
        cfg_.blocks[header].instrs[brIndex].targets[1] = exit;
        cur_ = exit;
    }

    void lowerDoUntil(const Stmt& s) {
        const BlockId body = newBlock();
        jump(body, s.span);
        cur_ = body;
        lowerStmts(s.body);
        stmtSpan_ = s.span;
        const Operand cond = scalar(*s.expr);
        const BlockId exit = newBlock();
        // loop again while the condition is false
        branch(cond, true, body, exit, s.expr->span);
        cur_ = exit;
    }

    // ---- expressions ----------------------------------------------------

    std::vector<Operand> value(const Expr& e) {
        switch (e.kind) {
            case ExprKind::IntLit:
                return {Operand::ofInt(e.intValue, e.text)};
            case ExprKind::StrLit:
                if (e.text.back() == 'c') return {Operand::ofInt(crc32Literal(e.text), e.text)};
                return {Operand::ofStr(e.text)};
            case ExprKind::Underscore:
                return {Operand::ofVar(underscore(e.span))};
            case ExprKind::Ident:
                return {readName(e)};
            case ExprKind::VarDecl:
                return {Operand::ofVar(declare(e))};
            case ExprKind::Unary: {
                const Operand a = scalar(e.children[0]);
                return {compute(e.text, {a}, e.span)};
            }
            case ExprKind::Binary: {
                const Operand a = scalar(e.children[0]);
                const Operand b = scalar(e.children[1]);
                return {compute(e.text, {a, b}, e.span)};
            }
            case ExprKind::Ternary: {
                const Operand c = scalar(e.children[0]);
                const Operand a = scalar(e.children[1]);
                const Operand b = scalar(e.children[2]);
                return {compute("select", {c, a, b}, e.span)};
            }
            case ExprKind::Assign:
                return lowerAssign(e);
            case ExprKind::Call:
            case ExprKind::DotCall:
            case ExprKind::TildeCall:
                return lowerCall(e, nullptr);
            case ExprKind::Tensor: {
                std::vector<Operand> out;
                for (const auto& c : e.children) {
                    auto v = value(c);
                    out.insert(out.end(), v.begin(), v.end());
                }
                return out;
            }
            case ExprKind::Tuple: {
                std::vector<Operand> items;
                for (const auto& c : e.children) items.push_back(scalar(c));
                return {compute("tuple", std::move(items), e.span)};
            }
        }
        return {};
    }

    Operand compute(const std::string& op, std::vector<Operand> args, const Span& span) {
        const VarId t = temp();
        Instruction ins;
        ins.op = Opcode::Assign;
        ins.name = op;
        ins.span = span;
        ins.dests = {t};
        ins.args = std::move(args);
        emit(std::move(ins));
        return Operand::ofVar(t);
    }

    Operand readName(const Expr& e) {
        if (auto it = locals_.find(e.text); it != locals_.end()) return Operand::ofVar(it->second);
        if (ctx_.unit) {
            if (const auto* c = ctx_.unit->findConst(e.text)) {
                if (auto v = evalConst(c->value, *ctx_.unit)) return Operand::ofInt(v, e.text);
                if (c->value.kind == ExprKind::StrLit) return Operand::ofStr(c->value.text);
                return Operand::ofInt(std::nullopt, e.text);
            }
            if (ctx_.unit->findFunction(e.text) && !ctx_.unit->findGlobal(e.text)) return Operand::ofStr(e.text);
        }
        const VarId t = temp();
        Instruction ins;
        ins.op = Opcode::GlobRead;
        ins.name = e.text;
        ins.span = e.span;
        ins.dests = {t};
        emit(std::move(ins));
        return Operand::ofVar(t);
    }

    void flatten(const Expr& pattern, std::vector<Leaf>& out) {
        switch (pattern.kind) {
            case ExprKind::Tensor:
                for (const auto& c : pattern.children) flatten(c, out);
                return;
            case ExprKind::Tuple: {
                Leaf l;
                l.kind = Leaf::Kind::Tuple;
                l.pattern = &pattern;
                l.span = pattern.span;
                out.push_back(l);
                return;
            }
            case ExprKind::VarDecl: {
                Leaf l;
                l.kind = Leaf::Kind::Local;
                l.var = declare(pattern);
                l.span = pattern.span;
                out.push_back(l);
                return;
            }
            case ExprKind::Ident: {
                Leaf l;
                l.span = pattern.span;
                if (auto it = locals_.find(pattern.text); it != locals_.end()) {
                    l.kind = Leaf::Kind::Local;
                    l.var = it->second;
                } else {
                    l.kind = Leaf::Kind::Global;
                    l.global = pattern.text;
                }
                out.push_back(l);
                return;
            }
            case ExprKind::Underscore:
            default: {
                // `_` or an expression that cannot be assigned: value discarded
                Leaf l;
                l.kind = Leaf::Kind::Discard;
                l.var = underscore(pattern.span);
                l.span = pattern.span;
                out.push_back(l);
                return;
            }
        }
    }

    // Variable that directly receives a value bound to `leaf`.
    VarId receiver(const Leaf& leaf) {
        if (leaf.kind == Leaf::Kind::Local || leaf.kind == Leaf::Kind::Discard) return leaf.var;
        return temp();
    }

    // After `dest` received a value meant for `leaf`, finish the binding.
    void complete(const Leaf& leaf, VarId dest, const Span& span) {
        if (leaf.kind == Leaf::Kind::Global) {
            Instruction set;
            set.op = Opcode::SetGlob;
            set.name = leaf.global;
            set.span = span;
            set.args = {Operand::ofVar(dest)};
            emit(std::move(set));
        } else if (leaf.kind == Leaf::Kind::Tuple) {
            std::vector<Leaf> inner;
            for (const auto& c : leaf.pattern->children) flatten(c, inner);
            std::vector<VarId> dests;
            for (const auto& l : inner) dests.push_back(receiver(l));
            Instruction un;
            un.op = Opcode::Assign;
            un.name = "untuple";
            un.span = span;
            un.dests = dests;
            for (const auto& l : inner) un.destSpans.push_back(l.kind == Leaf::Kind::Local ? l.span : Span{});
            un.args = {Operand::ofVar(dest)};
            emit(std::move(un));
            for (std::size_t i = 0; i < inner.size(); ++i) complete(inner[i], dests[i], span);
        }
    }

    void bind(const std::vector<Leaf>& leaves, std::vector<Operand> vals, const Span& span) {
        if (leaves.size() == 1 && vals.size() != 1) {
            const VarId d = receiver(leaves[0]);
            Instruction pack;
            pack.op = Opcode::Assign;
            pack.name = "pack";
            pack.span = span;
            pack.dests = {d};
            pack.destSpans = {leaves[0].span};
            pack.args = std::move(vals);
            emit(std::move(pack));
            complete(leaves[0], d, span);
            return;
        }
        if (vals.size() == 1 && leaves.size() > 1) {
            std::vector<VarId> dests;
            for (const auto& l : leaves) dests.push_back(receiver(l));
            Instruction un;
            un.op = Opcode::Assign;
            un.name = "unpack";
            un.span = span;
            un.dests = dests;
            for (const auto& l : leaves) un.destSpans.push_back(l.span);
            un.args = std::move(vals);
            emit(std::move(un));
            for (std::size_t i = 0; i < leaves.size(); ++i) complete(leaves[i], dests[i], span);
            return;
        }
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            const Operand v = i < vals.size() ? vals[i] : Operand::ofInt(std::nullopt, "?");
            if (leaves[i].kind == Leaf::Kind::Global) {
                Instruction set;
                set.op = Opcode::SetGlob;
                set.name = leaves[i].global;
                set.span = span;
                set.args = {v};
                emit(std::move(set));
                continue;
            }
            const VarId d = receiver(leaves[i]);
            Instruction copy;
            copy.op = Opcode::Assign;
            copy.span = span;
            copy.dests = {d};
            copy.destSpans = {leaves[i].span};
            copy.args = {v};
            emit(std::move(copy));
            complete(leaves[i], d, span);
        }
    }

    std::vector<Operand> lowerAssign(const Expr& e) {
        const Expr& lhs = e.children[0];
        const Expr& rhs = e.children[1];
        if (e.text != "=") {
            // compound `x op= y`
            const std::string op = e.text.substr(0, e.text.size() - 1);
            const Operand cur = scalar(lhs);
            const Operand r = scalar(rhs);
            std::vector<Leaf> leaves;
            flatten(lhs, leaves);
            if (leaves.size() == 1 && leaves[0].kind == Leaf::Kind::Local) {
                Instruction ins;
                ins.op = Opcode::Assign;
                ins.name = op;
                ins.span = e.span;
                ins.dests = {leaves[0].var};
                ins.destSpans = {leaves[0].span};
                ins.args = {cur, r};
                emit(std::move(ins));
                return {Operand::ofVar(leaves[0].var)};
            }
            const Operand result = compute(op, {cur, r}, e.span);
            bind(leaves, {result}, e.span);
            return {result};
        }
        if (rhs.isCallLike() && lhs.kind != ExprKind::Tuple) {
            std::vector<Leaf> leaves;
            flatten(lhs, leaves);
            return lowerCall(rhs, &leaves);
        }
        auto vals = value(rhs);
        std::vector<Leaf> leaves;
        flatten(lhs, leaves);
        bind(leaves, vals, e.span);
        std::vector<Operand> out;
        for (const auto& l : leaves) {
            if (l.kind == Leaf::Kind::Local) out.push_back(Operand::ofVar(l.var));
        }
        return out.size() == leaves.size() ? out : vals;
    }

    std::optional<std::size_t> arity(const std::string& name, bool tilde) const {
        if (!ctx_.returnArity) return std::nullopt;
        return ctx_.returnArity(name, tilde);
    }

    std::vector<Operand> lowerCall(const Expr& e, const std::vector<Leaf>* targets) {
        const bool tilde = e.kind == ExprKind::TildeCall;
        std::string name = e.text;
        if (tilde && ctx_.unit && ctx_.unit->findFunction("~" + name)) name = "~" + name;

        if (e.kind == ExprKind::Call && e.children.empty() && ctx_.unit) {
            if (const auto* fn = ctx_.unit->findFunction(name)) {
                if (auto v = frontend::asmConstant(*fn)) {
                    std::vector<Operand> vals{Operand::ofInt(v, name + "()")};
                    if (targets) bind(*targets, vals, e.span);
                    return vals;
                }
            }
        }

        std::vector<Operand> args;
        std::size_t firstArg = 0;
        Leaf recv;
        if (e.kind != ExprKind::Call) {
            firstArg = 1;
            const Expr& r = e.children[0];
            if (tilde) {
                std::vector<Leaf> rl;
                if (r.kind == ExprKind::Ident || r.kind == ExprKind::VarDecl) {
                    args.push_back(scalar(r));
                    flatten(r, rl);
                    recv = rl[0];
                } else {
                    args.push_back(scalar(r));
                    recv.kind = Leaf::Kind::Discard;
                    recv.var = underscore(r.span);
                    recv.span = r.span;
                }
            } else {
                auto v = value(r);
                args.insert(args.end(), v.begin(), v.end());
            }
        }
        for (std::size_t i = firstArg; i < e.children.size(); ++i) {
            auto v = value(e.children[i]);
            args.insert(args.end(), v.begin(), v.end());
        }

        const auto known = arity(name, tilde);
        Instruction call;
        call.op = Opcode::Call;
        call.name = name;
        call.span = e.span;
        call.modifying = tilde;
        call.args = std::move(args);

        const std::size_t lead = tilde ? 1 : 0;
        std::size_t valueCount;
        if (known) {
            valueCount = *known >= lead ? *known - lead : 0;
        } else {
            valueCount = targets ? targets->size() : 1;
        }
        const bool direct = targets && targets->size() == valueCount;
        std::vector<VarId> valueDests;
        for (std::size_t i = 0; i < valueCount; ++i) valueDests.push_back(direct ? receiver((*targets)[i]) : temp());

        if (tilde) {
            const VarId r = receiver(recv);
            call.dests.push_back(r);
            call.destSpans.push_back(Span{});
        }
        for (std::size_t i = 0; i < valueCount; ++i) {
            call.dests.push_back(valueDests[i]);
            call.destSpans.push_back(direct ? (*targets)[i].span : Span{});
        }
        emit(std::move(call));
        if (tilde) complete(recv, cfg_.blocks[cur_].instrs.back().dests[0], e.span);

        std::vector<Operand> vals;
        for (VarId d : valueDests) vals.push_back(Operand::ofVar(d));
        if (targets) {
            if (direct) {
                for (std::size_t i = 0; i < valueCount; ++i) complete((*targets)[i], valueDests[i], e.span);
            } else {
                bind(*targets, vals, e.span);
            }
        }
        return vals;
    }

    const FunctionDecl& fn_;
    const LowerContext& ctx_;
    Cfg cfg_;
    BlockId cur_ = 0;
    Span stmtSpan_;
    std::unordered_map<std::string, VarId> locals_;
    std::size_t tempCount_ = 0;
};

}  // namespace

std::int64_t crc32Literal(std::string_view literal) {
    const auto open = literal.find('"');
    const auto close = literal.rfind('"');
    const std::string_view body = open == std::string_view::npos || close <= open
                                      ? std::string_view{}
                                      : literal.substr(open + 1, close - open - 1);
    const uLong crc = ::crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
    return static_cast<std::int64_t>(crc);
}

std::optional<std::int64_t> evalConst(const Expr& e, const SourceUnit& unit) { return evalConstDepth(e, unit, 0); }

Cfg lower(const FunctionDecl& fn, const LowerContext& ctx) { return Lowerer(fn, ctx).run(); }

}  // namespace tonscan::ir
