#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tonscan/frontend/ast.hpp"
#include "tonscan/frontend/source.hpp"

namespace tonscan::ir {

using frontend::Span;
using VarId = std::uint32_t;
using BlockId = std::uint32_t;

inline constexpr VarId kNoVar = UINT32_MAX;

enum class VarRole : std::uint8_t {
    Local,       // named variable declared or assigned in the body
    Param,       // function parameter
    Temp,        // compiler-introduced intermediate value
    Underscore,  // `_` binder; every occurrence is a fresh variable
};

struct Variable {
    std::string base;
    int version = -1;  // -1 before SSA; 0 = parameter or undefined on entry
    VarRole role = VarRole::Local;
    frontend::TypeExpr declType = frontend::TypeExpr::inferred();
    Span declSpan;             // where the name was declared, if it was
    bool declared = false;     // introduced by a declaration (`int x`, `var x`) or a parameter
    bool undefinedUse = false; // SSA version 0 of a local that is read before any definition

    std::string name() const { return version < 0 ? base : base + "_" + std::to_string(version); }
};

struct Operand {
    enum class Kind : std::uint8_t { Var, Int, Str };
    Kind kind = Kind::Int;
    VarId var = kNoVar;
    std::optional<std::int64_t> value;  // Int that fits in 64 bits; crc32 of `"..."c`
    std::string text;                   // literal text as written

    static Operand ofVar(VarId v) { return Operand{Kind::Var, v, std::nullopt, {}}; }
    static Operand ofInt(std::optional<std::int64_t> v, std::string t) {
        return Operand{Kind::Int, kNoVar, v, std::move(t)};
    }
    static Operand ofStr(std::string t) { return Operand{Kind::Str, kNoVar, std::nullopt, std::move(t)}; }

    bool isVar() const { return kind == Kind::Var; }
    bool isConst() const { return kind == Kind::Int && value.has_value(); }
    friend bool operator==(const Operand&, const Operand&) = default;
};

enum class Opcode : std::uint8_t { Assign, Call, GlobRead, SetGlob, Branch, Jump, Return, Phi, Nop };

struct PhiIncoming {
    BlockId pred = 0;
    VarId var = kNoVar;
};

/// Three-address instruction.
///
/// Assign: dests[0] := name(args). `name` is an operator (`+`, `==`, ...),
///   empty for a plain copy, "select" for `c ? a : b`, "pack"/"unpack" for
///   tensor (re)grouping (unpack has several dests), "tuple"/"untuple".
/// Call: dests := name(args). dests mirror the callee's whole return tensor;
///   for a modifying call `x~f(a)` dests[0] is the new value of x and
///   args[0] the old one.
/// GlobRead: dests[0] := global `name`. SetGlob: global `name` := args[0].
/// Branch: on args[0]; control goes to targets[0] when (value != 0) differs
///   from `negated`, else to targets[1].
/// Jump: to targets[0]. Return: args are the returned values.
/// Phi: dests[0] := phi(incoming).
struct Instruction {
    Opcode op = Opcode::Nop;
    Span span;      // the expression this instruction came from
    Span stmtSpan;  // the enclosing statement
    std::vector<VarId> dests;
    std::vector<Span> destSpans;  // source of each dest binder; invalid for temporaries
    std::string name;
    std::vector<Operand> args;
    bool modifying = false;
    bool negated = false;
    std::vector<BlockId> targets;
    std::vector<PhiIncoming> incoming;

    bool isTerminator() const { return op == Opcode::Branch || op == Opcode::Jump || op == Opcode::Return; }
    /// Every variable read, including phi operands.
    std::vector<VarId> uses() const;
};

struct BasicBlock {
    BlockId id = 0;
    std::vector<Instruction> instrs;
    std::vector<BlockId> succs;
    std::vector<BlockId> preds;

    const Instruction* terminator() const {
        return !instrs.empty() && instrs.back().isTerminator() ? &instrs.back() : nullptr;
    }
};

struct Cfg {
    std::string function;
    BlockId entry = 0;
    std::vector<BasicBlock> blocks;
    std::vector<Variable> vars;
    std::vector<VarId> params;  // in declaration order
    bool isSsa = false;
    Span span;  // of the whole function

    const Variable& var(VarId v) const { return vars.at(v); }
    VarId addVar(Variable v) {
        vars.push_back(std::move(v));
        return static_cast<VarId>(vars.size() - 1);
    }
    /// Recomputes preds/succs from terminators.
    void linkEdges();
    /// Drops blocks unreachable from entry and renumbers the rest densely,
    /// keeping their relative order.
    void pruneUnreachable();
    std::size_t instructionCount() const;
};

}  // namespace tonscan::ir
