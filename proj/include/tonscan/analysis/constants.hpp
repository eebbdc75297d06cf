#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tonscan/ir/cfg.hpp"
#include "tonscan/ir/ssa.hpp"

namespace tonscan::analysis {

/// Local constant folding over an SSA CFG: a value is constant when its
/// definition chain bottoms out in literals through pure operators, copies
/// and phis whose inputs all agree.
class ConstEval {
public:
    explicit ConstEval(const ir::Cfg& cfg);

    std::optional<std::int64_t> value(const ir::Operand& o) const;
    std::optional<std::int64_t> value(ir::VarId v) const;

    /// Defining instruction, or nullptr for version-0 variables.
    const ir::Instruction* def(ir::VarId v) const;
    const ir::DefSite& site(ir::VarId v) const { return sites_[v]; }
    /// Follows plain copies (`x := y`) back to the first non-copy variable.
    ir::VarId root(ir::VarId v) const;

private:
    std::optional<std::int64_t> compute(ir::VarId v) const;

    const ir::Cfg& cfg_;
    std::vector<ir::DefSite> sites_;
    enum class State : std::uint8_t { Unknown, Busy, Done };
    mutable std::vector<State> state_;
    mutable std::vector<std::optional<std::int64_t>> memo_;
};

/// Pure integer operator as used by Assign instructions; nullopt on
/// overflow, division by zero or an unknown operator.
std::optional<std::int64_t> foldOperator(const std::string& op, const std::vector<std::int64_t>& args);

/// Operators without side effects that Assign may carry.
bool isPureOperator(const std::string& op);
bool isComparison(const std::string& op);

}  // namespace tonscan::analysis
