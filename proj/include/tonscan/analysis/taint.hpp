#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tonscan/analysis/program.hpp"

namespace tonscan::analysis {

enum class TaintSource : std::uint8_t { LogicalTime, Randomness };
using TaintMask = std::uint8_t;
inline constexpr TaintMask maskOf(TaintSource s) { return static_cast<TaintMask>(1u << static_cast<unsigned>(s)); }
const char* taintSourceName(TaintSource s);

enum class SinkKind : std::uint8_t { Comparison, BranchCond, IndexAccess, SeedArg };
const char* sinkKindName(SinkKind k);

struct SinkHit {
    SinkKind kind = SinkKind::Comparison;
    TaintSource source = TaintSource::LogicalTime;
    ir::Span span;
    ir::BlockId block = 0;
    std::size_t instr = 0;
};

struct TaintState {
    std::vector<TaintMask> vars;  // indexed by VarId
    std::map<std::string, TaintMask> globals;
    std::vector<SinkHit> hits;    // in block/instruction order
    TaintMask returns = 0;        // union over returned values
    std::size_t passes = 0;

    bool tainted(ir::VarId v, TaintSource s) const { return (vars[v] & maskOf(s)) != 0; }
};

/// Extra taint injected before propagation; used to probe monotonicity.
struct TaintConfig {
    std::vector<std::pair<ir::VarId, TaintSource>> seeds;
};

/// Forward taint propagation over one SSA function.
///
/// Sources: results of LogicalTimeSource builtins; results of randomness
/// builtins (`rand`, `random`) reachable from a seeding call whose argument
/// carries logical time (or from `randomize_lt`). Propagation: operands to
/// Assign dests, any tainted argument to every Call dest, a callee's return
/// summary to the call's dests, globals within the function, and from a
/// tainted Branch condition to every definition in blocks dominated by
/// either branch target.
class TaintEngine {
public:
    TaintEngine(const Program& program, std::size_t function, const TaintConfig& config,
                const std::vector<TaintMask>& returnSummaries);

    /// One propagation pass; true when any mask grew.
    bool pass();
    /// Runs to a fixpoint and records sink hits.
    TaintState finish();
    const TaintState& state() const { return state_; }

private:
    void taint(ir::VarId v, TaintMask m, bool& changed);
    bool isTaintedSeed(const ir::Instruction& ins) const;
    bool afterTaintedSeed(ir::BlockId block, std::size_t index) const;
    void collectHits();

    const Program& program_;
    const ir::Cfg& cfg_;
    const ir::Dominance& dom_;
    const std::vector<TaintMask>& summaries_;
    TaintState state_;
    std::vector<ir::BlockId> order_;
    std::vector<std::vector<bool>> reach_;  // reach_[a][b]: path of length >= 1 from a to b
};

/// Taint for every function, iterating call-return summaries to a fixpoint.
std::vector<TaintState> runTaint(const Program& program);
TaintState runTaint(const Program& program, std::size_t function, const TaintConfig& config = {});

}  // namespace tonscan::analysis
