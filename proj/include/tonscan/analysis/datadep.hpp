#pragma once

#include <vector>

#include "tonscan/ir/cfg.hpp"

namespace tonscan::analysis {

/// Direct operand dependencies of every SSA variable.
struct DataDepTree {
    struct Dep {
        ir::VarId var = ir::kNoVar;
        bool viaPhi = false;
    };
    std::vector<std::vector<Dep>> deps;  // indexed by VarId

    const std::vector<Dep>& direct(ir::VarId v) const { return deps[v]; }
    /// Every variable `v` is (transitively) composed of, excluding `v`
    /// unless it depends on itself through a loop. Sorted.
    std::vector<ir::VarId> closure(ir::VarId v) const;
    bool dependsOn(ir::VarId v, ir::VarId w) const;
};

/// Assign dests depend on their operands; Call dests on every argument,
/// receiver included; phi dests on every incoming value (marked viaPhi).
DataDepTree buildDataDep(const ir::Cfg& cfg);

}  // namespace tonscan::analysis
