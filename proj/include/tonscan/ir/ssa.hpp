#pragma once

#include <string>
#include <vector>

#include "tonscan/ir/cfg.hpp"
#include "tonscan/ir/dominance.hpp"

namespace tonscan::ir {

/// Converts a non-SSA CFG to pruned SSA: phis are placed on the iterated
/// dominance frontier of each variable's definitions where the variable is
/// live, then uses are renamed along the dominator tree. Parameters and
/// values read before any definition become version 0.
Cfg toSsa(const Cfg& cfg);

/// Violations of the SSA invariants (single definition, phi arity, uses
/// dominated by their definition). Empty when the CFG is well formed.
std::vector<std::string> checkSsa(const Cfg& cfg);

/// Defining (block, instruction index) per variable; version-0 variables
/// map to {entry, SIZE_MAX}.
struct DefSite {
    BlockId block = 0;
    std::size_t index = SIZE_MAX;
};
std::vector<DefSite> definitionSites(const Cfg& cfg);

}  // namespace tonscan::ir
