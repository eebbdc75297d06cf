#pragma once

#include <string>

#include "tonscan/ir/cfg.hpp"

namespace tonscan::ir {

/// Text form used by golden tests: one paragraph per block,
/// `bb<N>: preds=[..] succs=[..]` then one instruction per line with an
/// `@line:col` suffix.
std::string dump(const Cfg& cfg);
std::string dumpInstruction(const Cfg& cfg, const Instruction& ins);

}  // namespace tonscan::ir
