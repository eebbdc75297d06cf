#pragma once

#include <optional>
#include <set>
#include <vector>

#include "tonscan/analysis/callgraph.hpp"
#include "tonscan/analysis/datadep.hpp"
#include "tonscan/analysis/program.hpp"
#include "tonscan/analysis/taint.hpp"
#include "tonscan/cells/cells.hpp"
#include "tonscan/detectors/finding.hpp"

namespace tonscan::detectors {

/// Every analysis result the detectors read, computed once per program.
struct AnalysisContext {
    const analysis::Program* program = nullptr;
    analysis::CallGraph graph;
    std::vector<analysis::EffectSet> effects;
    std::vector<analysis::TaintState> taint;
    std::vector<cells::CellAnalysis> cells;
    std::vector<analysis::DataDepTree> deps;
    /// Number of uses of each variable, per function.
    std::vector<std::vector<std::size_t>> useCounts;

    const ir::Cfg& cfg(std::size_t f) const { return program->cfgs[f]; }
    const std::string& name(std::size_t f) const { return program->cfgs[f].function; }
};

AnalysisContext buildContext(const analysis::Program& program);

std::vector<Finding> detectBR(const AnalysisContext& ctx);
std::vector<Finding> detectPL(const AnalysisContext& ctx);
std::vector<Finding> detectUR(const AnalysisContext& ctx);
std::vector<Finding> detectGVR(const AnalysisContext& ctx);
std::vector<Finding> detectIFM(const AnalysisContext& ctx);
std::vector<Finding> detectUBM(const AnalysisContext& ctx);
std::vector<Finding> detectID(const AnalysisContext& ctx);
std::vector<Finding> detectLEP(AnalysisContext& ctx);

std::vector<Finding> runDetector(AnalysisContext& ctx, DetectorId id);

/// Findings of the enabled detectors, restricted to `file` when given,
/// deduplicated by (detector, span) and sorted.
std::vector<Finding> runDetectors(AnalysisContext& ctx, DetectorSet enabled,
                                  std::optional<frontend::FileId> file = std::nullopt);

/// Constant 32-bit message ops a bounced-message handler distinguishes:
/// after the bounced check, the load following the 32-bit marker is the op,
/// and every constant it is compared with counts as handled.
std::set<std::int64_t> handledBouncedOps(const AnalysisContext& ctx);

/// Constant op of an outgoing message layout: the first 32-bit field of a
/// referenced body cell, else the first constant 32-bit uint after the coins
/// field. UBM additionally resolves an op that is a parameter of the sending
/// function through the constant arguments at its call sites.
std::optional<std::int64_t> sentOp(const AnalysisContext& ctx, std::size_t function, const cells::Layout& message);

/// Bounceable flag of a message whose first field is a constant header;
/// nullopt when the header is not a known constant.
std::optional<bool> headerBounceable(const cells::Layout& message);

}  // namespace tonscan::detectors
