#include <algorithm>

#include "tonscan/detectors/detectors.hpp"

namespace tonscan::detectors {

AnalysisContext buildContext(const analysis::Program& program) {
    AnalysisContext ctx;
    ctx.program = &program;
    ctx.graph = analysis::buildCallGraph(program);
    ctx.effects = analysis::transitiveEffects(program, ctx.graph);
    ctx.taint = analysis::runTaint(program);
    ctx.cells = cells::analyzeProgramCells(program);
    for (const auto& cfg : program.cfgs) {
        ctx.deps.push_back(analysis::buildDataDep(cfg));
        std::vector<std::size_t> uses(cfg.vars.size(), 0);
        for (const auto& b : cfg.blocks) {
            for (const auto& ins : b.instrs) {
                for (ir::VarId v : ins.uses()) ++uses[v];
            }
        }
        ctx.useCounts.push_back(std::move(uses));
    }
    return ctx;
}

std::vector<Finding> runDetector(AnalysisContext& ctx, DetectorId id) {
    switch (id) {
        case DetectorId::BR:
            return detectBR(ctx);
        case DetectorId::PL:
            return detectPL(ctx);
        case DetectorId::UR:
            return detectUR(ctx);
        case DetectorId::GVR:
            return detectGVR(ctx);
        case DetectorId::IFM:
            return detectIFM(ctx);
        case DetectorId::UBM:
            return detectUBM(ctx);
        case DetectorId::ID:
            return detectID(ctx);
        case DetectorId::LEP:
            return detectLEP(ctx);
    }
    return {};
}

std::vector<Finding> runDetectors(AnalysisContext& ctx, DetectorSet enabledSet, std::optional<frontend::FileId> file) {
    std::vector<Finding> out;
    for (DetectorId id : kAllDetectors) {
        if (!enabled(enabledSet, id)) continue;
        for (auto& f : runDetector(ctx, id)) {
            if (file && f.span.file != *file) continue;
            const bool dup = std::any_of(out.begin(), out.end(), [&](const Finding& g) {
                return g.detector == f.detector && g.span == f.span;
            });
            if (!dup) out.push_back(std::move(f));
        }
    }
    std::sort(out.begin(), out.end(), findingLess);
    return out;
}

}  // namespace tonscan::detectors
