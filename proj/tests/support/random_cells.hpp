#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace tonscan::testing {

/// A field as the concrete interpreter sees it.
struct ConcreteField {
    bool isSigned = false;
    int width = 0;
    std::int64_t value = 0;
};

struct ConcreteLoad {
    bool isSigned = false;
    int width = 0;
};

/// Straight-line program: builds one cell from up to two builders, parses
/// it back in function `f`.
struct StraightCellProgram {
    std::string text;
    std::vector<ConcreteField> stored;  // concrete field trace of the cell
    std::vector<ConcreteLoad> loads;
};
StraightCellProgram randomStraightCellProgram(std::mt19937& rng);

/// Result of replaying the loads against the stored bits.
struct ConcreteReplay {
    bool ok = true;
    std::size_t badLoad = 0;  // first load that misreads or underflows
};
ConcreteReplay replayLoads(const std::vector<ConcreteField>& stored, const std::vector<ConcreteLoad>& loads);

/// Loop-free program with `if (c)` choices between stores; `set_data` of the
/// result in function `f(int c)`. `paths` lists the (signed, width) trace of
/// every path.
struct BranchyCellProgram {
    std::string text;
    std::vector<std::vector<ConcreteLoad>> paths;
};
BranchyCellProgram randomBranchyCellProgram(std::mt19937& rng, int choices);

/// Program with nested while loops storing into a builder inside `f(int n)`.
std::string randomLoopCellProgram(std::mt19937& rng);

}  // namespace tonscan::testing
