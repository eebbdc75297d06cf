#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tonscan/analysis/program.hpp"
#include "tonscan/cells/layout.hpp"

namespace tonscan::cells {

/// Abstract value of one SSA variable.
struct CellValue {
    enum class Kind : std::uint8_t { Bottom, None, Builder, Cell, Slice };
    Kind kind = Kind::Bottom;
    /// Builder: fields stored so far. Cell: its contents. Slice: fields
    /// consumed so far.
    LayoutSet layout;
    /// Slice only: contents of the cell it was parsed from.
    LayoutSet source;
    bool fromStorage = false;  // cell from get_data, or a slice parsed from one
    bool relative = false;     // builder derived from the enclosing function's first parameter
    std::set<ir::VarId> roots; // slice only: begin_parse results it descends from

    static CellValue none() { return CellValue{Kind::None, {}, {}, false, false, {}}; }
    friend bool operator==(const CellValue&, const CellValue&) = default;
};

CellValue join(const CellValue& a, const CellValue& b);

/// A slice obtained from `begin_parse` and everything loaded from it.
struct ParseChain {
    ir::VarId root = ir::kNoVar;
    frontend::Span span;  // the begin_parse expression
    bool fromStorage = false;
    bool escaped = false;  // passed to a non-builtin, returned, stored or written to a global
    bool widened = false;  // some slice of the chain reached Top
    struct Load {
        CellField field;
        ir::BlockId block = 0;
        std::size_t instr = 0;
    };
    std::vector<Load> loads;  // consuming reads, in block/instruction order
    struct Site {
        ir::BlockId block = 0;
        std::size_t instr = 0;
    };
    std::vector<Site> endParses;
};

struct StorageWrite {
    frontend::Span site;
    ir::VarId cell = ir::kNoVar;
    LayoutSet layout;
};

struct MessageSend {
    frontend::Span site;
    ir::VarId message = ir::kNoVar;
    LayoutSet layout;
    ir::BlockId block = 0;
    std::size_t instr = 0;
};

/// What a helper does to builders, for use at its call sites.
struct HelperSummary {
    enum class Kind : std::uint8_t { None, AppendBuilder, ReturnBuilder, ReturnCell };
    Kind kind = Kind::None;
    LayoutSet layout;
};

struct CellAnalysis {
    std::vector<CellValue> values;  // per SSA variable
    std::vector<ParseChain> chains;
    std::vector<StorageWrite> storageWrites;
    std::vector<MessageSend> sends;
    std::size_t visits = 0;          // block visits until the fixpoint
    std::vector<std::string> errors; // loads after end_parse on the same path

    const ParseChain* chain(ir::VarId root) const;
};

/// Abstract interpretation of builder and slice operations over one SSA
/// function. Loop-header phis that still change on a second visit widen to
/// Top. Calls to helpers use `summaries` (indexed like Program::functions)
/// when given, else produce untracked values.
CellAnalysis analyzeCells(const analysis::Program& program, std::size_t function,
                          const std::vector<HelperSummary>* summaries = nullptr);

/// One-level helper summaries, computed without consulting other summaries.
std::vector<HelperSummary> helperSummaries(const analysis::Program& program);

/// Cell analysis of every function, with helper summaries.
std::vector<CellAnalysis> analyzeProgramCells(const analysis::Program& program);

struct EndParseStatus {
    enum class Kind : std::uint8_t { Validated, NotValidated, Escaped, Unknown };
    Kind kind = Kind::Validated;
    ir::VarId root = ir::kNoVar;
    frontend::Span lastLoad;  // NotValidated only
};

/// Status of every parse chain that performed at least one load: Escaped
/// when it leaves the function, Unknown when its layout widened, otherwise
/// Validated iff `end_parse` runs on every path to every exit.
std::vector<EndParseStatus> endParseStatus(const ir::Cfg& cfg, CellAnalysis& cells);

}  // namespace tonscan::cells
