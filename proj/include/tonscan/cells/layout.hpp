#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tonscan/analysis/catalog.hpp"
#include "tonscan/frontend/source.hpp"
#include "tonscan/ir/cfg.hpp"

namespace tonscan::cells {

using analysis::FieldKind;

struct Width {
    enum class Kind : std::uint8_t { Exact, Variable, Unknown };
    Kind kind = Kind::Unknown;
    int bits = 0;  // Exact only

    static Width exact(int b) { return Width{Kind::Exact, b}; }
    static Width variable() { return Width{Kind::Variable, 0}; }
    static Width unknown() { return Width{Kind::Unknown, 0}; }
    friend bool operator==(const Width&, const Width&) = default;
};

/// Natural width for a field kind with no explicit width argument.
Width defaultWidth(FieldKind k);

struct CellField {
    FieldKind kind = FieldKind::Bits;
    Width width;
    frontend::Span origin;                  // the store/load expression
    std::optional<std::int64_t> constValue; // stored value, when constant
    ir::VarId valueVar = ir::kNoVar;        // stored value or loaded result

    friend bool operator==(const CellField&, const CellField&) = default;
};
bool operator<(const CellField& a, const CellField& b);

/// `Uint:2`, `Coins`, `Uint:?`.
std::string describe(const CellField& f);

using Layout = std::vector<CellField>;
bool layoutLess(const Layout& a, const Layout& b);

/// Bottom (no alternatives, not top), Equal (one), Alternatives (2..cap) or Top.
struct LayoutSet {
    static constexpr std::size_t kCap = 8;

    bool top = false;
    std::vector<Layout> alts;  // sorted, unique

    static LayoutSet bottom() { return {}; }
    static LayoutSet topValue() { return LayoutSet{true, {}}; }
    static LayoutSet single(Layout l) { return LayoutSet{false, {std::move(l)}}; }

    bool isBottom() const { return !top && alts.empty(); }
    bool isEqual() const { return !top && alts.size() == 1; }

    /// Appends `f` to every alternative.
    LayoutSet append(const CellField& f) const;
    /// Pairwise concatenation, capped.
    LayoutSet concat(const LayoutSet& tail) const;

    friend bool operator==(const LayoutSet&, const LayoutSet&) = default;
};

/// Least upper bound: union of alternatives; more than kCap becomes Top.
LayoutSet join(const LayoutSet& a, const LayoutSet& b);

struct MatchResult {
    enum class Kind : std::uint8_t { Compatible, MismatchAt, LoadOverrun };
    Kind kind = Kind::Compatible;
    std::size_t index = 0;
    std::optional<CellField> expected;  // stored field (MismatchAt)
    std::optional<CellField> actual;    // loaded field

    friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Whether a loaded field can read a stored one: same kind with compatible
/// widths (Unknown matches any width), or both raw data (Slice / Bits /
/// MsgAddr with at least one Slice or Bits side).
bool fieldsCompatible(const CellField& stored, const CellField& loaded);

/// Position-wise comparison. A loaded list that is a prefix of the stored
/// one is Compatible; a longer one overruns. A raw read of exact width
/// (`skip_bits(96)`, `load_bits(96)`) may cover several stored fields whose
/// exact widths sum to it. `index` is the position in `loaded`.
MatchResult layoutMatch(const Layout& stored, const Layout& loaded);

}  // namespace tonscan::cells
