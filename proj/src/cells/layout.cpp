#include "tonscan/cells/layout.hpp"

#include <algorithm>
#include <tuple>

namespace tonscan::cells {

Width defaultWidth(FieldKind k) {
    switch (k) {
        case FieldKind::Uint:
        case FieldKind::Int:
        case FieldKind::Bits:
            return Width::unknown();
        default:
            return Width::variable();
    }
}

namespace {

auto key(const CellField& f) {
    return std::make_tuple(static_cast<int>(f.kind), static_cast<int>(f.width.kind), f.width.bits, f.constValue,
                           f.origin.file, f.origin.byteOffset, f.origin.byteLen, f.origin.startLine, f.origin.startCol,
                           f.origin.endLine, f.origin.endCol, f.valueVar);
}

bool rawKind(FieldKind k) { return k == FieldKind::Slice || k == FieldKind::Bits; }

bool widthsCompatible(const Width& a, const Width& b) {
    if (a.kind == Width::Kind::Unknown || b.kind == Width::Kind::Unknown) return true;
    if (a.kind != b.kind) return false;
    return a.kind == Width::Kind::Variable || a.bits == b.bits;
}

}  // namespace

bool operator<(const CellField& a, const CellField& b) { return key(a) < key(b); }

bool layoutLess(const Layout& a, const Layout& b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); }

std::string describe(const CellField& f) {
    std::string s = analysis::fieldKindName(f.kind);
    switch (f.width.kind) {
        case Width::Kind::Exact:
            s += ":" + std::to_string(f.width.bits);
            break;
        case Width::Kind::Unknown:
            s += ":?";
            break;
        case Width::Kind::Variable:
            break;
    }
    return s;
}

LayoutSet join(const LayoutSet& a, const LayoutSet& b) {
    if (a.top || b.top) return LayoutSet::topValue();
    LayoutSet out;
    out.alts = a.alts;
    out.alts.insert(out.alts.end(), b.alts.begin(), b.alts.end());
    std::sort(out.alts.begin(), out.alts.end(), layoutLess);
    out.alts.erase(std::unique(out.alts.begin(), out.alts.end()), out.alts.end());
    if (out.alts.size() > LayoutSet::kCap) return LayoutSet::topValue();
    return out;
}

LayoutSet LayoutSet::append(const CellField& f) const {
    if (top) return *this;
    LayoutSet out = *this;
    for (auto& l : out.alts) l.push_back(f);
    std::sort(out.alts.begin(), out.alts.end(), layoutLess);
    return out;
}

LayoutSet LayoutSet::concat(const LayoutSet& tail) const {
    if (top || tail.top) return topValue();
    LayoutSet out;
    for (const auto& h : alts) {
        for (const auto& t : tail.alts) {
            Layout l = h;
            l.insert(l.end(), t.begin(), t.end());
            out = join(out, single(std::move(l)));
            if (out.top) return out;
        }
    }
    return out;
}

bool fieldsCompatible(const CellField& stored, const CellField& loaded) {
    if (stored.kind == loaded.kind) return widthsCompatible(stored.width, loaded.width);
    const bool raw = rawKind(stored.kind) || rawKind(loaded.kind);
    if (!raw) return false;
    auto dataKind = [](FieldKind k) {
        return k == FieldKind::Slice || k == FieldKind::Bits || k == FieldKind::MsgAddr || k == FieldKind::Uint ||
               k == FieldKind::Int;
    };
    if (!dataKind(stored.kind) || !dataKind(loaded.kind)) return false;
    // Raw bits read or written in place of a typed field: only two exact
    // widths can disagree.
    if (stored.width.kind == Width::Kind::Exact && loaded.width.kind == Width::Kind::Exact) {
        return stored.width.bits == loaded.width.bits;
    }
    return true;
}

namespace {

// Number of stored fields, starting at `from`, whose exact widths add up to
// the exact width of a raw `loaded` read; 0 when there is no such run.
std::size_t rawSpan(const Layout& stored, std::size_t from, const CellField& loaded) {
    if (loaded.kind != FieldKind::Bits || loaded.width.kind != Width::Kind::Exact) return 0;
    int bits = 0;
    for (std::size_t i = from; i < stored.size(); ++i) {
        const auto& f = stored[i];
        if (f.width.kind != Width::Kind::Exact) return 0;
        if (f.kind != FieldKind::Uint && f.kind != FieldKind::Int && !rawKind(f.kind)) return 0;
        bits += f.width.bits;
        if (bits == loaded.width.bits) return i - from + 1;
        if (bits > loaded.width.bits) return 0;
    }
    return 0;
}

}  // namespace

MatchResult layoutMatch(const Layout& stored, const Layout& loaded) {
    MatchResult r;
    std::size_t si = 0;
    for (std::size_t li = 0; li < loaded.size(); ++li) {
        if (si >= stored.size()) {
            r.kind = MatchResult::Kind::LoadOverrun;
            r.index = li;
            r.actual = loaded[li];
            return r;
        }
        if (fieldsCompatible(stored[si], loaded[li])) {
            ++si;
            continue;
        }
        if (const std::size_t n = rawSpan(stored, si, loaded[li])) {
            si += n;
            continue;
        }
        r.kind = MatchResult::Kind::MismatchAt;
        r.index = li;
        r.expected = stored[si];
        r.actual = loaded[li];
        return r;
    }
    return r;
}

}  // namespace tonscan::cells
