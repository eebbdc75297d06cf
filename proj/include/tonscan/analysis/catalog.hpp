#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tonscan::analysis {

enum class Effect : std::uint8_t {
    StorageWrite,
    MessageSend,
    Throws,
    GlobalWrite,
    EnvRead,
    LogicalTimeSource,
    RandomnessApi,
};
inline constexpr std::size_t kEffectCount = 7;

using EffectSet = std::uint8_t;  // bit i set = Effect(i) present
inline constexpr EffectSet bit(Effect e) { return static_cast<EffectSet>(1u << static_cast<unsigned>(e)); }
inline constexpr bool has(EffectSet s, Effect e) { return (s & bit(e)) != 0; }

const char* effectName(Effect e);
std::optional<Effect> parseEffect(const std::string& name);

enum class FieldKind : std::uint8_t { Uint, Int, Coins, MsgAddr, Ref, Dict, Slice, Bits };
const char* fieldKindName(FieldKind k);
std::optional<FieldKind> parseFieldKind(const std::string& name);

/// How a builtin touches builders and slices. Argument indexes count the
/// receiver as 0 (`b.store_uint(x, 8)` is `store_uint(b, x, 8)`).
struct CellOp {
    enum class Kind : std::uint8_t {
        None,
        NewBuilder,    // begin_cell
        Store,         // append `field` to the builder in arg 0
        StoreBuilder,  // append the fields of the builder in arg 1
        EndCell,       // builder -> cell
        BeginParse,    // cell -> slice
        Load,          // consume `field` from the slice in arg 0
        Preload,       // read `field` without consuming
        Skip,          // consume `field` and drop the value
        EndParse,      // assert the slice is empty
        ReadStorage,   // get_data
        WriteStorage,  // set_data(arg 0)
        SendMessage,   // send_raw_message(arg 0, mode)
    };
    Kind kind = Kind::None;
    FieldKind field = FieldKind::Bits;
    int width = -1;     // fixed width in bits, or -1
    int widthArg = -1;  // argument holding the width, or -1
    int valueArg = -1;  // argument holding the stored value, or -1
};
const char* cellOpKindName(CellOp::Kind k);
std::optional<CellOp::Kind> parseCellOpKind(const std::string& name);

struct BuiltinInfo {
    std::string name;
    int args = 0;  // including the receiver
    int rets = 0;  // values returned; for modifying builtins this includes the updated receiver
    EffectSet effects = 0;
    CellOp cellOp;
    bool modifying = false;  // `x~f()` updates x and yields the remaining values
    int indexArg = -1;       // argument used as a dictionary key or tuple index
};

/// Semantics of the FunC builtins and standard-library functions the
/// analyses care about.
class BuiltinCatalog {
public:
    /// The compiled-in catalog.
    static const BuiltinCatalog& standard();

    const BuiltinInfo* find(const std::string& name) const;
    void set(BuiltinInfo info);
    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, BuiltinInfo>& entries() const { return entries_; }

    /// Replaces entries by name from a JSON object
    /// `name -> {args, rets, effects, cellOp, modifying, indexArg}`.
    /// Throws std::runtime_error on malformed input.
    void applyOverride(const std::string& jsonText);

    /// Value count of `x~name(...)` / `name(...)`; the tilde form of a
    /// non-modifying builtin yields only the receiver.
    std::optional<std::size_t> returnArity(const std::string& name, bool tilde) const;

private:
    std::map<std::string, BuiltinInfo> entries_;
};

}  // namespace tonscan::analysis
