#include "tonscan/analysis/catalog.hpp"

#include <array>
#include <initializer_list>
#include <stdexcept>

#include "json.hpp"

namespace tonscan::analysis {
namespace {

constexpr std::array<const char*, kEffectCount> kEffectNames = {
    "StorageWrite", "MessageSend", "Throws", "GlobalWrite", "EnvRead", "LogicalTimeSource", "RandomnessApi",
};
constexpr std::array<const char*, 8> kFieldNames = {"Uint", "Int", "Coins", "MsgAddr", "Ref", "Dict", "Slice", "Bits"};
constexpr std::array<const char*, 13> kCellOpNames = {
    "none",     "new_builder", "store", "store_builder", "end_cell",      "begin_parse",  "load",
    "preload",  "skip",        "end_parse", "read_storage", "write_storage", "send_message",
};

using K = CellOp::Kind;
using F = FieldKind;

EffectSet effects(std::initializer_list<Effect> list) {
    EffectSet s = 0;
    for (Effect e : list) s |= bit(e);
    return s;
}

BuiltinInfo fn(std::string name, int args, int rets, EffectSet fx = 0) {
    BuiltinInfo b;
    b.name = std::move(name);
    b.args = args;
    b.rets = rets;
    b.effects = fx;
    return b;
}

BuiltinInfo cellFn(std::string name, int args, int rets, CellOp op, bool modifying = false) {
    BuiltinInfo b = fn(std::move(name), args, rets);
    b.cellOp = op;
    b.modifying = modifying;
    return b;
}

CellOp op(K kind, F field = F::Bits, int width = -1, int widthArg = -1, int valueArg = -1) {
    return CellOp{kind, field, width, widthArg, valueArg};
}

BuiltinCatalog buildStandard() {
    BuiltinCatalog c;
    const EffectSet none = 0;

    // Builders.
    c.set(cellFn("begin_cell", 0, 1, op(K::NewBuilder)));
    c.set(cellFn("end_cell", 1, 1, op(K::EndCell)));
    c.set(cellFn("store_uint", 3, 1, op(K::Store, F::Uint, -1, 2, 1)));
    c.set(cellFn("store_int", 3, 1, op(K::Store, F::Int, -1, 2, 1)));
    c.set(cellFn("store_coins", 2, 1, op(K::Store, F::Coins, -1, -1, 1)));
    c.set(cellFn("store_grams", 2, 1, op(K::Store, F::Coins, -1, -1, 1)));
    c.set(cellFn("store_slice", 2, 1, op(K::Store, F::Slice, -1, -1, 1)));
    c.set(cellFn("store_ref", 2, 1, op(K::Store, F::Ref, -1, -1, 1)));
    c.set(cellFn("store_dict", 2, 1, op(K::Store, F::Dict, -1, -1, 1)));
    c.set(cellFn("store_maybe_ref", 2, 1, op(K::Store, F::Dict, -1, -1, 1)));
    c.set(cellFn("store_builder", 2, 1, op(K::StoreBuilder)));

    // Slices.
    c.set(cellFn("begin_parse", 1, 1, op(K::BeginParse)));
    c.set(cellFn("end_parse", 1, 0, op(K::EndParse)));
    c.set(cellFn("load_uint", 2, 2, op(K::Load, F::Uint, -1, 1), true));
    c.set(cellFn("load_int", 2, 2, op(K::Load, F::Int, -1, 1), true));
    c.set(cellFn("load_coins", 1, 2, op(K::Load, F::Coins), true));
    c.set(cellFn("load_grams", 1, 2, op(K::Load, F::Coins), true));
    c.set(cellFn("load_msg_addr", 1, 2, op(K::Load, F::MsgAddr), true));
    c.set(cellFn("load_ref", 1, 2, op(K::Load, F::Ref), true));
    c.set(cellFn("load_dict", 1, 2, op(K::Load, F::Dict), true));
    c.set(cellFn("load_maybe_ref", 1, 2, op(K::Load, F::Dict), true));
    c.set(cellFn("load_bits", 2, 2, op(K::Load, F::Bits, -1, 1), true));
    c.set(cellFn("preload_uint", 2, 1, op(K::Preload, F::Uint, -1, 1)));
    c.set(cellFn("preload_int", 2, 1, op(K::Preload, F::Int, -1, 1)));
    c.set(cellFn("preload_ref", 1, 1, op(K::Preload, F::Ref)));
    c.set(cellFn("preload_dict", 1, 1, op(K::Preload, F::Dict)));
    c.set(cellFn("preload_maybe_ref", 1, 1, op(K::Preload, F::Dict)));
    c.set(cellFn("preload_bits", 2, 1, op(K::Preload, F::Bits, -1, 1)));
    c.set(cellFn("skip_bits", 2, 1, op(K::Skip, F::Bits, -1, 1)));
    c.set(cellFn("skip_dict", 1, 1, op(K::Skip, F::Dict)));
    c.set(cellFn("skip_maybe_ref", 1, 1, op(K::Skip, F::Dict)));
    for (const char* name : {"slice_empty?", "slice_data_empty?", "slice_refs_empty?", "slice_bits", "slice_refs",
                             "slice_depth", "slice_hash", "cell_hash", "cell_depth", "builder_bits", "builder_refs",
                             "builder_depth", "cell_null?", "dict_empty?", "string_hash"}) {
        c.set(fn(name, 1, 1));
    }
    c.set(fn("slice_bits_refs", 1, 2));
    c.set(fn("first_bits", 2, 1));
    c.set(fn("skip_last_bits", 2, 1));
    c.set(fn("slice_last", 2, 1));
    c.set(fn("equal_slices", 2, 1));
    c.set(fn("equal_slice_bits", 2, 1));
    c.set(fn("parse_std_addr", 1, 2));
    c.set(fn("parse_var_addr", 1, 2));
    c.set(fn("compute_data_size", 2, 3));

    // Storage, messages, environment.
    {
        BuiltinInfo b = fn("get_data", 0, 1, effects({Effect::EnvRead}));
        b.cellOp = op(K::ReadStorage);
        c.set(b);
    }
    {
        BuiltinInfo b = fn("set_data", 1, 0, effects({Effect::StorageWrite}));
        b.cellOp = op(K::WriteStorage);
        c.set(b);
    }
    {
        BuiltinInfo b = fn("send_raw_message", 2, 0, effects({Effect::MessageSend}));
        b.cellOp = op(K::SendMessage);
        c.set(b);
    }
    c.set(fn("set_code", 1, 0, effects({Effect::StorageWrite})));
    c.set(fn("commit", 0, 0, effects({Effect::StorageWrite})));
    c.set(fn("raw_reserve", 2, 0, effects({Effect::MessageSend})));
    c.set(fn("raw_reserve_extra", 3, 0, effects({Effect::MessageSend})));
    c.set(fn("accept_message", 0, 0, none));
    c.set(fn("set_gas_limit", 1, 0, none));
    c.set(fn("now", 0, 1, effects({Effect::EnvRead})));
    c.set(fn("my_address", 0, 1, effects({Effect::EnvRead})));
    c.set(fn("get_balance", 0, 1, effects({Effect::EnvRead})));
    c.set(fn("config_param", 1, 1, effects({Effect::EnvRead})));
    c.set(fn("cur_lt", 0, 1, effects({Effect::EnvRead, Effect::LogicalTimeSource})));
    c.set(fn("block_lt", 0, 1, effects({Effect::EnvRead, Effect::LogicalTimeSource})));

    // Exceptions.
    c.set(fn("throw", 1, 0, effects({Effect::Throws})));
    c.set(fn("throw_if", 2, 0, effects({Effect::Throws})));
    c.set(fn("throw_unless", 2, 0, effects({Effect::Throws})));
    c.set(fn("throw_arg", 2, 0, effects({Effect::Throws})));
    c.set(fn("throw_arg_if", 3, 0, effects({Effect::Throws})));
    c.set(fn("throw_arg_unless", 3, 0, effects({Effect::Throws})));

    // Randomness.
    c.set(fn("random", 0, 1, effects({Effect::RandomnessApi})));
    c.set(fn("rand", 1, 1, effects({Effect::RandomnessApi})));
    c.set(fn("get_seed", 0, 1, effects({Effect::RandomnessApi})));
    c.set(fn("set_seed", 1, 0, effects({Effect::RandomnessApi})));
    c.set(fn("randomize", 1, 0, effects({Effect::RandomnessApi})));
    c.set(fn("randomize_lt", 0, 0, effects({Effect::RandomnessApi})));

    // Arithmetic.
    c.set(fn("min", 2, 1));
    c.set(fn("max", 2, 1));
    c.set(fn("abs", 1, 1));
    c.set(fn("sgn", 1, 1));
    c.set(fn("muldiv", 3, 1));
    c.set(fn("muldivr", 3, 1));
    c.set(fn("muldivc", 3, 1));
    c.set(fn("minmax", 2, 2));
    c.set(fn("divmod", 2, 2));
    c.set(fn("moddiv", 2, 2));
    c.set(fn("muldivmod", 3, 2));
    c.set(fn("check_signature", 3, 1));
    c.set(fn("check_data_signature", 3, 1));

    // Tuples and lists.
    for (const char* name : {"first", "second", "third", "fourth", "car", "cdr", "pair_first", "pair_second",
                             "tuple_length", "null?", "unsingle", "single"}) {
        c.set(fn(name, 1, 1));
    }
    c.set(fn("null", 0, 1));
    c.set(fn("empty_tuple", 0, 1));
    c.set(fn("cons", 2, 1));
    c.set(fn("pair", 2, 1));
    c.set(fn("triple", 3, 1));
    c.set(fn("tuple4", 4, 1));
    c.set(fn("unpair", 1, 2));
    c.set(fn("untriple", 1, 3));
    c.set(fn("unpair_list", 1, 2));
    c.set(fn("tpush", 2, 1));
    {
        BuiltinInfo b = fn("tpop", 1, 2);
        b.modifying = true;
        c.set(b);
    }
    {
        BuiltinInfo b = fn("at", 2, 1);
        b.indexArg = 1;
        c.set(b);
    }

    // Dictionaries: (dict, key_len, key, ...) for get/set/delete.
    auto dictGet = [&](const std::string& name, int args, int rets, bool modifying = false) {
        BuiltinInfo b = fn(name, args, rets);
        b.indexArg = name.find("::") != std::string::npos ? -1 : 2;
        b.modifying = modifying;
        c.set(b);
    };
    for (const char* p : {"udict", "idict", "dict"}) {
        const std::string s(p);
        dictGet(s + "_get?", 3, 2);
        dictGet(s + "_get_ref", 3, 1);
        dictGet(s + "_get_ref?", 3, 2);
        dictGet(s + "_set", 4, 1);
        dictGet(s + "_set_ref", 4, 1);
        dictGet(s + "_set_builder", 4, 1);
        dictGet(s + "_add?", 4, 2);
        dictGet(s + "_replace?", 4, 2);
        dictGet(s + "_add_builder?", 4, 2);
        dictGet(s + "_replace_builder?", 4, 2);
        dictGet(s + "_delete?", 3, 2, true);
        dictGet(s + "_delete_get?", 3, 3, true);
        dictGet(s + "_get_next?", 3, 3);
        dictGet(s + "_get_prev?", 3, 3);
        dictGet(s + "_get_min?", 2, 3);
        dictGet(s + "_get_max?", 2, 3);
        dictGet(s + "::delete_get_min", 2, 4, true);
        dictGet(s + "::delete_get_max", 2, 4, true);
    }
    c.set(fn("new_dict", 0, 1));
    c.set(fn("dict_set", 4, 1));

    // Debugging helpers.
    c.set(fn("dump_stack", 0, 0));
    c.set(fn("touch", 1, 1));
    return c;
}

}  // namespace

const char* effectName(Effect e) { return kEffectNames[static_cast<std::size_t>(e)]; }

std::optional<Effect> parseEffect(const std::string& name) {
    for (std::size_t i = 0; i < kEffectNames.size(); ++i) {
        if (name == kEffectNames[i]) return static_cast<Effect>(i);
    }
    return std::nullopt;
}

const char* fieldKindName(FieldKind k) { return kFieldNames[static_cast<std::size_t>(k)]; }

std::optional<FieldKind> parseFieldKind(const std::string& name) {
    for (std::size_t i = 0; i < kFieldNames.size(); ++i) {
        if (name == kFieldNames[i]) return static_cast<FieldKind>(i);
    }
    return std::nullopt;
}

const char* cellOpKindName(CellOp::Kind k) { return kCellOpNames[static_cast<std::size_t>(k)]; }

std::optional<CellOp::Kind> parseCellOpKind(const std::string& name) {
    for (std::size_t i = 0; i < kCellOpNames.size(); ++i) {
        if (name == kCellOpNames[i]) return static_cast<CellOp::Kind>(i);
    }
    return std::nullopt;
}

const BuiltinCatalog& BuiltinCatalog::standard() {
    static const BuiltinCatalog catalog = buildStandard();
    return catalog;
}

const BuiltinInfo* BuiltinCatalog::find(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end() && !name.empty() && name[0] == '~') it = entries_.find(name.substr(1));
    return it == entries_.end() ? nullptr : &it->second;
}

void BuiltinCatalog::set(BuiltinInfo info) {
    const std::string key = info.name;
    entries_[key] = std::move(info);
}

std::optional<std::size_t> BuiltinCatalog::returnArity(const std::string& name, bool tilde) const {
    const BuiltinInfo* b = find(name);
    if (!b) return std::nullopt;
    if (tilde && !b->modifying) return 1;
    return static_cast<std::size_t>(b->rets);
}

void BuiltinCatalog::applyOverride(const std::string& jsonText) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(jsonText);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("catalog override: ") + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error("catalog override: top level must be an object");
    for (const auto& [name, spec] : doc.items()) {
        if (!spec.is_object()) throw std::runtime_error("catalog override: entry '" + name + "' must be an object");
        BuiltinInfo b;
        b.name = name;
        try {
            b.args = spec.value("args", 0);
            b.rets = spec.value("rets", 0);
            b.modifying = spec.value("modifying", false);
            b.indexArg = spec.value("indexArg", -1);
            for (const auto& e : spec.value("effects", json::array())) {
                auto parsed = parseEffect(e.get<std::string>());
                if (!parsed) throw std::runtime_error("unknown effect '" + e.get<std::string>() + "'");
                b.effects |= bit(*parsed);
            }
            if (spec.contains("cellOp")) {
                const json& c = spec.at("cellOp");
                auto kind = parseCellOpKind(c.value("kind", std::string("none")));
                if (!kind) throw std::runtime_error("unknown cellOp kind");
                b.cellOp.kind = *kind;
                if (c.contains("field")) {
                    auto f = parseFieldKind(c.at("field").get<std::string>());
                    if (!f) throw std::runtime_error("unknown field kind");
                    b.cellOp.field = *f;
                }
                b.cellOp.width = c.value("width", -1);
                b.cellOp.widthArg = c.value("widthArg", -1);
                b.cellOp.valueArg = c.value("valueArg", -1);
            }
        } catch (const json::exception& e) {
            throw std::runtime_error("catalog override: entry '" + name + "': " + e.what());
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("catalog override: entry '" + name + "': " + e.what());
        }
        set(std::move(b));
    }
}

}  // namespace tonscan::analysis
