#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tonscan/analysis/catalog.hpp"
#include "tonscan/analysis/program.hpp"

namespace tonscan::analysis {

/// `if (flags & 1)` in the message entry point, with `flags` loaded as a
/// 4-bit uint.
struct BouncedCheck {
    ir::BlockId block = 0;         // block ending in the Branch
    ir::BlockId bouncedTarget = 0; // successor taken when the message bounced
    ir::VarId flags = ir::kNoVar;
    ir::Span span;                 // of the branch condition
};

/// Finds the bounced-flag check in `cfg`, if any.
std::optional<BouncedCheck> findBouncedCheck(const ir::Cfg& cfg);

struct CallGraph {
    enum class NodeKind : std::uint8_t { Function, SendMessage, RecvBounced, ExternalBuiltin };
    struct Node {
        NodeKind kind = NodeKind::Function;
        std::string name;
        ir::Span site;  // SendMessage / RecvBounced only
    };
    enum class EdgeKind : std::uint8_t { Call, Bounce };
    struct Edge {
        std::uint32_t from = 0;
        std::uint32_t to = 0;
        EdgeKind kind = EdgeKind::Call;
        ir::Span site;
        int caller = -1;  // Program function index for Call edges
        ir::BlockId block = 0;
        std::size_t instr = 0;
    };

    std::vector<Node> nodes;
    std::vector<Edge> edges;

    /// Node of function `name` (with a body), or -1.
    int functionNode(const std::string& name) const;
    /// Edges leaving function node `node`, in instruction order.
    std::vector<const Edge*> outgoing(std::uint32_t node) const;
    std::vector<const Edge*> incoming(std::uint32_t node) const;
};

/// One node per function body, one Call edge per Call instruction (to the
/// callee's node, a per-site SendMessage node for `send_raw_message`, or an
/// ExternalBuiltin node), and a RecvBounced node feeding `recv_internal`
/// when it checks the bounced flag.
CallGraph buildCallGraph(const Program& program);

/// Effects each function may perform, including through callees. Writing a
/// global counts as GlobalWrite. Indexed like Program::functions.
std::vector<EffectSet> transitiveEffects(const Program& program, const CallGraph& graph);

}  // namespace tonscan::analysis
