#pragma once

#include <cstdint>
#include <vector>

#include "tonscan/ir/cfg.hpp"

namespace tonscan::ir {

inline constexpr std::uint32_t kNoNode = UINT32_MAX;

/// Plain directed graph used by the dominance algorithms.
struct Digraph {
    std::uint32_t entry = 0;
    std::vector<std::vector<std::uint32_t>> succs;
    std::vector<std::vector<std::uint32_t>> preds;

    explicit Digraph(std::size_t n = 0) : succs(n), preds(n) {}
    std::size_t size() const { return succs.size(); }
    void addEdge(std::uint32_t from, std::uint32_t to);
};

Digraph graphOf(const Cfg& cfg);

/// Reverse graph of `cfg` rooted at a virtual exit node (index = block
/// count) that every block without successors flows into. Blocks that
/// cannot reach an exit are linked to it as well so every block has a
/// post-dominator.
Digraph reverseGraphOf(const Cfg& cfg);

/// Immediate dominators (Cooper, Harvey, Kennedy). idom[entry] == entry;
/// nodes unreachable from entry get kNoNode.
std::vector<std::uint32_t> immediateDominators(const Digraph& g);

/// b is in DF(d) iff d dominates a predecessor of b but does not strictly
/// dominate b. Each frontier is sorted.
std::vector<std::vector<std::uint32_t>> dominanceFrontiers(const Digraph& g, const std::vector<std::uint32_t>& idom);

class DomTree {
public:
    DomTree() = default;
    explicit DomTree(std::vector<std::uint32_t> idom, std::uint32_t root);

    std::uint32_t idom(std::uint32_t n) const { return idom_[n]; }
    const std::vector<std::uint32_t>& children(std::uint32_t n) const { return children_[n]; }
    /// Reflexive dominance; false when either node is unreachable.
    bool dominates(std::uint32_t a, std::uint32_t b) const;
    bool reachable(std::uint32_t n) const { return n < idom_.size() && idom_[n] != kNoNode; }
    /// Nodes in dominator-tree preorder from the root.
    const std::vector<std::uint32_t>& preorder() const { return order_; }
    std::size_t size() const { return idom_.size(); }

private:
    std::vector<std::uint32_t> idom_;
    std::vector<std::vector<std::uint32_t>> children_;
    std::vector<std::uint32_t> pre_, post_, order_;
};

struct Dominance {
    DomTree tree;
    std::vector<std::vector<std::uint32_t>> frontiers;
};

Dominance computeDominance(const Cfg& cfg);

/// Post-dominator tree over blocks plus the virtual exit (index = block count).
DomTree computePostDominators(const Cfg& cfg);

/// Blocks in reverse postorder from the entry.
std::vector<BlockId> reversePostorder(const Cfg& cfg);

}  // namespace tonscan::ir
