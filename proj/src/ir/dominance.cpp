#include "tonscan/ir/dominance.hpp"

#include <algorithm>

namespace tonscan::ir {
namespace {

std::vector<std::uint32_t> postorder(const Digraph& g) {
    std::vector<std::uint32_t> out;
    std::vector<char> seen(g.size(), 0);
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{g.entry, 0}};
    seen[g.entry] = 1;
    while (!stack.empty()) {
        auto& [n, i] = stack.back();
        if (i < g.succs[n].size()) {
            const std::uint32_t s = g.succs[n][i++];
            if (!seen[s]) {
                seen[s] = 1;
                stack.push_back({s, 0});
            }
        } else {
            out.push_back(n);
            stack.pop_back();
        }
    }
    return out;
}

}  // namespace

void Digraph::addEdge(std::uint32_t from, std::uint32_t to) {
    succs[from].push_back(to);
    preds[to].push_back(from);
}

Digraph graphOf(const Cfg& cfg) {
    Digraph g(cfg.blocks.size());
    g.entry = cfg.entry;
    for (const auto& b : cfg.blocks) {
        for (BlockId s : b.succs) g.addEdge(b.id, s);
    }
    return g;
}

Digraph reverseGraphOf(const Cfg& cfg) {
    const auto n = static_cast<std::uint32_t>(cfg.blocks.size());
    Digraph g(n + 1);
    g.entry = n;
    for (const auto& b : cfg.blocks) {
        if (b.succs.empty()) g.addEdge(n, b.id);
        for (BlockId s : b.succs) g.addEdge(s, b.id);
    }
    // blocks stuck in endless loops hang off the virtual exit
    std::vector<char> seen(n + 1, 0);
    for (auto v : postorder(g)) seen[v] = 1;
    for (std::uint32_t b = 0; b < n; ++b) {
        if (!seen[b]) {
            g.addEdge(n, b);
            for (auto v : postorder(g)) seen[v] = 1;
        }
    }
    return g;
}

std::vector<std::uint32_t> immediateDominators(const Digraph& g) {
    const auto po = postorder(g);
    std::vector<std::uint32_t> poIndex(g.size(), kNoNode);
    for (std::uint32_t i = 0; i < po.size(); ++i) poIndex[po[i]] = i;
    std::vector<std::uint32_t> idom(g.size(), kNoNode);
    idom[g.entry] = g.entry;
    auto intersect = [&](std::uint32_t a, std::uint32_t b) {
        while (a != b) {
            while (poIndex[a] < poIndex[b]) a = idom[a];
            while (poIndex[b] < poIndex[a]) b = idom[b];
        }
        return a;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = po.rbegin(); it != po.rend(); ++it) {
            const std::uint32_t n = *it;
            if (n == g.entry) continue;
            std::uint32_t best = kNoNode;
            for (std::uint32_t p : g.preds[n]) {
                if (idom[p] == kNoNode) continue;
                best = best == kNoNode ? p : intersect(p, best);
            }
            if (best != idom[n]) {
                idom[n] = best;
                changed = true;
            }
        }
    }
    return idom;
}

std::vector<std::vector<std::uint32_t>> dominanceFrontiers(const Digraph& g, const std::vector<std::uint32_t>& idom) {
    std::vector<std::vector<std::uint32_t>> df(g.size());
    for (std::uint32_t b = 0; b < g.size(); ++b) {
        if (idom[b] == kNoNode) continue;
        std::vector<std::uint32_t> reachablePreds;
        for (auto p : g.preds[b]) {
            if (idom[p] != kNoNode) reachablePreds.push_back(p);
        }
        for (auto p : reachablePreds) {
            std::uint32_t runner = p;
            while (true) {
                // runner dominates p; stop once it strictly dominates b
                if (runner != b && runner == idom[b]) break;
                df[runner].push_back(b);
                if (runner == g.entry) break;
                runner = idom[runner];
            }
        }
    }
    for (auto& f : df) {
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end()), f.end());
    }
    return df;
}

DomTree::DomTree(std::vector<std::uint32_t> idom, std::uint32_t root) : idom_(std::move(idom)) {
    const std::size_t n = idom_.size();
    children_.assign(n, {});
    for (std::uint32_t v = 0; v < n; ++v) {
        if (v != root && idom_[v] != kNoNode) children_[idom_[v]].push_back(v);
    }
    pre_.assign(n, kNoNode);
    post_.assign(n, kNoNode);
    std::uint32_t clock = 0;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{root, 0}};
    pre_[root] = clock++;
    order_.push_back(root);
    while (!stack.empty()) {
        auto& [v, i] = stack.back();
        if (i < children_[v].size()) {
            const std::uint32_t c = children_[v][i++];
            pre_[c] = clock++;
            order_.push_back(c);
            stack.push_back({c, 0});
        } else {
            post_[v] = clock++;
            stack.pop_back();
        }
    }
}

bool DomTree::dominates(std::uint32_t a, std::uint32_t b) const {
    if (!reachable(a) || !reachable(b)) return false;
    return pre_[a] <= pre_[b] && post_[b] <= post_[a];
}

Dominance computeDominance(const Cfg& cfg) {
    const Digraph g = graphOf(cfg);
    auto idom = immediateDominators(g);
    Dominance d;
    d.frontiers = dominanceFrontiers(g, idom);
    d.tree = DomTree(std::move(idom), cfg.entry);
    return d;
}

DomTree computePostDominators(const Cfg& cfg) {
    const Digraph g = reverseGraphOf(cfg);
    return DomTree(immediateDominators(g), g.entry);
}

std::vector<BlockId> reversePostorder(const Cfg& cfg) {
    auto po = postorder(graphOf(cfg));
    std::reverse(po.begin(), po.end());
    return po;
}

}  // namespace tonscan::ir
