#include "support/dom_oracle.hpp"

namespace tonscan::testing {
namespace {

std::vector<bool> reachableWithout(const ir::Digraph& g, std::uint32_t removed) {
    std::vector<bool> seen(g.size(), false);
    if (g.entry == removed) return seen;
    std::vector<std::uint32_t> stack{g.entry};
    seen[g.entry] = true;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto s : g.succs[v]) {
            if (s != removed && !seen[s]) {
                seen[s] = true;
                stack.push_back(s);
            }
        }
    }
    return seen;
}

}  // namespace

ir::Digraph randomDigraph(std::mt19937& rng, std::size_t n, double density) {
    ir::Digraph g(n);
    g.entry = 0;
    std::uniform_int_distribution<std::uint32_t> node(0, static_cast<std::uint32_t>(n - 1));
    std::bernoulli_distribution coin(density / static_cast<double>(n));
    for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t b = 0; b < n; ++b) {
            if (coin(rng)) g.addEdge(a, b);
        }
    }
    // a spine keeps most nodes reachable
    for (std::uint32_t a = 1; a < n; ++a) {
        if (std::bernoulli_distribution(0.7)(rng)) g.addEdge(node(rng) % a, a);
    }
    return g;
}

std::vector<std::vector<bool>> bruteDominators(const ir::Digraph& g) {
    const auto n = g.size();
    const auto all = reachableWithout(g, ir::kNoNode);
    std::vector<std::vector<bool>> dom(n, std::vector<bool>(n, false));
    for (std::uint32_t d = 0; d < n; ++d) {
        const auto without = reachableWithout(g, d);
        for (std::uint32_t v = 0; v < n; ++v) {
            if (!all[v] || !all[d]) continue;
            dom[d][v] = v == d || !without[v];
        }
    }
    return dom;
}

std::vector<std::uint32_t> bruteIdom(const ir::Digraph& g, const std::vector<std::vector<bool>>& dom) {
    const auto n = g.size();
    std::vector<std::uint32_t> idom(n, ir::kNoNode);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (!dom[v][v]) continue;
        if (v == g.entry) {
            idom[v] = v;
            continue;
        }
        for (std::uint32_t d = 0; d < n; ++d) {
            if (d == v || !dom[d][v]) continue;
            bool closest = true;
            for (std::uint32_t e = 0; e < n; ++e) {
                if (e != v && e != d && dom[e][v] && !dom[e][d]) closest = false;
            }
            if (closest) idom[v] = d;
        }
    }
    return idom;
}

std::vector<std::vector<std::uint32_t>> bruteFrontiers(const ir::Digraph& g, const std::vector<std::vector<bool>>& dom) {
    const auto n = g.size();
    std::vector<std::vector<std::uint32_t>> df(n);
    for (std::uint32_t d = 0; d < n; ++d) {
        for (std::uint32_t b = 0; b < n; ++b) {
            if (!dom[b][b]) continue;
            const bool strict = d != b && dom[d][b];
            if (strict) continue;
            bool hit = false;
            for (auto p : g.preds[b]) hit = hit || dom[d][p];
            if (hit) df[d].push_back(b);
        }
    }
    return df;
}

}  // namespace tonscan::testing
