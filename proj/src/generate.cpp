#include "isr/generate.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace isr {

GalacticDigraph random_layered_dag(std::size_t n, int layers, double p, std::mt19937_64& rng) {
    if (layers < 1) throw std::invalid_argument("layer count must be positive");
    std::uniform_int_distribution<int> pick(0, layers - 1);
    std::bernoulli_distribution coin(p);
    std::vector<int> level(n);
    for (std::size_t v = 0; v < n; ++v)
        level[v] = v < static_cast<std::size_t>(layers) ? static_cast<int>(v) : pick(rng);
    std::shuffle(level.begin(), level.end(), rng);
    std::vector<Arc> arcs;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = 0; v < n; ++v)
            if (level[u] < level[v] && coin(rng)) arcs.emplace_back(u, v);
    return GalacticDigraph(n, std::move(arcs));
}

GalacticDigraph random_dag(std::size_t n, double p, std::mt19937_64& rng) {
    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), VertexId{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution coin(p);
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng)) arcs.emplace_back(order[i], order[j]);
    return GalacticDigraph(n, std::move(arcs));
}

GalacticDigraph random_undirected(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Arc> edges;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v)
            if (coin(rng)) edges.emplace_back(u, v);
    return GalacticDigraph(n, std::move(edges), Directedness::undirected);
}

VertexSet random_independent_set(const GalacticDigraph& g, std::size_t k,
                                 const std::vector<int>& priority, std::mt19937_64& rng) {
    std::vector<VertexId> order(g.size());
    std::iota(order.begin(), order.end(), VertexId{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(),
                     [&](VertexId a, VertexId b) { return priority[a] < priority[b]; });
    std::vector<bool> blocked(g.size(), false);
    VertexSet chosen;
    for (VertexId v : order) {
        if (chosen.size() == k) break;
        if (blocked[v]) continue;
        chosen.push_back(v);
        blocked[v] = true;
        for (VertexId w : g.neighbors(v)) blocked[w] = true;
    }
    if (chosen.size() < k)
        throw std::invalid_argument("no independent set of size " + std::to_string(k) + " found");
    return make_set(std::move(chosen));
}

Instance random_instance(GalacticDigraph g, std::size_t k, std::mt19937_64& rng) {
    std::vector<int> early(g.size(), 0), late(g.size(), 0);
    if (g.directed() && is_dag(g)) {
        const auto level = layers(g);
        for (VertexId v = 0; v < g.size(); ++v) {
            early[v] = level[v];
            late[v] = -level[v];
        }
    }
    for (int attempt = 0;; ++attempt) {
        try {
            Instance inst;
            inst.start = random_independent_set(g, k, early, rng);
            inst.target = random_independent_set(g, k, late, rng);
            inst.graph = std::move(g);
            return inst;
        } catch (const std::invalid_argument&) {
            if (attempt == 20) throw;
        }
    }
}

}  // namespace isr
