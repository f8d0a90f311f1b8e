#include "isr/galactic_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace isr {

GalacticDigraph::GalacticDigraph(std::size_t n, std::vector<Arc> arcs, Directedness directedness)
    : kinds_(n, VertexKind::planet), directedness_(directedness) {
    build(std::move(arcs));
}

GalacticDigraph::GalacticDigraph(std::vector<VertexKind> kinds, std::vector<Arc> arcs,
                                 Directedness directedness)
    : kinds_(std::move(kinds)), directedness_(directedness) {
    build(std::move(arcs));
}

void GalacticDigraph::build(std::vector<Arc> arcs) {
    const auto n = kinds_.size();
    if (!directed()) {
        const auto m = arcs.size();
        arcs.reserve(2 * m);
        for (std::size_t i = 0; i < m; ++i) arcs.emplace_back(arcs[i].second, arcs[i].first);
    }
    for (const auto& [u, v] : arcs) {
        if (u >= n || v >= n)
            throw std::invalid_argument("arc (" + std::to_string(u) + "," + std::to_string(v) +
                                        ") references a vertex outside 0.." +
                                        std::to_string(n) + "-1");
        if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    arcs_ = std::move(arcs);

    out_.assign(n, {});
    in_.assign(n, {});
    nbr_.assign(n, {});
    for (const auto& [u, v] : arcs_) {
        out_[u].push_back(v);
        in_[v].push_back(u);
        nbr_[u].push_back(v);
        nbr_[v].push_back(u);
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(in_[v].begin(), in_[v].end());
        auto& nb = nbr_[v];
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
}

std::size_t GalacticDigraph::num_black_holes() const {
    return static_cast<std::size_t>(
        std::count(kinds_.begin(), kinds_.end(), VertexKind::black_hole));
}

bool GalacticDigraph::has_arc(VertexId u, VertexId v) const {
    const auto& o = out_.at(u);
    return std::binary_search(o.begin(), o.end(), v);
}

bool GalacticDigraph::adjacent(VertexId u, VertexId v) const {
    const auto& nb = nbr_.at(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Arc> GalacticDigraph::edges() const {
    if (directed()) return arcs_;
    std::vector<Arc> result;
    for (const auto& a : arcs_)
        if (a.first < a.second) result.push_back(a);
    return result;
}

VertexSet CollapseMap::collapsed() const {
    VertexSet result;
    for (VertexId v = 0; v < f.size(); ++v)
        if (f[v] == hole) result.push_back(v);
    return result;
}

std::vector<VertexId> CollapseMap::inverse() const {
    std::vector<VertexId> inv(target.size(), no_vertex);
    for (VertexId v = 0; v < f.size(); ++v)
        if (f[v] != hole) inv[f[v]] = v;
    return inv;
}

CollapseMap collapse(const GalacticDigraph& g, std::span<const VertexId> set) {
    if (set.empty()) throw std::invalid_argument("collapse: empty vertex set");
    const auto n = g.size();
    std::vector<bool> in_set(n, false);
    for (VertexId v : set) {
        if (v >= n) throw std::invalid_argument("collapse: vertex out of range");
        in_set[v] = true;
    }

    CollapseMap cm;
    cm.f.assign(n, no_vertex);
    std::vector<VertexKind> kinds;
    for (VertexId v = 0; v < n; ++v) {
        if (in_set[v]) continue;
        cm.f[v] = static_cast<VertexId>(kinds.size());
        kinds.push_back(g.kind(v));
    }
    cm.hole = static_cast<VertexId>(kinds.size());
    kinds.push_back(VertexKind::black_hole);
    for (VertexId v = 0; v < n; ++v)
        if (in_set[v]) cm.f[v] = cm.hole;

    std::vector<Arc> arcs;
    arcs.reserve(g.arcs().size());
    for (const auto& [u, v] : g.arcs()) {
        const auto fu = cm.f[u];
        const auto fv = cm.f[v];
        if (fu != fv) arcs.emplace_back(fu, fv);
    }
    cm.target = GalacticDigraph(std::move(kinds), std::move(arcs), g.directedness());
    cm.source = g;
    return cm;
}

bool is_independent(const GalacticDigraph& g, std::span<const VertexId> vertices) {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const auto u = vertices[i];
        if (!g.is_planet(u)) continue;
        for (std::size_t j = i + 1; j < vertices.size(); ++j) {
            const auto v = vertices[j];
            if (!g.is_planet(v)) continue;
            if (u == v || g.adjacent(u, v)) return false;
        }
    }
    return true;
}

std::vector<VertexId> topological_order(const GalacticDigraph& g) {
    if (!g.directed()) throw std::invalid_argument("topological order of an undirected graph");
    const auto n = g.size();
    std::vector<std::size_t> indeg(n);
    std::vector<VertexId> order;
    order.reserve(n);
    for (VertexId v = 0; v < n; ++v) {
        indeg[v] = g.in(v).size();
        if (indeg[v] == 0) order.push_back(v);
    }
    for (std::size_t head = 0; head < order.size(); ++head)
        for (VertexId w : g.out(order[head]))
            if (--indeg[w] == 0) order.push_back(w);
    if (order.size() != n) order.clear();
    return order;
}

bool is_dag(const GalacticDigraph& g) {
    return g.size() == 0 || !topological_order(g).empty();
}

std::vector<int> layers(const GalacticDigraph& g) {
    const auto order = topological_order(g);
    if (order.size() != g.size()) throw std::invalid_argument("layers: graph has a cycle");
    std::vector<int> layer(g.size(), 1);
    for (VertexId v : order)
        for (VertexId w : g.out(v)) layer[w] = std::max(layer[w], layer[v] + 1);
    return layer;
}

int depth(const GalacticDigraph& g) {
    const auto layer = layers(g);
    if (layer.empty()) return 0;
    return *std::max_element(layer.begin(), layer.end());
}

bool no_adjacent_black_holes(const GalacticDigraph& g) {
    for (const auto& [u, v] : g.arcs())
        if (g.is_black_hole(u) && g.is_black_hole(v)) return false;
    return true;
}

VertexSet make_set(std::vector<VertexId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

void check_instance(const Instance& inst) {
    const auto& g = inst.graph;
    if (inst.start.size() != inst.target.size())
        throw std::invalid_argument("start and destination sets differ in size");
    for (const auto* set : {&inst.start, &inst.target}) {
        if (!std::is_sorted(set->begin(), set->end()) ||
            std::adjacent_find(set->begin(), set->end()) != set->end())
            throw std::invalid_argument("vertex sets must be sorted and duplicate-free");
        for (VertexId v : *set) {
            if (v >= g.size())
                throw std::invalid_argument("vertex " + std::to_string(v) + " outside the graph");
            if (!g.is_planet(v))
                throw std::invalid_argument("start/destination vertex " + std::to_string(v) +
                                            " is a black hole");
        }
    }
    if (!is_independent(g, inst.start))
        throw std::invalid_argument("start set is not independent");
    if (!is_independent(g, inst.target))
        throw std::invalid_argument("destination set is not independent");
}

}  // namespace isr
