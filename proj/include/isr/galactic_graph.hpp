#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace isr {

using VertexId = std::uint32_t;
inline constexpr VertexId no_vertex = ~VertexId{0};

/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<VertexId>;
using Arc = std::pair<VertexId, VertexId>;

enum class VertexKind : std::uint8_t { planet, black_hole };
enum class Directedness : std::uint8_t { directed, undirected };

/// Directed graph whose vertices are planets or black holes.
///
/// Immutable once built. Arcs are kept sorted and deduplicated; undirected
/// graphs store every edge as the two opposite arcs so that a single
/// move/independence check serves both settings. Self-loops are rejected.
class GalacticDigraph {
public:
    GalacticDigraph() = default;

    /// All-planet graph on `n` vertices.
    GalacticDigraph(std::size_t n, std::vector<Arc> arcs,
                    Directedness directedness = Directedness::directed);

    GalacticDigraph(std::vector<VertexKind> kinds, std::vector<Arc> arcs,
                    Directedness directedness = Directedness::directed);

    std::size_t size() const noexcept { return kinds_.size(); }
    Directedness directedness() const noexcept { return directedness_; }
    bool directed() const noexcept { return directedness_ == Directedness::directed; }

    VertexKind kind(VertexId v) const { return kinds_.at(v); }
    bool is_planet(VertexId v) const { return kind(v) == VertexKind::planet; }
    bool is_black_hole(VertexId v) const { return kind(v) == VertexKind::black_hole; }
    const std::vector<VertexKind>& kinds() const noexcept { return kinds_; }
    std::size_t num_black_holes() const;

    std::span<const VertexId> out(VertexId v) const { return out_.at(v); }
    std::span<const VertexId> in(VertexId v) const { return in_.at(v); }
    /// Neighbours in the underlying undirected graph.
    std::span<const VertexId> neighbors(VertexId v) const { return nbr_.at(v); }

    bool has_arc(VertexId u, VertexId v) const;
    /// Adjacent in the underlying undirected graph.
    bool adjacent(VertexId u, VertexId v) const;

    /// All stored arcs, sorted. For undirected graphs both orientations appear.
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }
    /// Arcs for directed graphs, edges (u < v) for undirected ones.
    std::vector<Arc> edges() const;

    bool operator==(const GalacticDigraph& other) const {
        return directedness_ == other.directedness_ && kinds_ == other.kinds_ &&
               arcs_ == other.arcs_;
    }

private:
    void build(std::vector<Arc> arcs);

    std::vector<VertexKind> kinds_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<VertexId>> out_;
    std::vector<std::vector<VertexId>> in_;
    std::vector<std::vector<VertexId>> nbr_;
    Directedness directedness_ = Directedness::directed;
};

/// Result of merging a vertex set into one new black hole.
struct CollapseMap {
    GalacticDigraph source;
    GalacticDigraph target;
    /// source vertex -> target vertex; total and surjective.
    std::vector<VertexId> f;
    VertexId hole = no_vertex;

    /// Source vertices mapped onto the hole.
    VertexSet collapsed() const;
    /// Inverse of `f` on target vertices other than the hole, `no_vertex` on the hole.
    std::vector<VertexId> inverse() const;
};

/// Collapses `set` into a single black hole. Untouched vertices keep their
/// relative order and are renumbered densely; the hole is the last vertex.
/// Internal arcs vanish, parallel arcs are merged.
CollapseMap collapse(const GalacticDigraph& g, std::span<const VertexId> set);

/// Planets among `vertices` form an independent set of the underlying graph.
/// Black holes are ignored. Duplicate planets count as a conflict.
bool is_independent(const GalacticDigraph& g, std::span<const VertexId> vertices);

bool is_dag(const GalacticDigraph& g);
/// Longest-path layering: layer(v) = vertices on a longest path ending at v.
std::vector<int> layers(const GalacticDigraph& g);
/// Vertices on a longest directed path.
int depth(const GalacticDigraph& g);
/// A topological order, or an empty vector when `g` has a cycle.
std::vector<VertexId> topological_order(const GalacticDigraph& g);

bool no_adjacent_black_holes(const GalacticDigraph& g);

/// ISR-DTS instance. Tokens are numbered by position in `start`.
struct Instance {
    GalacticDigraph graph;
    VertexSet start;
    VertexSet target;

    std::size_t k() const noexcept { return start.size(); }
};

/// Throws std::invalid_argument describing the first broken instance invariant.
void check_instance(const Instance& inst);

/// Sorted unique copy of `v`.
VertexSet make_set(std::vector<VertexId> v);

}  // namespace isr
