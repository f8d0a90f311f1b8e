#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "isr/galactic_graph.hpp"

namespace isr {

/// A PACE `.td` file as written: bags keep their file order (1-indexed ids in
/// text, 0-indexed here) and edges keep theirs.
struct TdFile {
    std::size_t num_vertices = 0;
    std::vector<std::vector<VertexId>> bags;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    /// Largest bag size minus one (-1 for no bags is reported as 0).
    std::size_t width() const;
};

/// Syntax only; throws parse_error. Semantic checks live in validate().
TdFile parse_td_file(std::string_view text);
/// Inverse of parse_td_file for files without comments and with single spaces.
void write_td(std::ostream& out, const TdFile& td);
std::string format_td(const TdFile& td);

class invalid_decomposition : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Checks the tree shape, vertex coverage, arc coverage and connectivity of
/// every vertex's occurrences. Throws invalid_decomposition naming the culprit.
void validate(const TdFile& td, const GalacticDigraph& g);

/// Rooted decomposition in which every internal node has exactly two children.
struct TreeDecomposition {
    static constexpr std::size_t none = ~std::size_t{0};

    struct Node {
        VertexSet bag;
        std::size_t parent = none;
        std::vector<std::size_t> children;
        /// Bag of the input file this node copies.
        std::size_t source_bag = none;
    };

    std::vector<Node> nodes;
    std::size_t root = 0;
    std::size_t num_vertices = 0;
    std::size_t width = 0;

    bool is_leaf(std::size_t x) const { return nodes.at(x).children.empty(); }
    /// Children before parents.
    std::vector<std::size_t> postorder() const;
};

/// Roots `td` at `root_bag` and pads it to a binary tree with duplicate-bag
/// nodes. Expects a validated file.
TreeDecomposition make_rooted_binary(const TdFile& td, std::size_t root_bag = 0);

/// parse_td_file + validate + make_rooted_binary.
TreeDecomposition parse_td(std::string_view text, const GalacticDigraph& g,
                           std::size_t root_bag = 0);

struct NodeSets {
    /// Union of the bags in the subtree of x.
    VertexSet cone;
    /// bag(x) ∩ bag(parent(x)); empty at the root.
    VertexSet adh;
    /// bag(x) ∖ adh(x).
    VertexSet mrg;
    /// cone(x) ∖ adh(x).
    VertexSet comp;
};

NodeSets node_sets(const TreeDecomposition& td, std::size_t x);
std::vector<NodeSets> all_node_sets(const TreeDecomposition& td);

/// Greedy min-degree elimination on the underlying undirected graph. No
/// optimality guarantee.
TdFile heuristic_decomposition(const GalacticDigraph& g);

/// A quotient of the input graph: every input vertex maps to one view vertex.
struct View {
    GalacticDigraph graph;
    /// Input vertex -> view vertex.
    std::vector<VertexId> from_root;
    /// View vertex -> some input vertex mapped onto it.
    std::vector<VertexId> rep;
};

/// The input graph as a view of itself.
View identity_view(const GalacticDigraph& g);
/// The view obtained by collapsing `cm.source` (which must be `base.graph`).
View apply_collapse(const View& base, const CollapseMap& cm);
/// Vertex map from `fine` to `coarse`; `coarse` must be a quotient of `fine`.
std::vector<VertexId> refine_map(const View& fine, const View& coarse);

/// significant(x) = G ⊙ (V ∖ cone(x)), right_significant = significant ⊙ comp(y1),
/// hull = right_significant ⊙ comp(y2), warp = hull ⊙ (mrg(x) ∪ child holes),
/// which equals significant ⊙ comp(x). Empty collapse sets are skipped, in which
/// case the corresponding map is absent and the graphs coincide.
struct CollapsedViews {
    std::size_t node = 0;
    NodeSets sets;

    View significant;
    View right_significant;
    View hull;
    View warp;

    std::optional<CollapseMap> to_significant;     // G -> significant
    std::optional<CollapseMap> to_right;           // significant -> right_significant
    std::optional<CollapseMap> to_hull;            // right_significant -> hull
    std::optional<CollapseMap> to_warp;            // hull -> warp

    /// In hull numbering.
    std::optional<VertexId> hull_above, hull_left, hull_right;
    /// In warp numbering.
    std::optional<VertexId> warp_above, warp_below;
};

CollapsedViews build_views(const GalacticDigraph& g, const TreeDecomposition& td, std::size_t x);
std::vector<CollapsedViews> build_all_views(const GalacticDigraph& g, const TreeDecomposition& td);

}  // namespace isr
