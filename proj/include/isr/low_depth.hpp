#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isr/galactic_graph.hpp"
#include "isr/oracle.hpp"

namespace isr {

/// Greedy solver for DAGs of depth at most 2. Repeatedly slides a token onto a
/// destination whose only occupied neighbour is an unmoved start vertex with an
/// arc towards it; fails as soon as no such destination exists.
/// Throws std::invalid_argument if the graph is cyclic or deeper than 2.
SearchStats solve_depth2(const Instance& inst);

struct Rewrite {
    enum class Action { remove, add_successor, shortcut };

    Action action;
    /// Vertex of the operation's input instance (for add_successor: the
    /// destination whose mark moved to the new vertex).
    VertexId vertex;
    std::string reason;
};

std::string to_string(const Rewrite& r);

struct KernelResult {
    Instance instance;
    std::vector<Rewrite> trace;
    std::optional<Verdict> verdict_shortcut;
    /// Result vertex -> input vertex. Vertices added for a destination map to
    /// that destination.
    std::vector<VertexId> origin;
    /// Input vertices in S ∩ D that were removed while holding their token.
    VertexSet pinned;
};

/// Rewrites a depth-≤3 instance into an equivalent one whose first layer is
/// exactly S and whose third layer is exactly D, or decides it outright.
KernelResult normalize_depth3(const Instance& inst);

/// Exhaustively removes vertices outside S ∪ D whose underlying neighbourhood
/// equals that of a lower-numbered such vertex.
KernelResult apply_rule_same_neighborhood(const Instance& inst);

/// normalize_depth3 followed by apply_rule_same_neighborhood. The result has at
/// most 2k + 4^k vertices.
KernelResult kernelize_depth3(const Instance& inst);

/// Turns a witness for `kernel.instance` into one for `original`.
ReconfigSequence lift_kernel_witness(const Instance& original, const KernelResult& kernel,
                                     const ReconfigSequence& witness);

}  // namespace isr
