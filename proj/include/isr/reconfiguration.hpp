#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isr/galactic_graph.hpp"

namespace isr {

using TokenId = std::size_t;

/// Token placement: entry t is the vertex holding token t.
using Configuration = std::vector<VertexId>;
using ReconfigSequence = std::vector<Configuration>;

struct Violation {
    std::size_t step;
    std::string reason;
};

/// Configuration invariants: tokens on distinct planets, occupied planets
/// independent. Any number of tokens may share a black hole.
std::optional<std::string> check_configuration(const GalacticDigraph& g, const Configuration& c);

/// Structural check of a labeled sequence: every configuration valid, and
/// consecutive configurations differ in exactly one token moving along an arc.
/// Throws std::invalid_argument if a vertex id is outside the graph.
std::optional<Violation> check_sequence(const GalacticDigraph& g, const ReconfigSequence& seq);

/// `check_sequence` plus: first configuration occupies `start`, last occupies
/// `target` (as vertex sets, labels forgotten).
std::optional<Violation> check_solution(const GalacticDigraph& g, const ReconfigSequence& seq,
                                        std::span<const VertexId> start,
                                        std::span<const VertexId> target);

bool validate_sequence(const GalacticDigraph& g, const ReconfigSequence& seq,
                       std::span<const VertexId> start, std::span<const VertexId> target);

/// Image of a sequence under a vertex map with consecutive duplicates removed.
/// index_map[i] is the position of source configuration i in the result.
struct CollapsedSequence {
    ReconfigSequence sequence;
    std::vector<std::size_t> index_map;
};

Configuration map_configuration(const Configuration& c, std::span<const VertexId> f);
CollapsedSequence collapse_sequence(const ReconfigSequence& seq, std::span<const VertexId> f);
CollapsedSequence collapse_sequence(const ReconfigSequence& seq, const CollapseMap& cm);

/// Maximum over (planet, token) of how often the token enters the planet,
/// counting an initial placement as one entry. Black holes are not counted.
int iteration_of(const GalacticDigraph& g, const ReconfigSequence& seq);

/// Inputs of the gluing construction. G is `to_u.source` (= `to_v.source`);
/// `to_u` collapses U, `to_v` collapses V. The two common maps send G⊙U and
/// G⊙V onto one shared numbering of G⊙U⊙V.
struct GlueContext {
    const CollapseMap& to_u;
    const CollapseMap& to_v;
    std::span<const VertexId> u_to_common;
    std::span<const VertexId> v_to_common;
};

/// Builds a sequence over G that collapses to `alpha` over G⊙U and to `beta`
/// over G⊙V. Both inputs must collapse to the same sequence over G⊙U⊙V; U and
/// V must be disjoint and non-adjacent. Throws std::invalid_argument otherwise.
ReconfigSequence glue(const ReconfigSequence& alpha, const ReconfigSequence& beta,
                      const GlueContext& ctx);

}  // namespace isr
