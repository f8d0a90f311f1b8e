#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "isr/galactic_graph.hpp"
#include "isr/oracle.hpp"
#include "isr/reconfiguration.hpp"
#include "isr/treedec.hpp"

namespace isr {

/// Minimal deterministic automaton accepting a finite set of labeled sequences
/// that share their first configuration. A transition label is one token move
/// (token, destination vertex); state 0 reads the first configuration.
class SequenceAutomaton {
public:
    static constexpr std::uint32_t npos = ~std::uint32_t{0};
    using Label = std::uint64_t;

    static Label label(std::uint32_t token, VertexId vertex) {
        return (Label{token} << 32) | vertex;
    }
    static std::uint32_t token_of(Label l) { return static_cast<std::uint32_t>(l >> 32); }
    static VertexId vertex_of(Label l) { return static_cast<VertexId>(l & 0xffffffffu); }

    struct State {
        bool accept = false;
        /// Sorted by label.
        std::vector<std::pair<Label, std::uint32_t>> next;
    };

    SequenceAutomaton() = default;
    SequenceAutomaton(Configuration first, std::vector<State> states);

    const Configuration& first() const noexcept { return first_; }
    std::size_t size() const noexcept { return states_.size(); }
    const State& state(std::uint32_t s) const { return states_[s]; }

    std::uint32_t step(std::uint32_t s, std::uint32_t token, VertexId vertex) const;
    bool accepts(const ReconfigSequence& seq) const;
    bool empty() const;
    /// False if some accepted sequences are arbitrarily long.
    bool finite() const;

    /// Number of accepted sequences (infinity when not finite).
    double count() const;
    /// Configurations in the longest accepted sequence (0 when empty, the
    /// largest size_t when not finite).
    std::size_t longest() const;
    /// Some accepted sequence with the fewest moves. Requires !empty().
    ReconfigSequence shortest() const;
    /// Every accepted sequence, sorted. Throws resource_exhausted past `limit`
    /// sequences or `limit` configurations in one sequence.
    std::vector<ReconfigSequence> sequences(std::size_t limit = 1'000'000) const;
    /// Same, restricted to sequences all of whose prefixes satisfy `keep`.
    std::vector<ReconfigSequence> sequences(
        std::size_t limit, const std::function<bool(const ReconfigSequence&)>& keep) const;

private:
    Configuration first_;
    std::vector<State> states_;
};

/// Sequences over warp(x) that collapse from sequences over significant(x)
/// running from the image of S (token t on the t-th start vertex) to the image
/// of D, held as a minimal automaton. In iteration mode the entry bound is
/// enforced only on planets that warp(x) collapses; the planets kept in warp(x)
/// are bounded by an ancestor, so the profile may be infinite.
struct Profile {
    std::size_t node = 0;
    SequenceAutomaton automaton;

    bool empty() const { return automaton.empty(); }
    double count() const { return automaton.count(); }
    bool contains(const ReconfigSequence& seq) const { return automaton.accepts(seq); }
    std::vector<ReconfigSequence> sequences(std::size_t limit = 1'000'000) const {
        return automaton.sequences(limit);
    }
};

/// Position of every vertex in one fixed topological order of a DAG.
std::vector<std::uint32_t> topological_rank(const GalacticDigraph& g);

/// True if, in `seq` over view `h`, every token enters planets in strictly
/// increasing rank, starting above the rank of its own start vertex. Every
/// sequence of the input DAG satisfies this; collapsed sequences may not.
bool respects_order(const Instance& inst, const View& h, const std::vector<std::uint32_t>& rank,
                    const ReconfigSequence& seq);

struct DpOptions {
    /// dag_collapse: tokens enter planets in topological order (DAGs only).
    /// iteration: each token enters each planet at most iota times.
    PruneRules rules = PruneRules::dag();
    /// Automaton states per profile.
    std::size_t profile_cap = 1'000'000;
    /// Search states per node.
    std::size_t state_budget = 4'000'000;
};

struct NodeStats {
    std::size_t node = 0;
    std::size_t automaton_states = 0;
    double sequences = 0;
    std::size_t search_states = 0;
};

Profile leaf_profile(const Instance& inst, const CollapsedViews& x, const DpOptions& opts = {},
                     NodeStats* stats = nullptr);

/// Profile of an internal node: collapses to warp(x) of every sequence over
/// hull(x) whose collapses to warp(y1) and warp(y2) lie in the child profiles.
Profile combine_profiles(const Instance& inst, const CollapsedViews& x, const CollapsedViews& y1,
                         const Profile& p1, const CollapsedViews& y2, const Profile& p2,
                         const DpOptions& opts = {}, NodeStats* stats = nullptr);

/// Same sets as leaf_profile / combine_profiles, computed by listing every
/// sequence over the search graph and filtering. Exponentially slower; meant
/// for cross-checking. `children` is empty for leaves. In iteration mode only
/// the profile members that also enter each warp planet at most iota times
/// are listed.
struct ChildProfile {
    const CollapsedViews* views;
    const Profile* profile;
};
std::vector<ReconfigSequence> profile_by_enumeration(const Instance& inst, const CollapsedViews& x,
                                                     const std::vector<ChildProfile>& children,
                                                     const DpOptions& opts = {});

struct DpRun {
    DpOptions options;
    std::vector<CollapsedViews> views;
    std::vector<Profile> profiles;
    std::vector<NodeStats> node_stats;
};

/// Bottom-up profile computation over every node of `td`.
DpRun run_dp(const Instance& inst, const TreeDecomposition& td, const DpOptions& opts = {});

/// Sequence over significant(x) that collapses to `alpha`, a member of the
/// profile of x.
ReconfigSequence extract_sequence(const Instance& inst, const TreeDecomposition& td,
                                  const DpRun& run, std::size_t x, const ReconfigSequence& alpha);

/// ISR-DTS on a DAG through the profile dynamic program. Child profiles are
/// determinized on demand, only along the moves the parent search tries, and
/// the root search stops at the first solution. NodeStats then report the
/// automaton states and search states actually built (`sequences` stays 0).
/// The witness, when present, is validated against the instance.
SearchStats solve_tw(const Instance& inst, const TreeDecomposition& td, const DpOptions& opts = {},
                     std::vector<NodeStats>* node_stats = nullptr);

/// Undirected instances: is there a solution in which no token enters a vertex
/// more than `iota` times?
SearchStats solve_tw_iota(const Instance& inst, const TreeDecomposition& td, int iota,
                          DpOptions opts = {}, std::vector<NodeStats>* node_stats = nullptr);

}  // namespace isr
