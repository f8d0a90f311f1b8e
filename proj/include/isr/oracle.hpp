#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "isr/galactic_graph.hpp"
#include "isr/reconfiguration.hpp"

namespace isr {

enum class Verdict { no, yes };

const char* to_string(Verdict v);

struct SearchStats {
    std::size_t states_expanded = 0;
    std::size_t frontier_peak = 0;
    Verdict verdict = Verdict::no;
    std::optional<ReconfigSequence> witness;
};

inline constexpr std::size_t default_state_budget = 10'000'000;

/// Breadth-first search over set-level configurations. Decides ISR-DTS (or
/// ISR-TS on undirected graphs) and returns a shortest witness, labeled with
/// token t starting on the t-th smallest start vertex.
SearchStats solve_bfs(const Instance& inst, std::size_t budget = default_state_budget);

struct PruneRules {
    enum class Mode { dag_collapse, iteration };

    Mode mode = Mode::dag_collapse;
    int iota = 1;

    /// Tokens never re-enter a planet.
    static PruneRules dag() { return {Mode::dag_collapse, 1}; }
    /// A token enters each planet at most `iota` times.
    static PruneRules iteration(int iota) { return {Mode::iteration, iota}; }

    /// Length limit (configurations) implied by the prune rules.
    std::size_t length_bound(std::size_t k, std::size_t vertices) const;
};

/// True if `seq` obeys `rules` on the planets of `g`.
bool obeys(const GalacticDigraph& g, const ReconfigSequence& seq, const PruneRules& rules);

inline constexpr std::size_t default_sequence_budget = 1'000'000;

/// Calls `visit` on every valid labeled sequence starting at `start` that obeys
/// `rules`, prefixes included, in depth-first order. Requires no adjacent
/// black holes. Throws resource_exhausted after `budget` sequences.
void for_each_sequence(const GalacticDigraph& g, const Configuration& start,
                       const PruneRules& rules,
                       const std::function<void(const ReconfigSequence&)>& visit,
                       std::size_t budget = default_sequence_budget);

std::vector<ReconfigSequence> enumerate_sequences(const GalacticDigraph& g,
                                                  const Configuration& start,
                                                  const PruneRules& rules,
                                                  std::size_t budget = default_sequence_budget);

/// Decides whether an undirected instance has a solution of iteration at most
/// `iota`, by search over (labeled configuration, per-token entry counts).
SearchStats solve_iota_oracle(const Instance& inst, int iota,
                              std::size_t budget = default_state_budget);

}  // namespace isr
