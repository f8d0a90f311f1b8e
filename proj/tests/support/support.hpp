#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "isr/fpt_dp.hpp"
#include "isr/galactic_graph.hpp"
#include "isr/oracle.hpp"
#include "isr/reconfiguration.hpp"
#include "isr/reductions.hpp"
#include "isr/treedec.hpp"

// Independent reference implementations and generators shared by the unit
// tests and the acceptance suite. Nothing here calls the code under test
// except to build inputs.
namespace isr::testing {

// ---- brute-force oracles -------------------------------------------------

bool brute_force_sat(const Cnf3& phi);
bool brute_force_independent_set(const GalacticDigraph& g, std::size_t k);
bool is_independent_set_of(const GalacticDigraph& g, const VertexSet& set, std::size_t k);

/// Plain breadth-first search over sorted vertex sets held in a std::map.
/// Returns the number of moves on a shortest solution, or -1.
long reference_distance(const Instance& inst);

/// Every valid labeled sequence from `start` in which each token enters each
/// planet at most `limit` times (the start counts as an entry). Recursive
/// depth-first listing written independently of the library enumerator.
std::vector<ReconfigSequence> reference_sequences(const GalacticDigraph& g, const Configuration& start,
                                                  int limit);

/// Decides whether some sequence with per-(token, planet) entries at most
/// `iota` turns start into target (undirected instances).
bool reference_iota(const Instance& inst, int iota);

/// Every token enters planets in strictly increasing rank (rank of the input
/// vertex each view vertex stands for), starting above its start vertex.
bool increasing_ranks(const Instance& inst, const View& h, const std::vector<std::uint32_t>& rank,
                      const ReconfigSequence& seq);

/// Definition of the profile of x: collapses to warp(x) of every sequence over
/// significant(x) from the image of S to the image of D. In DAG mode no token
/// re-enters a planet (and, with `ranked`, entries follow `rank`); in
/// iteration mode each planet is entered at most iota times per token.
std::set<ReconfigSequence> definitional_profile(const Instance& inst, const CollapsedViews& x,
                                                const PruneRules& rules, bool ranked,
                                                const std::vector<std::uint32_t>& rank);

/// Members of `a` in which each token enters each planet of `warp` at most
/// iota times.
std::set<ReconfigSequence> bounded_members(const SequenceAutomaton& a, const GalacticDigraph& warp,
                                           int iota);

// ---- exhaustive families -------------------------------------------------

/// One representative per isomorphism class of simple undirected graphs on n
/// vertices (n ≤ 6).
std::vector<GalacticDigraph> graphs_up_to_isomorphism(std::size_t n);

/// 3-CNF formulas with 1..max_vars variables (all used) and 1..max_clauses
/// clauses, one per class under clause order, literal order, variable
/// renaming and polarity flips.
std::vector<Cnf3> cnf_family(int max_vars, int max_clauses);

/// Depth-≤2 instances on S ∪ D only: k ≤ max_k tokens, o = |S ∩ D| shared
/// (isolated) vertices, and every orientation pattern (none, s→d, d→s) on the
/// pairs between S∖D and D∖S that keeps depth ≤ 2.
std::vector<Instance> depth2_family(std::size_t max_k);

// ---- random generators -----------------------------------------------------

/// Random DAG with random start/destination sets (starts biased early,
/// destinations late); draws a new graph until both sets fit. Needs k ≤ n.
Instance random_dag_instance(std::size_t n, std::size_t k, double p, std::mt19937_64& rng);
Instance random_depth3_instance(std::size_t n, std::size_t k, double p, std::mt19937_64& rng);
Instance random_undirected_instance(std::size_t n, std::size_t k, double p, std::mt19937_64& rng);

/// Random valid sequence of up to `steps` moves from a random valid start.
ReconfigSequence random_walk(const GalacticDigraph& g, std::size_t k, std::size_t steps,
                             std::mt19937_64& rng);

/// Random non-empty subset of `pool`.
VertexSet random_subset(const VertexSet& pool, std::mt19937_64& rng);

/// Every vertex of the path/graph in one bag.
TdFile single_bag(std::size_t n);

}  // namespace isr::testing
