#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "isr/galactic_graph.hpp"

namespace isr {

/// DAG whose vertices are spread over `layers` levels (each level non-empty
/// when n ≥ layers); arcs go from lower to higher levels with probability p.
/// Depth is at most `layers`.
GalacticDigraph random_layered_dag(std::size_t n, int layers, double p, std::mt19937_64& rng);

/// Random DAG: each pair is joined with probability p, oriented along a random
/// vertex order.
GalacticDigraph random_dag(std::size_t n, double p, std::mt19937_64& rng);

GalacticDigraph random_undirected(std::size_t n, double p, std::mt19937_64& rng);

/// Greedy random independent set of size k drawn from `candidates` in the
/// given order after a shuffle within equal `priority` values (lower first).
/// Throws std::invalid_argument if the greedy pass ends short.
VertexSet random_independent_set(const GalacticDigraph& g, std::size_t k,
                                 const std::vector<int>& priority, std::mt19937_64& rng);

/// Instance on `g` with starts biased towards early layers and destinations
/// towards late ones (for DAGs), uniformly random for undirected graphs.
/// Retries a few times before giving up with std::invalid_argument.
Instance random_instance(GalacticDigraph g, std::size_t k, std::mt19937_64& rng);

}  // namespace isr
