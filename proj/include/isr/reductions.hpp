#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "isr/galactic_graph.hpp"
#include "isr/reconfiguration.hpp"

namespace isr {

/// 3-CNF formula. Literals are signed 1-based variable indices.
struct Cnf3 {
    int num_vars = 0;
    std::vector<std::array<int, 3>> clauses;
};

/// Throws std::invalid_argument on a zero literal or a variable out of range.
void check_cnf(const Cnf3& phi);
/// assignment[x-1] is the value of variable x.
bool satisfies(const Cnf3& phi, const std::vector<bool>& assignment);

/// DIMACS CNF. Clauses shorter than three literals are padded by repeating
/// their last literal; longer clauses and empty clauses are rejected.
Cnf3 parse_dimacs(std::string_view text);
void write_dimacs(std::ostream& out, const Cnf3& phi);

/// Output of the 3-SAT gadget construction. Vertices are laid out as
///   w, w', then per variable x: x_s, x_p, ~x_p, x_t,
///   then per clause c: c_s, slot 1, slot 2, slot 3, c_t,
///   then per literal (x1, ~x1, x2, ~x2, ...): the literal vertex and its primed copy.
struct SatReduction {
    Cnf3 formula;
    Instance instance;
    VertexId w = 0, w_prime = 1;
    /// x_s, x_p, ~x_p, x_t.
    std::vector<std::array<VertexId, 4>> variable;
    /// c_s, slots, c_t.
    std::vector<std::array<VertexId, 5>> clause;
    /// Literal vertex and primed copy, indexed by literal_index().
    std::vector<std::array<VertexId, 2>> literal;
    std::vector<std::string> roles;

    static std::size_t literal_index(int lit) {
        return 2 * static_cast<std::size_t>(lit > 0 ? lit - 1 : -lit - 1) + (lit < 0 ? 1 : 0);
    }
};

/// Depth-3 ISR-DTS instance that is positive iff `phi` is satisfiable.
SatReduction reduce_3sat(const Cnf3& phi);

/// Reads the assignment off the first configuration that occupies w': a
/// variable is true iff its positive primed literal vertex holds a token.
/// Throws std::invalid_argument if `witness` does not solve the instance.
std::vector<bool> extract_assignment(const SatReduction& red, const ReconfigSequence& witness);

/// The schedule of the completeness argument for a satisfying assignment.
ReconfigSequence sat_witness(const SatReduction& red, const std::vector<bool>& assignment);

/// Output of the independent-set construction on an n-vertex graph with
/// parameter k. Vertices are laid out as S1, S2, S3 (k each), A, B, C, Q
/// (k·n each, copy i of vertex v at offset i·n + v), D1, D2, D3 (k each),
/// then x, x', y, y', z, z'.
struct IsReduction {
    std::size_t n = 0;
    std::size_t k = 0;
    Instance instance;
    std::vector<std::string> roles;

    enum Bloc { bloc_a, bloc_b, bloc_c, bloc_q };
    enum Clock { clock_x, clock_x_prime, clock_y, clock_y_prime, clock_z, clock_z_prime };

    /// Start vertex s_{which,i}, which in 1..3.
    VertexId s(std::size_t which, std::size_t i) const {
        return static_cast<VertexId>((which - 1) * k + i);
    }
    VertexId copy(Bloc b, std::size_t i, std::size_t v) const {
        return static_cast<VertexId>(3 * k + static_cast<std::size_t>(b) * k * n + i * n + v);
    }
    /// Destination vertex d_{which,i}, which in 1..3.
    VertexId d(std::size_t which, std::size_t i) const {
        return static_cast<VertexId>(3 * k + 4 * k * n + (which - 1) * k + i);
    }
    VertexId clock(Clock c) const {
        return static_cast<VertexId>(6 * k + 4 * k * n + static_cast<std::size_t>(c));
    }
};

/// Depth-4 ISR-DTS instance with 3k+3 tokens that is positive iff `g` has an
/// independent set of size k. `g` must be undirected.
IsReduction reduce_independent_set(const GalacticDigraph& g, std::size_t k);

/// Reads the independent set off the configuration right after the y clock
/// moves. Throws std::invalid_argument if `witness` does not solve the
/// instance, invariant_violation if the witness breaks the expected structure.
VertexSet extract_independent_set(const IsReduction& red, const ReconfigSequence& witness);

/// Five-phase schedule for an independent set given as k distinct vertices;
/// copy i is assigned to the i-th vertex.
ReconfigSequence is_witness(const IsReduction& red, const std::vector<VertexId>& independent_set);

/// Role sidecar: one `r <vertex> <role>` line per vertex, 1-indexed.
void write_roles(std::ostream& out, const std::vector<std::string>& roles);

}  // namespace isr
