#include "isr/reductions.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "isr/errors.hpp"

namespace isr {

void check_cnf(const Cnf3& phi) {
    if (phi.num_vars < 0) throw std::invalid_argument("negative variable count");
    for (const auto& c : phi.clauses)
        for (int lit : c)
            if (lit == 0 || std::abs(lit) > phi.num_vars)
                throw std::invalid_argument("literal " + std::to_string(lit) + " out of range");
}

bool satisfies(const Cnf3& phi, const std::vector<bool>& assignment) {
    for (const auto& c : phi.clauses) {
        bool sat = false;
        for (int lit : c) sat = sat || assignment.at(static_cast<std::size_t>(std::abs(lit) - 1)) == (lit > 0);
        if (!sat) return false;
    }
    return true;
}

Cnf3 parse_dimacs(std::string_view text) {
    Cnf3 phi;
    bool have_header = false;
    std::size_t declared = 0;
    std::vector<int> pending;
    std::size_t pending_line = 0;
    std::istringstream in{std::string(text)};
    std::size_t number = 0;
    for (std::string line; std::getline(in, line);) {
        ++number;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first == "c") continue;
        if (first == "%") break;
        if (first == "p") {
            std::string fmt;
            long vars = -1, clauses = -1;
            if (have_header || !(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 || clauses < 0)
                throw parse_error(number, "expected a single 'p cnf <vars> <clauses>' header");
            phi.num_vars = static_cast<int>(vars);
            declared = static_cast<std::size_t>(clauses);
            have_header = true;
            continue;
        }
        if (!have_header) throw parse_error(number, "clause before the 'p cnf' header");
        std::istringstream all(line);
        for (std::string tok; all >> tok;) {
            int lit = 0;
            try {
                std::size_t used = 0;
                lit = std::stoi(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw parse_error(number, "expected a literal, got '" + tok + "'");
            }
            if (pending.empty()) pending_line = number;
            if (lit != 0) {
                if (std::abs(lit) > phi.num_vars)
                    throw parse_error(number, "variable " + std::to_string(std::abs(lit)) +
                                                  " exceeds the declared count");
                pending.push_back(lit);
                continue;
            }
            if (pending.empty()) throw parse_error(number, "empty clause");
            if (pending.size() > 3)
                throw parse_error(pending_line, "clause with more than three literals");
            while (pending.size() < 3) pending.push_back(pending.back());
            phi.clauses.push_back({pending[0], pending[1], pending[2]});
            pending.clear();
        }
    }
    if (!have_header) throw parse_error(0, "missing 'p cnf' header");
    if (!pending.empty()) throw parse_error(pending_line, "clause not terminated by 0");
    if (phi.clauses.size() != declared)
        throw parse_error(0, "header declares " + std::to_string(declared) + " clauses, found " +
                                 std::to_string(phi.clauses.size()));
    return phi;
}

void write_dimacs(std::ostream& out, const Cnf3& phi) {
    out << "p cnf " << phi.num_vars << ' ' << phi.clauses.size() << '\n';
    for (const auto& c : phi.clauses) out << c[0] << ' ' << c[1] << ' ' << c[2] << " 0\n";
}

namespace {

std::string literal_name(int lit) {
    return (lit < 0 ? "~x" : "x") + std::to_string(std::abs(lit));
}

// Moves the token sitting on `from` to `to`, appending the new configuration.
void slide(ReconfigSequence& seq, VertexId from, VertexId to) {
    Configuration c = seq.back();
    auto it = std::find(c.begin(), c.end(), from);
    if (it == c.end()) throw std::logic_error("no token on the source vertex");
    *it = to;
    seq.push_back(std::move(c));
}

bool occupied(const Configuration& c, VertexId v) {
    return std::find(c.begin(), c.end(), v) != c.end();
}

void require_solution(const Instance& inst, const ReconfigSequence& witness) {
    if (witness.empty() || witness.front().size() != inst.k())
        throw std::invalid_argument("witness does not match the instance");
    if (auto bad = check_solution(inst.graph, witness, inst.start, inst.target))
        throw std::invalid_argument("witness invalid at step " + std::to_string(bad->step) + ": " +
                                    bad->reason);
}

}  // namespace

SatReduction reduce_3sat(const Cnf3& phi) {
    check_cnf(phi);
    SatReduction r;
    r.formula = phi;
    const auto nv = static_cast<std::size_t>(phi.num_vars);
    VertexId next = 0;
    auto add = [&](std::string role) {
        r.roles.push_back(std::move(role));
        return next++;
    };
    r.w = add("w");
    r.w_prime = add("w'");
    for (std::size_t x = 1; x <= nv; ++x) {
        const auto name = "x" + std::to_string(x);
        r.variable.push_back({add(name + ".s"), add(name + ".p"), add("~" + name + ".p"), add(name + ".t")});
    }
    for (std::size_t c = 1; c <= phi.clauses.size(); ++c) {
        const auto name = "c" + std::to_string(c);
        const auto& lits = phi.clauses[c - 1];
        r.clause.push_back({add(name + ".s"), add(name + ".slot1:" + literal_name(lits[0])),
                            add(name + ".slot2:" + literal_name(lits[1])),
                            add(name + ".slot3:" + literal_name(lits[2])), add(name + ".t")});
    }
    for (std::size_t x = 1; x <= nv; ++x)
        for (int sign : {1, -1}) {
            const auto name = literal_name(sign * static_cast<int>(x));
            r.literal.push_back({add("lit:" + name), add("lit:" + name + "'")});
        }

    std::vector<Arc> arcs{{r.w, r.w_prime}};
    std::vector<VertexId> start{r.w}, target{r.w_prime};
    for (std::size_t x = 0; x < nv; ++x) {
        const auto& [xs, xp, nxp, xt] = r.variable[x];
        arcs.insert(arcs.end(), {{xs, xp}, {xs, nxp}, {xp, xt}, {nxp, xt}, {r.w, xt}});
        start.push_back(xs);
        target.push_back(xt);
        // The primed literal is blocked while the opposite choice holds the token.
        arcs.emplace_back(nxp, r.literal[2 * x][1]);
        arcs.emplace_back(xp, r.literal[2 * x + 1][1]);
    }
    for (std::size_t c = 0; c < phi.clauses.size(); ++c) {
        const auto& cl = r.clause[c];
        for (int s = 1; s <= 3; ++s) {
            arcs.emplace_back(cl[0], cl[s]);
            arcs.emplace_back(cl[s], cl[4]);
            arcs.emplace_back(r.literal[SatReduction::literal_index(phi.clauses[c][s - 1])][0], cl[s]);
        }
        arcs.emplace_back(cl[0], r.w_prime);
        start.push_back(cl[0]);
        target.push_back(cl[4]);
    }
    for (const auto& [l, lp] : r.literal) {
        arcs.emplace_back(l, lp);
        start.push_back(l);
        target.push_back(lp);
    }
    r.instance.graph = GalacticDigraph(next, std::move(arcs));
    r.instance.start = make_set(std::move(start));
    r.instance.target = make_set(std::move(target));
    return r;
}

std::vector<bool> extract_assignment(const SatReduction& red, const ReconfigSequence& witness) {
    require_solution(red.instance, witness);
    for (const auto& c : witness) {
        if (!occupied(c, red.w_prime)) continue;
        std::vector<bool> sigma(static_cast<std::size_t>(red.formula.num_vars));
        for (std::size_t x = 0; x < sigma.size(); ++x) sigma[x] = occupied(c, red.literal[2 * x][1]);
        return sigma;
    }
    throw invariant_violation("no configuration occupies w'");
}

ReconfigSequence sat_witness(const SatReduction& red, const std::vector<bool>& assignment) {
    const auto& phi = red.formula;
    if (assignment.size() != static_cast<std::size_t>(phi.num_vars))
        throw std::invalid_argument("assignment size differs from the variable count");
    if (!satisfies(phi, assignment)) throw std::invalid_argument("assignment does not satisfy the formula");
    ReconfigSequence seq{Configuration(red.instance.start.begin(), red.instance.start.end())};
    const auto nv = assignment.size();
    for (std::size_t x = 0; x < nv; ++x)
        slide(seq, red.variable[x][0], assignment[x] ? red.variable[x][1] : red.variable[x][2]);
    std::vector<bool> moved(red.literal.size(), false);
    for (std::size_t x = 0; x < nv; ++x) {
        const auto idx = 2 * x + (assignment[x] ? 0 : 1);
        slide(seq, red.literal[idx][0], red.literal[idx][1]);
        moved[idx] = true;
    }
    for (std::size_t c = 0; c < phi.clauses.size(); ++c) {
        int slot = 0;
        for (int s = 0; s < 3 && slot == 0; ++s) {
            const int lit = phi.clauses[c][s];
            if (assignment[static_cast<std::size_t>(std::abs(lit) - 1)] == (lit > 0)) slot = s + 1;
        }
        const auto& cl = red.clause[c];
        slide(seq, cl[0], cl[slot]);
        slide(seq, cl[slot], cl[4]);
    }
    slide(seq, red.w, red.w_prime);
    for (std::size_t x = 0; x < nv; ++x)
        slide(seq, assignment[x] ? red.variable[x][1] : red.variable[x][2], red.variable[x][3]);
    for (std::size_t i = 0; i < red.literal.size(); ++i)
        if (!moved[i]) slide(seq, red.literal[i][0], red.literal[i][1]);
    return seq;
}

IsReduction reduce_independent_set(const GalacticDigraph& g, std::size_t k) {
    if (g.directed()) throw std::invalid_argument("reduce_independent_set: graph must be undirected");
    if (k < 1) throw std::invalid_argument("reduce_independent_set: k must be positive");
    IsReduction r;
    r.n = g.size();
    r.k = k;
    const auto n = r.n;
    const auto total = 4 * k * n + 6 * k + 6;
    r.roles.resize(total);
    using B = IsReduction;
    const char* bloc_names[] = {"a", "b", "c", "q"};
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 1; j <= 3; ++j) {
            r.roles[r.s(j, i)] = "s" + std::to_string(j) + "," + std::to_string(i + 1);
            r.roles[r.d(j, i)] = "d" + std::to_string(j) + "," + std::to_string(i + 1);
        }
        for (int b = 0; b < 4; ++b)
            for (std::size_t v = 0; v < n; ++v)
                r.roles[r.copy(static_cast<B::Bloc>(b), i, v)] =
                    std::string(bloc_names[b]) + std::to_string(i + 1) + "," + std::to_string(v + 1);
    }
    const char* clock_names[] = {"x", "x'", "y", "y'", "z", "z'"};
    for (int c = 0; c < 6; ++c) r.roles[r.clock(static_cast<B::Clock>(c))] = clock_names[c];

    std::vector<Arc> arcs;
    const auto x = r.clock(B::clock_x), xp = r.clock(B::clock_x_prime);
    const auto y = r.clock(B::clock_y), yp = r.clock(B::clock_y_prime);
    const auto z = r.clock(B::clock_z), zp = r.clock(B::clock_z_prime);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t v = 0; v < n; ++v) {
            const auto a = r.copy(B::bloc_a, i, v), b = r.copy(B::bloc_b, i, v);
            const auto c = r.copy(B::bloc_c, i, v), q = r.copy(B::bloc_q, i, v);
            arcs.insert(arcs.end(), {{r.s(1, i), a}, {r.s(2, i), b}, {r.s(3, i), c},
                                     {q, r.d(1, i)}, {b, r.d(2, i)}, {c, r.d(3, i)}, {a, q},
                                     {y, q}, {zp, q}});
            for (std::size_t u = 0; u < n; ++u)
                if (u != v) {
                    arcs.emplace_back(a, r.copy(B::bloc_c, i, u));
                    arcs.emplace_back(b, r.copy(B::bloc_c, i, u));
                }
            // Closed neighbourhood: choosing the same vertex twice is blocked too.
            for (std::size_t j = 0; j < k; ++j) {
                if (j == i) continue;
                arcs.emplace_back(b, r.copy(B::bloc_q, j, v));
                for (VertexId u : g.neighbors(static_cast<VertexId>(v)))
                    arcs.emplace_back(b, r.copy(B::bloc_q, j, u));
            }
        }
        for (std::size_t j = 1; j <= 3; ++j) arcs.emplace_back(r.s(j, i), xp);
        arcs.emplace_back(y, r.d(3, i));
        arcs.emplace_back(z, r.d(2, i));
    }
    arcs.insert(arcs.end(), {{x, xp}, {yp, x}, {y, yp}, {z, zp}});

    std::vector<VertexId> start{x, y, z}, target{xp, yp, zp};
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 1; j <= 3; ++j) {
            start.push_back(r.s(j, i));
            target.push_back(r.d(j, i));
        }
    r.instance.graph = GalacticDigraph(total, std::move(arcs));
    r.instance.start = make_set(std::move(start));
    r.instance.target = make_set(std::move(target));
    return r;
}

VertexSet extract_independent_set(const IsReduction& red, const ReconfigSequence& witness) {
    require_solution(red.instance, witness);
    const auto yp = red.clock(IsReduction::clock_y_prime);
    auto it = std::find_if(witness.begin(), witness.end(),
                           [&](const Configuration& c) { return occupied(c, yp); });
    if (it == witness.end()) throw invariant_violation("the y clock never moves");
    const auto& c = *it;
    std::vector<VertexId> chosen;
    for (std::size_t i = 0; i < red.k; ++i) {
        std::size_t found = 0;
        VertexId vi = no_vertex;
        for (std::size_t v = 0; v < red.n; ++v)
            if (occupied(c, red.copy(IsReduction::bloc_c, i, v))) {
                ++found;
                vi = static_cast<VertexId>(v);
            }
        if (found != 1)
            throw invariant_violation("copy " + std::to_string(i + 1) + " of C holds " +
                                      std::to_string(found) + " tokens when y moves");
        if (!occupied(c, red.copy(IsReduction::bloc_a, i, vi)) ||
            !occupied(c, red.copy(IsReduction::bloc_b, i, vi)))
            throw invariant_violation("copy " + std::to_string(i + 1) +
                                      " of A or B disagrees with C when y moves");
        chosen.push_back(vi);
    }
    auto set = make_set(chosen);
    if (set.size() != red.k) throw invariant_violation("a vertex was chosen twice");
    return set;
}

ReconfigSequence is_witness(const IsReduction& red, const std::vector<VertexId>& independent_set) {
    if (independent_set.size() != red.k)
        throw std::invalid_argument("is_witness: expected exactly k vertices");
    for (VertexId v : independent_set)
        if (v >= red.n) throw std::invalid_argument("is_witness: vertex out of range");
    using B = IsReduction;
    const auto& vs = independent_set;
    ReconfigSequence seq{Configuration(red.instance.start.begin(), red.instance.start.end())};
    for (std::size_t i = 0; i < red.k; ++i) {
        slide(seq, red.s(3, i), red.copy(B::bloc_c, i, vs[i]));
        slide(seq, red.s(1, i), red.copy(B::bloc_a, i, vs[i]));
        slide(seq, red.s(2, i), red.copy(B::bloc_b, i, vs[i]));
    }
    slide(seq, red.clock(B::clock_x), red.clock(B::clock_x_prime));
    slide(seq, red.clock(B::clock_y), red.clock(B::clock_y_prime));
    for (std::size_t i = 0; i < red.k; ++i) {
        slide(seq, red.copy(B::bloc_a, i, vs[i]), red.copy(B::bloc_q, i, vs[i]));
        slide(seq, red.copy(B::bloc_q, i, vs[i]), red.d(1, i));
    }
    slide(seq, red.clock(B::clock_z), red.clock(B::clock_z_prime));
    for (std::size_t i = 0; i < red.k; ++i) {
        slide(seq, red.copy(B::bloc_b, i, vs[i]), red.d(2, i));
        slide(seq, red.copy(B::bloc_c, i, vs[i]), red.d(3, i));
    }
    return seq;
}

void write_roles(std::ostream& out, const std::vector<std::string>& roles) {
    for (std::size_t v = 0; v < roles.size(); ++v) out << "r " << v + 1 << ' ' << roles[v] << '\n';
}

}  // namespace isr
