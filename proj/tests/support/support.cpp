#include "support.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace isr::testing {

bool brute_force_sat(const Cnf3& phi) {
    for (unsigned bits = 0; bits < (1u << phi.num_vars); ++bits) {
        bool all = true;
        for (const auto& c : phi.clauses) {
            bool any = false;
            for (int lit : c) {
                const bool value = (bits >> (std::abs(lit) - 1)) & 1u;
                any = any || (lit > 0 ? value : !value);
            }
            all = all && any;
        }
        if (all) return true;
    }
    return false;
}

bool is_independent_set_of(const GalacticDigraph& g, const VertexSet& set, std::size_t k) {
    if (set.size() != k) return false;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (set[i] >= g.size()) return false;
        for (std::size_t j = i + 1; j < set.size(); ++j)
            if (set[i] == set[j] || g.has_arc(set[i], set[j]) || g.has_arc(set[j], set[i])) return false;
    }
    return true;
}

bool brute_force_independent_set(const GalacticDigraph& g, std::size_t k) {
    const auto n = g.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
        VertexSet set;
        for (VertexId v = 0; v < n; ++v)
            if ((mask >> v) & 1u) set.push_back(v);
        if (is_independent_set_of(g, set, k)) return true;
    }
    return false;
}

namespace {

bool conflict_free(const GalacticDigraph& g, const std::vector<VertexId>& planets) {
    for (std::size_t i = 0; i < planets.size(); ++i)
        for (std::size_t j = i + 1; j < planets.size(); ++j)
            if (planets[i] == planets[j] || g.has_arc(planets[i], planets[j]) ||
                g.has_arc(planets[j], planets[i]))
                return false;
    return true;
}

bool valid_configuration(const GalacticDigraph& g, const Configuration& c) {
    std::vector<VertexId> planets;
    for (VertexId v : c)
        if (g.kind(v) == VertexKind::planet) planets.push_back(v);
    return conflict_free(g, planets);
}

}  // namespace

long reference_distance(const Instance& inst) {
    std::map<VertexSet, long> dist;
    std::deque<VertexSet> queue{inst.start};
    dist[inst.start] = 0;
    while (!queue.empty()) {
        const auto cur = queue.front();
        queue.pop_front();
        if (cur == inst.target) return dist[cur];
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (VertexId w : inst.graph.out(cur[i])) {
                VertexSet next = cur;
                next[i] = w;
                if (!conflict_free(inst.graph, next)) continue;
                std::sort(next.begin(), next.end());
                if (dist.emplace(next, dist[cur] + 1).second) queue.push_back(next);
            }
    }
    return -1;
}

std::vector<ReconfigSequence> reference_sequences(const GalacticDigraph& g, const Configuration& start,
                                                  int limit) {
    std::vector<ReconfigSequence> all;
    ReconfigSequence path{start};
    std::map<std::pair<std::size_t, VertexId>, int> entries;
    for (std::size_t t = 0; t < start.size(); ++t)
        if (g.kind(start[t]) == VertexKind::planet) ++entries[{t, start[t]}];
    std::function<void()> dfs = [&] {
        all.push_back(path);
        const Configuration cur = path.back();
        for (std::size_t t = 0; t < cur.size(); ++t)
            for (VertexId w : g.out(cur[t])) {
                Configuration next = cur;
                next[t] = w;
                if (!valid_configuration(g, next)) continue;
                const bool planet = g.kind(w) == VertexKind::planet;
                if (planet && entries[{t, w}] >= limit) continue;
                if (planet) ++entries[{t, w}];
                path.push_back(next);
                dfs();
                path.pop_back();
                if (planet) --entries[{t, w}];
            }
    };
    dfs();
    return all;
}

bool reference_iota(const Instance& inst, int iota) {
    const auto& g = inst.graph;
    const auto k = inst.k();
    // state: positions, then per token and vertex the entry count
    std::vector<int> init(k + k * g.size(), 0);
    for (std::size_t t = 0; t < k; ++t) {
        init[t] = static_cast<int>(inst.start[t]);
        init[k + t * g.size() + inst.start[t]] = 1;
    }
    std::set<std::vector<int>> seen{init};
    std::deque<std::vector<int>> queue{init};
    while (!queue.empty()) {
        const auto cur = queue.front();
        queue.pop_front();
        VertexSet occupied(cur.begin(), cur.begin() + static_cast<long>(k));
        std::sort(occupied.begin(), occupied.end());
        if (occupied == inst.target) return true;
        for (std::size_t t = 0; t < k; ++t)
            for (VertexId w : g.out(static_cast<VertexId>(cur[t]))) {
                auto next = cur;
                next[t] = static_cast<int>(w);
                auto& count = next[k + t * g.size() + w];
                if (count >= iota) continue;
                ++count;
                Configuration c(next.begin(), next.begin() + static_cast<long>(k));
                if (!valid_configuration(g, c)) continue;
                if (seen.insert(next).second) queue.push_back(next);
            }
    }
    return false;
}

bool increasing_ranks(const Instance& inst, const View& h, const std::vector<std::uint32_t>& rank,
                      const ReconfigSequence& seq) {
    std::vector<std::uint32_t> last;
    for (VertexId s : inst.start) last.push_back(rank[s]);
    for (std::size_t i = 1; i < seq.size(); ++i)
        for (std::size_t t = 0; t < seq[i].size(); ++t) {
            const auto w = seq[i][t];
            if (w == seq[i - 1][t] || h.graph.kind(w) != VertexKind::planet) continue;
            if (rank[h.rep[w]] <= last[t]) return false;
            last[t] = rank[h.rep[w]];
        }
    return true;
}

std::set<ReconfigSequence> definitional_profile(const Instance& inst, const CollapsedViews& x,
                                                const PruneRules& rules, bool ranked,
                                                const std::vector<std::uint32_t>& rank) {
    const auto& sig = x.significant;
    std::vector<VertexId> to_warp(sig.graph.size());
    for (std::size_t o = 0; o < sig.from_root.size(); ++o) to_warp[sig.from_root[o]] = x.warp.from_root[o];
    Configuration start, target;
    for (VertexId s : inst.start) start.push_back(sig.from_root[s]);
    for (VertexId d : inst.target) target.push_back(sig.from_root[d]);
    std::sort(target.begin(), target.end());

    const int limit = rules.mode == PruneRules::Mode::dag_collapse ? 1 : rules.iota;
    std::set<ReconfigSequence> profile;
    for (const auto& seq : reference_sequences(sig.graph, start, limit)) {
        auto last = seq.back();
        std::sort(last.begin(), last.end());
        if (last != target) continue;
        if (ranked && !increasing_ranks(inst, sig, rank, seq)) continue;
        ReconfigSequence image;
        for (const auto& c : seq) {
            Configuration m;
            for (VertexId v : c) m.push_back(to_warp[v]);
            if (image.empty() || image.back() != m) image.push_back(m);
        }
        profile.insert(image);
    }
    return profile;
}

std::set<ReconfigSequence> bounded_members(const SequenceAutomaton& a, const GalacticDigraph& warp,
                                           int iota) {
    auto keep = [&](const ReconfigSequence& prefix) {
        const auto& last = prefix.back();
        const auto& prev = prefix[prefix.size() - 2];
        for (std::size_t t = 0; t < last.size(); ++t) {
            if (last[t] == prev[t] || warp.kind(last[t]) != VertexKind::planet) continue;
            int entries = prefix.front()[t] == last[t] ? 1 : 0;
            for (std::size_t i = 1; i < prefix.size(); ++i)
                if (prefix[i][t] == last[t] && prefix[i - 1][t] != last[t]) ++entries;
            if (entries > iota) return false;
        }
        return true;
    };
    const auto all = a.sequences(1'000'000, keep);
    return {all.begin(), all.end()};
}

std::vector<GalacticDigraph> graphs_up_to_isomorphism(std::size_t n) {
    if (n > 6) throw std::invalid_argument("graphs_up_to_isomorphism: n too large");
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    std::vector<std::vector<std::size_t>> relabel;  // permutation -> pair index map
    std::vector<VertexId> perm(n);
    std::iota(perm.begin(), perm.end(), VertexId{0});
    do {
        std::vector<std::size_t> m;
        for (auto [u, v] : pairs) {
            auto a = std::min(perm[u], perm[v]), b = std::max(perm[u], perm[v]);
            m.push_back(static_cast<std::size_t>(std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) - pairs.begin()));
        }
        relabel.push_back(std::move(m));
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<GalacticDigraph> graphs;
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
        bool canonical = true;
        for (const auto& m : relabel) {
            std::uint32_t image = 0;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if ((mask >> i) & 1u) image |= 1u << m[i];
            if (image < mask) {
                canonical = false;
                break;
            }
        }
        if (!canonical) continue;
        std::vector<Arc> edges;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if ((mask >> i) & 1u) edges.push_back(pairs[i]);
        graphs.emplace_back(n, std::move(edges), Directedness::undirected);
    }
    return graphs;
}

namespace {

using Clause = std::array<int, 3>;
using Formula = std::vector<Clause>;

Formula normalized(Formula f) {
    for (auto& c : f) std::sort(c.begin(), c.end());
    std::sort(f.begin(), f.end());
    return f;
}

Formula canonical_formula(const Formula& f, int vars) {
    std::vector<int> perm(static_cast<std::size_t>(vars));
    std::iota(perm.begin(), perm.end(), 1);
    Formula best;
    do {
        for (unsigned flips = 0; flips < (1u << vars); ++flips) {
            Formula g = f;
            for (auto& c : g)
                for (auto& lit : c) {
                    const int x = std::abs(lit);
                    const int sign = (lit > 0) == !((flips >> (x - 1)) & 1u) ? 1 : -1;
                    lit = sign * perm[static_cast<std::size_t>(x - 1)];
                }
            g = normalized(std::move(g));
            if (best.empty() || g < best) best = std::move(g);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

std::vector<Cnf3> cnf_family(int max_vars, int max_clauses) {
    std::vector<Cnf3> family;
    for (int vars = 1; vars <= max_vars; ++vars) {
        std::vector<int> literals;
        for (int x = 1; x <= vars; ++x) {
            literals.push_back(-x);
            literals.push_back(x);
        }
        std::sort(literals.begin(), literals.end());
        std::vector<Clause> clauses;
        const auto L = literals.size();
        for (std::size_t a = 0; a < L; ++a)
            for (std::size_t b = a; b < L; ++b)
                for (std::size_t c = b; c < L; ++c) clauses.push_back({literals[a], literals[b], literals[c]});
        std::set<Formula> seen;
        // multisets of clauses of size m, as non-decreasing index tuples
        std::function<void(std::size_t, Formula&)> pick = [&](std::size_t from, Formula& f) {
            if (!f.empty()) {
                std::set<int> used;
                for (const auto& c : f)
                    for (int lit : c) used.insert(std::abs(lit));
                if (static_cast<int>(used.size()) == vars) {
                    auto canon = canonical_formula(f, vars);
                    if (seen.insert(canon).second) family.push_back(Cnf3{vars, canon});
                }
            }
            if (static_cast<int>(f.size()) == max_clauses) return;
            for (std::size_t i = from; i < clauses.size(); ++i) {
                f.push_back(clauses[i]);
                pick(i, f);
                f.pop_back();
            }
        };
        Formula f;
        pick(0, f);
    }
    return family;
}

std::vector<Instance> depth2_family(std::size_t max_k) {
    std::vector<Instance> family;
    for (std::size_t k = 1; k <= max_k; ++k)
        for (std::size_t shared = 0; shared <= k; ++shared) {
            const auto m = k - shared;
            const auto n = 2 * m + shared;
            std::size_t patterns = 1;
            for (std::size_t i = 0; i < m * m; ++i) patterns *= 3;
            for (std::size_t code = 0; code < patterns; ++code) {
                std::vector<Arc> arcs;
                auto rest = code;
                for (VertexId s = 0; s < m; ++s)
                    for (VertexId d = 0; d < m; ++d, rest /= 3) {
                        if (rest % 3 == 1) arcs.emplace_back(s, static_cast<VertexId>(m + d));
                        if (rest % 3 == 2) arcs.emplace_back(static_cast<VertexId>(m + d), s);
                    }
                std::vector<bool> has_in(n, false), has_out(n, false);
                for (auto [u, v] : arcs) {
                    has_out[u] = true;
                    has_in[v] = true;
                }
                bool shallow = true;
                for (std::size_t v = 0; v < n; ++v) shallow = shallow && !(has_in[v] && has_out[v]);
                if (!shallow) continue;
                Instance inst;
                inst.graph = GalacticDigraph(n, std::move(arcs));
                for (VertexId v = 0; v < m; ++v) {
                    inst.start.push_back(v);
                    inst.target.push_back(static_cast<VertexId>(m + v));
                }
                for (VertexId v = 0; v < shared; ++v) {
                    inst.start.push_back(static_cast<VertexId>(2 * m + v));
                    inst.target.push_back(static_cast<VertexId>(2 * m + v));
                }
                family.push_back(std::move(inst));
            }
        }
    return family;
}

namespace {

// Greedy independent set of size k, scanning vertices by ascending key.
std::optional<VertexSet> greedy_independent(const GalacticDigraph& g, std::size_t k,
                                            const std::vector<double>& key) {
    std::vector<VertexId> order(g.size());
    std::iota(order.begin(), order.end(), VertexId{0});
    std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return key[a] < key[b]; });
    VertexSet chosen;
    for (VertexId v : order) {
        if (chosen.size() == k) break;
        bool ok = true;
        for (VertexId c : chosen) ok = ok && !g.has_arc(c, v) && !g.has_arc(v, c);
        if (ok) chosen.push_back(v);
    }
    if (chosen.size() < k) return std::nullopt;
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

// Start and destination sets biased towards low and high `position`; the
// bias fades over the attempts.
std::optional<Instance> with_sets(const GalacticDigraph& g, std::size_t k,
                                  const std::vector<double>& position, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> noise(0.0, 1.0);
    for (int attempt = 0; attempt < 40; ++attempt) {
        const double scale = 1.0 + attempt;
        std::vector<double> early(g.size()), late(g.size());
        for (VertexId v = 0; v < g.size(); ++v) {
            early[v] = position[v] + scale * noise(rng);
            late[v] = -position[v] + scale * noise(rng);
        }
        auto s = greedy_independent(g, k, early);
        auto d = greedy_independent(g, k, late);
        if (s && d) return Instance{g, *s, *d};
    }
    return std::nullopt;
}

}  // namespace

Instance random_dag_instance(std::size_t n, std::size_t k, double p, std::mt19937_64& rng) {
    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), VertexId{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution coin(p);
    std::vector<Arc> arcs;
    std::vector<double> position(n);
    for (std::size_t i = 0; i < n; ++i) {
        position[order[i]] = 2.0 * static_cast<double>(i) / static_cast<double>(n);
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng)) arcs.emplace_back(order[i], order[j]);
    }
    if (auto inst = with_sets(GalacticDigraph(n, std::move(arcs)), k, position, rng)) return *inst;
    return random_dag_instance(n, k, p, rng);
}

Instance random_depth3_instance(std::size_t n, std::size_t k, double p, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 2);
    std::bernoulli_distribution coin(p);
    std::vector<int> level(n);
    for (auto& l : level) l = pick(rng);
    std::vector<Arc> arcs;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = 0; v < n; ++v)
            if (level[u] < level[v] && coin(rng)) arcs.emplace_back(u, v);
    std::vector<double> position(level.begin(), level.end());
    if (auto inst = with_sets(GalacticDigraph(n, std::move(arcs)), k, position, rng)) return *inst;
    return random_depth3_instance(n, k, p, rng);
}

Instance random_undirected_instance(std::size_t n, std::size_t k, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Arc> edges;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v)
            if (coin(rng)) edges.emplace_back(u, v);
    if (auto inst = with_sets(GalacticDigraph(n, std::move(edges), Directedness::undirected), k,
                              std::vector<double>(n, 0.0), rng))
        return *inst;
    return random_undirected_instance(n, k, p, rng);
}

ReconfigSequence random_walk(const GalacticDigraph& g, std::size_t k, std::size_t steps,
                             std::mt19937_64& rng) {
    std::vector<VertexId> order(g.size());
    std::iota(order.begin(), order.end(), VertexId{0});
    Configuration start;
    for (int attempt = 0; attempt < 100 && start.size() < k; ++attempt) {
        std::shuffle(order.begin(), order.end(), rng);
        start.clear();
        for (VertexId v : order) {
            if (start.size() == k) break;
            Configuration c = start;
            c.push_back(v);
            if (valid_configuration(g, c)) start = std::move(c);
        }
    }
    if (start.size() < k) throw std::runtime_error("random_walk: no valid start");
    ReconfigSequence seq{start};
    std::uniform_int_distribution<std::size_t> token(0, k - 1);
    for (std::size_t s = 0; s < steps; ++s) {
        bool moved = false;
        for (int attempt = 0; attempt < 20 && !moved; ++attempt) {
            const auto t = token(rng);
            const auto out = g.out(seq.back()[t]);
            if (out.empty()) continue;
            std::uniform_int_distribution<std::size_t> pick(0, out.size() - 1);
            Configuration next = seq.back();
            next[t] = out[pick(rng)];
            if (next == seq.back() || !valid_configuration(g, next)) continue;
            seq.push_back(std::move(next));
            moved = true;
        }
        if (!moved) break;
    }
    return seq;
}

VertexSet random_subset(const VertexSet& pool, std::mt19937_64& rng) {
    if (pool.empty()) throw std::invalid_argument("random_subset: empty pool");
    std::bernoulli_distribution coin(0.5);
    VertexSet out;
    for (VertexId v : pool)
        if (coin(rng)) out.push_back(v);
    if (out.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        out.push_back(pool[pick(rng)]);
    }
    return out;
}

TdFile single_bag(std::size_t n) {
    TdFile td;
    td.num_vertices = n;
    td.bags.emplace_back();
    for (VertexId v = 0; v < n; ++v) td.bags[0].push_back(v);
    return td;
}

}  // namespace isr::testing
