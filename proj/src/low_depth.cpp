#include "isr/low_depth.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "isr/errors.hpp"

namespace isr {

SearchStats solve_depth2(const Instance& inst) {
    check_instance(inst);
    const auto& g = inst.graph;
    if (!g.directed() || !is_dag(g)) throw std::invalid_argument("solve_depth2: input is not a DAG");
    if (depth(g) > 2) throw std::invalid_argument("solve_depth2: depth exceeds 2");

    const auto n = g.size();
    std::vector<bool> in_s(n, false), in_d(n, false);
    for (VertexId v : inst.start) in_s[v] = true;
    for (VertexId v : inst.target) in_d[v] = true;

    // Only S ∪ D matters: any other vertex would need a path of three vertices.
    // Tokens on S ∩ D are isolated there and never move.
    std::vector<bool> unmoved(n, false), unfilled(n, false);
    for (VertexId v = 0; v < n; ++v) {
        unmoved[v] = in_s[v] && !in_d[v];
        unfilled[v] = in_d[v] && !in_s[v];
    }

    SearchStats stats;
    Configuration c(inst.start.begin(), inst.start.end());
    ReconfigSequence seq{c};
    std::size_t remaining = static_cast<std::size_t>(std::count(unmoved.begin(), unmoved.end(), true));
    while (remaining > 0) {
        ++stats.states_expanded;
        bool moved = false;
        for (VertexId u = 0; u < n && !moved; ++u) {
            if (!unfilled[u]) continue;
            VertexId only = no_vertex;
            std::size_t occupied = 0;
            for (VertexId w : g.neighbors(u))
                if (unmoved[w]) {
                    ++occupied;
                    only = w;
                }
            if (occupied != 1 || !g.has_arc(only, u)) continue;
            std::replace(c.begin(), c.end(), only, u);
            seq.push_back(c);
            unmoved[only] = false;
            unfilled[u] = false;
            --remaining;
            moved = true;
        }
        if (!moved) return stats;
    }
    stats.verdict = Verdict::yes;
    stats.witness = std::move(seq);
    return stats;
}

std::string to_string(const Rewrite& r) {
    const char* action = r.action == Rewrite::Action::remove          ? "remove"
                         : r.action == Rewrite::Action::add_successor ? "add-successor"
                                                                      : "shortcut";
    return std::string(action) + " " + std::to_string(r.vertex + 1) + ": " + r.reason;
}

namespace {

// Mutable working copy used while rewriting; vertex ids never shift until
// finish() compacts them.
struct WorkInstance {
    std::vector<bool> alive;
    std::vector<std::vector<VertexId>> out, in;
    std::vector<VertexId> origin;
    std::vector<bool> in_s, in_d;

    explicit WorkInstance(const Instance& inst) {
        const auto n = inst.graph.size();
        alive.assign(n, true);
        out.resize(n);
        in.resize(n);
        origin.resize(n);
        in_s.assign(n, false);
        in_d.assign(n, false);
        for (VertexId v = 0; v < n; ++v) {
            origin[v] = v;
            auto o = inst.graph.out(v);
            auto i = inst.graph.in(v);
            out[v].assign(o.begin(), o.end());
            in[v].assign(i.begin(), i.end());
        }
        for (VertexId v : inst.start) in_s[v] = true;
        for (VertexId v : inst.target) in_d[v] = true;
    }

    std::size_t size() const { return alive.size(); }

    void remove(VertexId v) { alive[v] = false; }

    VertexId add_vertex(VertexId origin_vertex) {
        alive.push_back(true);
        out.emplace_back();
        in.emplace_back();
        origin.push_back(origin_vertex);
        in_s.push_back(false);
        in_d.push_back(false);
        return static_cast<VertexId>(size() - 1);
    }

    void add_arc(VertexId u, VertexId v) {
        out[u].push_back(v);
        in[v].push_back(u);
    }

    std::vector<VertexId> alive_out(VertexId v) const {
        std::vector<VertexId> r;
        for (VertexId w : out[v])
            if (alive[w]) r.push_back(w);
        return r;
    }
    std::vector<VertexId> alive_in(VertexId v) const {
        std::vector<VertexId> r;
        for (VertexId w : in[v])
            if (alive[w]) r.push_back(w);
        return r;
    }

    std::vector<int> layers() const {
        std::vector<int> layer(size(), 0);
        std::vector<std::size_t> indeg(size(), 0);
        std::vector<VertexId> order;
        for (VertexId v = 0; v < size(); ++v) {
            if (!alive[v]) continue;
            indeg[v] = alive_in(v).size();
            if (indeg[v] == 0) order.push_back(v);
        }
        for (std::size_t h = 0; h < order.size(); ++h) {
            const auto v = order[h];
            layer[v] = std::max(layer[v], 1);
            for (VertexId w : alive_out(v)) {
                layer[w] = std::max(layer[w], layer[v] + 1);
                if (--indeg[w] == 0) order.push_back(w);
            }
        }
        return layer;
    }

    std::vector<bool> reach(bool forward) const {
        std::vector<bool> seen(size(), false);
        std::vector<VertexId> stack;
        for (VertexId v = 0; v < size(); ++v)
            if (alive[v] && (forward ? in_s[v] : in_d[v])) {
                seen[v] = true;
                stack.push_back(v);
            }
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (VertexId w : forward ? out[v] : in[v])
                if (alive[w] && !seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        return seen;
    }

    KernelResult finish(std::vector<Rewrite> trace, VertexSet pinned) const {
        std::vector<VertexId> new_id(size(), no_vertex);
        KernelResult r;
        for (VertexId v = 0; v < size(); ++v)
            if (alive[v]) {
                new_id[v] = static_cast<VertexId>(r.origin.size());
                r.origin.push_back(origin[v]);
            }
        std::vector<Arc> arcs;
        std::vector<VertexId> s, d;
        for (VertexId v = 0; v < size(); ++v) {
            if (!alive[v]) continue;
            for (VertexId w : out[v])
                if (alive[w]) arcs.emplace_back(new_id[v], new_id[w]);
            if (in_s[v]) s.push_back(new_id[v]);
            if (in_d[v]) d.push_back(new_id[v]);
        }
        r.instance.graph = GalacticDigraph(r.origin.size(), std::move(arcs));
        r.instance.start = make_set(std::move(s));
        r.instance.target = make_set(std::move(d));
        r.trace = std::move(trace);
        r.pinned = std::move(pinned);
        if (r.instance.k() == 0) r.verdict_shortcut = Verdict::yes;
        return r;
    }
};

KernelResult decided_no(std::vector<Rewrite> trace, VertexId culprit, std::string reason) {
    trace.push_back({Rewrite::Action::shortcut, culprit, std::move(reason)});
    KernelResult r;
    // Smallest negative instance: one token with nowhere to go.
    r.instance.graph = GalacticDigraph(2, {});
    r.instance.start = {0};
    r.instance.target = {1};
    r.trace = std::move(trace);
    r.verdict_shortcut = Verdict::no;
    return r;
}

void require_depth3_dag(const Instance& inst, const char* who) {
    check_instance(inst);
    if (!inst.graph.directed() || !is_dag(inst.graph))
        throw std::invalid_argument(std::string(who) + ": input is not a DAG");
    if (depth(inst.graph) > 3) throw std::invalid_argument(std::string(who) + ": depth exceeds 3");
}

}  // namespace

KernelResult normalize_depth3(const Instance& inst) {
    require_depth3_dag(inst, "normalize_depth3");
    WorkInstance w(inst);
    std::vector<Rewrite> trace;
    VertexSet pinned;

    auto remove = [&](VertexId v, std::string reason) {
        if (!w.alive[v]) return;
        w.remove(v);
        trace.push_back({Rewrite::Action::remove, w.origin[v], std::move(reason)});
    };

    for (bool changed = true; changed;) {
        changed = false;
        const auto layer = w.layers();
        for (VertexId v = 0; v < w.size() && !changed; ++v) {
            if (!w.alive[v]) continue;
            const bool s = w.in_s[v], d = w.in_d[v];
            if (layer[v] == 3 && s && !d)
                return decided_no(std::move(trace), w.origin[v],
                                  "start vertex on the third layer cannot move");
            if (layer[v] == 1 && d && !s)
                return decided_no(std::move(trace), w.origin[v],
                                  "destination on the first layer cannot be reached");
            if (s && d && (layer[v] == 1 || layer[v] == 3)) {
                // The token can never leave and nothing can replace it.
                const auto blocked = layer[v] == 1 ? w.alive_out(v) : w.alive_in(v);
                pinned.push_back(w.origin[v]);
                remove(v, layer[v] == 1 ? "start and destination on layer 1, token pinned"
                                        : "start and destination on layer 3, token pinned");
                for (VertexId b : blocked) remove(b, "neighbour of a pinned token");
                changed = true;
            }
        }
        if (changed) continue;

        const auto from_s = w.reach(true);
        const auto to_d = w.reach(false);
        for (VertexId v = 0; v < w.size(); ++v) {
            if (!w.alive[v]) continue;
            if (!to_d[v] && w.in_s[v])
                return decided_no(std::move(trace), w.origin[v],
                                  "start vertex cannot reach any destination");
            if (!from_s[v] && w.in_d[v])
                return decided_no(std::move(trace), w.origin[v],
                                  "destination unreachable from every start vertex");
            if (!from_s[v]) {
                remove(v, "unreachable from the start set");
                changed = true;
            } else if (!to_d[v]) {
                remove(v, "cannot reach the destination set");
                changed = true;
            }
        }
    }

    // A destination on layer 2 has no successors; give it a layer-3 twin.
    const auto layer = w.layers();
    const auto before = w.size();
    for (VertexId v = 0; v < before; ++v) {
        if (!w.alive[v] || !w.in_d[v] || layer[v] != 2) continue;
        if (!w.alive_out(v).empty())
            throw invariant_violation("destination on layer 2 has a successor");
        const auto preds = w.alive_in(v);
        const auto twin = w.add_vertex(w.origin[v]);
        w.add_arc(v, twin);
        for (VertexId p : preds) w.add_arc(p, twin);
        w.in_d[v] = false;
        w.in_d[twin] = true;
        trace.push_back({Rewrite::Action::add_successor, w.origin[v],
                         "destination on layer 2 moved to a new successor"});
    }

    auto result = w.finish(std::move(trace), make_set(std::move(pinned)));
    if (!is_independent(result.instance.graph, result.instance.start))
        throw invariant_violation("normalized start set is not independent");
    if (!result.verdict_shortcut) {
        const auto& g = result.instance.graph;
        const auto final_layer = layers(g);
        for (VertexId v = 0; v < g.size(); ++v) {
            const bool s = std::binary_search(result.instance.start.begin(),
                                              result.instance.start.end(), v);
            const bool d = std::binary_search(result.instance.target.begin(),
                                              result.instance.target.end(), v);
            if (s != (final_layer[v] == 1) || d != (final_layer[v] == 3))
                throw invariant_violation("normalized instance is not layered as S, middle, D");
        }
    }
    return result;
}

KernelResult apply_rule_same_neighborhood(const Instance& inst) {
    check_instance(inst);
    WorkInstance w(inst);
    std::vector<Rewrite> trace;
    const auto& g = inst.graph;

    for (bool changed = true; changed;) {
        changed = false;
        std::map<std::vector<VertexId>, VertexId> first_with;
        for (VertexId v = 0; v < w.size(); ++v) {
            if (!w.alive[v] || w.in_s[v] || w.in_d[v]) continue;
            std::vector<VertexId> nb;
            for (VertexId u : g.neighbors(v))
                if (w.alive[u]) nb.push_back(u);
            auto [it, fresh] = first_with.emplace(std::move(nb), v);
            if (fresh) continue;
            w.remove(v);
            trace.push_back({Rewrite::Action::remove, v,
                             "same neighbourhood as vertex " + std::to_string(it->second + 1)});
            changed = true;
        }
    }
    return w.finish(std::move(trace), {});
}

KernelResult kernelize_depth3(const Instance& inst) {
    auto normalized = normalize_depth3(inst);
    if (normalized.verdict_shortcut) return normalized;
    auto reduced = apply_rule_same_neighborhood(normalized.instance);

    KernelResult r;
    r.instance = std::move(reduced.instance);
    r.trace = std::move(normalized.trace);
    for (auto rw : reduced.trace) {
        rw.vertex = normalized.origin[rw.vertex];
        r.trace.push_back(std::move(rw));
    }
    r.origin.reserve(reduced.origin.size());
    for (VertexId v : reduced.origin) r.origin.push_back(normalized.origin[v]);
    r.pinned = std::move(normalized.pinned);
    r.verdict_shortcut = reduced.verdict_shortcut;

    const auto k = r.instance.k();
    std::size_t bound = 2 * k + (std::size_t{1} << std::min<std::size_t>(2 * k, 62));
    if (r.instance.graph.size() > bound)
        throw invariant_violation("kernel exceeds 2k + 4^k vertices");
    return r;
}

ReconfigSequence lift_kernel_witness(const Instance& original, const KernelResult& kernel,
                                     const ReconfigSequence& witness) {
    Configuration c(original.start.begin(), original.start.end());
    ReconfigSequence lifted{c};
    for (std::size_t i = 1; i < witness.size(); ++i) {
        for (TokenId t = 0; t < witness[i].size(); ++t) {
            if (witness[i][t] == witness[i - 1][t]) continue;
            const auto from = kernel.origin.at(witness[i - 1][t]);
            const auto to = kernel.origin.at(witness[i][t]);
            if (from == to) continue;  // step onto the added twin of a destination
            auto it = std::find(c.begin(), c.end(), from);
            if (it == c.end()) throw std::invalid_argument("kernel witness does not match instance");
            *it = to;
            lifted.push_back(c);
        }
    }
    return lifted;
}

}  // namespace isr
