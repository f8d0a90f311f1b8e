#include "isr/reconfiguration.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace isr {

namespace {

std::string vertex_name(VertexId v) { return std::to_string(v); }

VertexSet sorted_copy(std::span<const VertexId> v) {
    VertexSet s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

std::optional<std::string> check_configuration(const GalacticDigraph& g, const Configuration& c) {
    for (VertexId v : c)
        if (v >= g.size())
            throw std::invalid_argument("configuration references vertex " + vertex_name(v) +
                                        " outside the graph");
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!g.is_planet(c[i])) continue;
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            if (!g.is_planet(c[j])) continue;
            if (c[i] == c[j])
                return "tokens " + std::to_string(i) + " and " + std::to_string(j) +
                       " share planet " + vertex_name(c[i]);
            if (g.adjacent(c[i], c[j]))
                return "tokens " + std::to_string(i) + " and " + std::to_string(j) +
                       " occupy adjacent planets " + vertex_name(c[i]) + " and " +
                       vertex_name(c[j]);
        }
    }
    return std::nullopt;
}

std::optional<Violation> check_sequence(const GalacticDigraph& g, const ReconfigSequence& seq) {
    if (seq.empty()) return Violation{0, "empty sequence"};
    const auto k = seq.front().size();
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i].size() != k)
            return Violation{i, "configuration has " + std::to_string(seq[i].size()) +
                                    " tokens, expected " + std::to_string(k)};
        if (auto bad = check_configuration(g, seq[i])) return Violation{i, *bad};
        if (i == 0) continue;
        std::size_t moved = 0;
        TokenId token = 0;
        for (TokenId t = 0; t < k; ++t)
            if (seq[i][t] != seq[i - 1][t]) {
                ++moved;
                token = t;
            }
        if (moved == 0) return Violation{i, "configuration repeats the previous one"};
        if (moved > 1)
            return Violation{i, std::to_string(moved) + " tokens move in a single step"};
        const auto from = seq[i - 1][token];
        const auto to = seq[i][token];
        if (!g.has_arc(from, to))
            return Violation{i, "token " + std::to_string(token) + " moves " + vertex_name(from) +
                                    " -> " + vertex_name(to) + " without an arc"};
    }
    return std::nullopt;
}

std::optional<Violation> check_solution(const GalacticDigraph& g, const ReconfigSequence& seq,
                                        std::span<const VertexId> start,
                                        std::span<const VertexId> target) {
    if (start.size() != target.size())
        throw std::invalid_argument("start and destination sets differ in size");
    if (auto bad = check_sequence(g, seq)) return bad;
    if (seq.front().size() != start.size())
        return Violation{0, "sequence has " + std::to_string(seq.front().size()) +
                                " tokens, instance has " + std::to_string(start.size())};
    if (sorted_copy(seq.front()) != sorted_copy(start))
        return Violation{0, "first configuration does not occupy the start set"};
    if (sorted_copy(seq.back()) != sorted_copy(target))
        return Violation{seq.size() - 1, "last configuration does not occupy the destination set"};
    return std::nullopt;
}

bool validate_sequence(const GalacticDigraph& g, const ReconfigSequence& seq,
                       std::span<const VertexId> start, std::span<const VertexId> target) {
    return !check_solution(g, seq, start, target).has_value();
}

Configuration map_configuration(const Configuration& c, std::span<const VertexId> f) {
    Configuration out(c.size());
    for (std::size_t t = 0; t < c.size(); ++t) out[t] = f[c[t]];
    return out;
}

CollapsedSequence collapse_sequence(const ReconfigSequence& seq, std::span<const VertexId> f) {
    CollapsedSequence result;
    result.index_map.reserve(seq.size());
    for (const auto& c : seq) {
        auto image = map_configuration(c, f);
        if (result.sequence.empty() || result.sequence.back() != image)
            result.sequence.push_back(std::move(image));
        result.index_map.push_back(result.sequence.size() - 1);
    }
    return result;
}

CollapsedSequence collapse_sequence(const ReconfigSequence& seq, const CollapseMap& cm) {
    return collapse_sequence(seq, cm.f);
}

int iteration_of(const GalacticDigraph& g, const ReconfigSequence& seq) {
    if (seq.empty()) return 0;
    std::map<std::pair<VertexId, TokenId>, int> entries;
    int best = 0;
    auto enter = [&](VertexId v, TokenId t) {
        if (!g.is_planet(v)) return;
        best = std::max(best, ++entries[{v, t}]);
    };
    for (TokenId t = 0; t < seq.front().size(); ++t) enter(seq.front()[t], t);
    for (std::size_t i = 1; i < seq.size(); ++i)
        for (TokenId t = 0; t < seq[i].size(); ++t)
            if (seq[i][t] != seq[i - 1][t]) enter(seq[i][t], t);
    return std::max(best, 1);
}

ReconfigSequence glue(const ReconfigSequence& alpha, const ReconfigSequence& beta,
                      const GlueContext& ctx) {
    const auto& g = ctx.to_u.source;
    if (!(ctx.to_v.source == g))
        throw std::invalid_argument("glue: collapse maps start from different graphs");
    if (alpha.empty() || beta.empty()) throw std::invalid_argument("glue: empty sequence");
    if (ctx.u_to_common.size() != ctx.to_u.target.size() ||
        ctx.v_to_common.size() != ctx.to_v.target.size())
        throw std::invalid_argument("glue: common maps have the wrong domain");

    std::vector<int> side(g.size(), 0);  // 1 = U, 2 = V
    for (VertexId v = 0; v < g.size(); ++v) {
        const bool in_u = ctx.to_u.f[v] == ctx.to_u.hole;
        const bool in_v = ctx.to_v.f[v] == ctx.to_v.hole;
        if (in_u && in_v) throw std::invalid_argument("glue: U and V intersect");
        side[v] = in_u ? 1 : in_v ? 2 : 0;
    }
    for (const auto& [u, v] : g.arcs())
        if (side[u] && side[v] && side[u] != side[v])
            throw std::invalid_argument("glue: U and V are adjacent");

    const auto a = collapse_sequence(alpha, ctx.u_to_common);
    const auto b = collapse_sequence(beta, ctx.v_to_common);
    if (a.sequence != b.sequence)
        throw std::invalid_argument("glue: sequences do not collapse to the same sequence");

    const auto hole_u = ctx.to_u.hole;
    const auto hole_v = ctx.to_v.hole;
    const auto lift_u = ctx.to_u.inverse();
    const auto lift_v = ctx.to_v.inverse();
    const auto k = alpha.front().size();

    // Index ranges [first, last] of alpha and beta per common configuration.
    const auto blocks = a.sequence.size();
    std::vector<std::size_t> a_first(blocks), a_last(blocks), b_first(blocks), b_last(blocks);
    for (std::size_t i = alpha.size(); i-- > 0;) a_first[a.index_map[i]] = i;
    for (std::size_t i = 0; i < alpha.size(); ++i) a_last[a.index_map[i]] = i;
    for (std::size_t j = beta.size(); j-- > 0;) b_first[b.index_map[j]] = j;
    for (std::size_t j = 0; j < beta.size(); ++j) b_last[b.index_map[j]] = j;

    ReconfigSequence delta;
    Configuration c(k);
    for (std::size_t l = 0; l < blocks; ++l) {
        // alpha's moves first; tokens inside U sit where beta has them at the block start.
        for (std::size_t i = a_first[l]; i <= a_last[l]; ++i) {
            for (TokenId t = 0; t < k; ++t)
                c[t] = alpha[i][t] != hole_u ? lift_u[alpha[i][t]]
                                             : lift_v[beta[b_first[l]][t]];
            delta.push_back(c);
        }
        // then beta's moves; tokens inside V stay where alpha left them.
        for (std::size_t j = b_first[l] + 1; j <= b_last[l]; ++j) {
            for (TokenId t = 0; t < k; ++t)
                c[t] = beta[j][t] != hole_v ? lift_v[beta[j][t]] : lift_u[alpha[a_last[l]][t]];
            delta.push_back(c);
        }
    }
    for (const auto& cfg : delta)
        for (VertexId v : cfg)
            if (v == no_vertex)
                throw std::invalid_argument("glue: token positions inconsistent with U/V");
    return delta;
}

}  // namespace isr
