#include "isr/oracle.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "isr/errors.hpp"

namespace isr {

const char* to_string(Verdict v) { return v == Verdict::yes ? "yes" : "no"; }

namespace {

// Fixed-width states stored back to back; the hash set holds indices.
class StateArena {
public:
    explicit StateArena(std::size_t width) : width_(width) {}

    std::span<const VertexId> operator[](std::size_t i) const {
        return {data_.data() + i * width_, width_};
    }
    std::size_t size() const { return width_ == 0 ? count_ : data_.size() / width_; }

    std::size_t push(std::span<const VertexId> s) {
        data_.insert(data_.end(), s.begin(), s.end());
        return width_ == 0 ? count_++ : size() - 1;
    }
    void pop() {
        if (width_ == 0) --count_;
        else data_.resize(data_.size() - width_);
    }

private:
    std::size_t width_;
    std::size_t count_ = 0;
    std::vector<VertexId> data_;
};

struct ArenaHash {
    const StateArena* arena;
    std::size_t operator()(std::uint32_t i) const {
        std::size_t h = 1469598103934665603ull;
        for (VertexId v : (*arena)[i]) h = (h ^ v) * 1099511628211ull;
        return h;
    }
};

struct ArenaEq {
    const StateArena* arena;
    bool operator()(std::uint32_t a, std::uint32_t b) const {
        auto x = (*arena)[a];
        auto y = (*arena)[b];
        return std::equal(x.begin(), x.end(), y.begin(), y.end());
    }
};

ReconfigSequence label_set_path(const std::vector<VertexSet>& sets) {
    ReconfigSequence seq;
    Configuration c(sets.front().begin(), sets.front().end());
    seq.push_back(c);
    for (std::size_t i = 1; i < sets.size(); ++i) {
        VertexId from = no_vertex, to = no_vertex;
        std::set_difference(sets[i - 1].begin(), sets[i - 1].end(), sets[i].begin(),
                            sets[i].end(), &from);
        std::set_difference(sets[i].begin(), sets[i].end(), sets[i - 1].begin(),
                            sets[i - 1].end(), &to);
        std::replace(c.begin(), c.end(), from, to);
        seq.push_back(c);
    }
    return seq;
}

// Open-addressing set of indices into a vector of 64-bit states.
class MaskIndex {
public:
    explicit MaskIndex(const std::vector<std::uint64_t>& states) : states_(states), slots_(1024, empty) {}

    /// Index of the state equal to states_.back(), inserting it if new.
    std::uint32_t insert_last() {
        if (2 * (used_ + 1) > slots_.size()) grow();
        const auto idx = static_cast<std::uint32_t>(states_.size() - 1);
        auto& slot = find(states_[idx]);
        if (slot == empty) {
            slot = idx;
            ++used_;
        }
        return slot;
    }

    static constexpr std::uint32_t empty = ~std::uint32_t{0};

    std::uint32_t find_existing(std::uint64_t s) const {
        const auto mask = slots_.size() - 1;
        for (auto i = mix(s) & mask;; i = (i + 1) & mask)
            if (slots_[i] == empty || states_[slots_[i]] == s) return slots_[i];
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdull;
        x ^= x >> 33;
        x *= 0xc4ceb9fe1a85ec53ull;
        return x ^ (x >> 33);
    }

    std::uint32_t& find(std::uint64_t s) {
        const auto mask = slots_.size() - 1;
        for (auto i = mix(s) & mask;; i = (i + 1) & mask)
            if (slots_[i] == empty || states_[slots_[i]] == s) return slots_[i];
    }

    void grow() {
        std::vector<std::uint32_t> old(slots_.size() * 2, empty);
        old.swap(slots_);
        for (auto idx : old)
            if (idx != empty) find(states_[idx]) = idx;
    }

    const std::vector<std::uint64_t>& states_;
    std::vector<std::uint32_t> slots_;
    std::size_t used_ = 0;
};

VertexSet mask_to_set(std::uint64_t m) {
    VertexSet s;
    for (; m; m &= m - 1) s.push_back(static_cast<VertexId>(__builtin_ctzll(m)));
    return s;
}

// solve_bfs for graphs with at most 64 vertices: states are vertex bitmasks,
// searched from both ends one full layer at a time (smaller frontier first).
// The best meeting point of the first layer that meets gives a shortest path.
class MaskSearch {
public:
    MaskSearch(const GalacticDigraph& g, std::uint64_t root, bool forward)
        : g_(g), forward_(forward), states_{root}, parent_{0}, index_(states_) {
        index_.insert_last();
    }

    std::size_t frontier() const { return states_.size() - layer_begin_; }
    std::size_t size() const { return states_.size(); }
    std::uint32_t find(std::uint64_t s) const { return index_.find_existing(s); }
    std::uint64_t state(std::uint32_t i) const { return states_[i]; }

    /// Expands the current layer. Returns (state in this search, state in
    /// `other`) of the best meeting point found, if any.
    std::optional<std::pair<std::uint32_t, std::uint32_t>> expand_layer(
        const std::vector<std::uint64_t>& adjacent, const MaskSearch& other,
        const std::vector<std::uint32_t>& other_depth, std::size_t budget, std::size_t& expanded) {
        const auto begin = layer_begin_, end = states_.size();
        layer_begin_ = end;
        std::optional<std::pair<std::uint32_t, std::uint32_t>> best;
        for (auto head = static_cast<std::uint32_t>(begin); head < end; ++head) {
            ++expanded;
            const auto cur = states_[head];
            for (auto m = cur; m; m &= m - 1) {
                const auto u = static_cast<VertexId>(__builtin_ctzll(m));
                const auto rest = cur & ~(std::uint64_t{1} << u);
                for (VertexId w : forward_ ? g_.out(u) : g_.in(u)) {
                    if ((rest >> w) & 1 || adjacent[w] & rest) continue;
                    states_.push_back(rest | (std::uint64_t{1} << w));
                    const auto idx = index_.insert_last();
                    if (idx + 1 != states_.size()) {
                        states_.pop_back();
                        continue;
                    }
                    parent_.push_back(head);
                    depth_.push_back(depth_[head] + 1);
                    if (states_.size() > budget)
                        throw resource_exhausted("solve_bfs: state budget of " +
                                                 std::to_string(budget) + " exceeded");
                    const auto o = other.find(states_[idx]);
                    if (o != MaskIndex::empty && (!best || other_depth[o] < other_depth[best->second]))
                        best = std::make_pair(idx, o);
                }
            }
        }
        return best;
    }

    const std::vector<std::uint32_t>& depth() const { return depth_; }

    /// States from the root to i.
    std::vector<VertexSet> path_to(std::uint32_t i) const {
        std::vector<VertexSet> path;
        for (;; i = parent_[i]) {
            path.push_back(mask_to_set(states_[i]));
            if (i == 0) break;
        }
        std::reverse(path.begin(), path.end());
        return path;
    }

private:
    const GalacticDigraph& g_;
    bool forward_;
    std::vector<std::uint64_t> states_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> depth_{0};
    MaskIndex index_;
    std::size_t layer_begin_ = 0;
};

SearchStats solve_bfs_small(const Instance& inst, std::size_t budget) {
    const auto& g = inst.graph;
    const auto n = g.size();
    std::vector<std::uint64_t> adjacent(n, 0);
    for (VertexId v = 0; v < n; ++v)
        for (VertexId w : g.neighbors(v)) adjacent[v] |= std::uint64_t{1} << w;
    auto to_mask = [](const VertexSet& set) {
        std::uint64_t m = 0;
        for (VertexId v : set) m |= std::uint64_t{1} << v;
        return m;
    };

    SearchStats stats;
    MaskSearch fwd(g, to_mask(inst.start), true);
    MaskSearch bwd(g, to_mask(inst.target), false);
    std::optional<std::vector<VertexSet>> path;
    if (fwd.state(0) == bwd.state(0)) path = fwd.path_to(0);
    while (!path && fwd.frontier() > 0 && bwd.frontier() > 0) {
        stats.frontier_peak = std::max(stats.frontier_peak, fwd.frontier() + bwd.frontier());
        const bool forward = fwd.frontier() <= bwd.frontier();
        auto& a = forward ? fwd : bwd;
        auto& b = forward ? bwd : fwd;
        const auto meet = a.expand_layer(adjacent, b, b.depth(), budget - b.size(), stats.states_expanded);
        if (!meet) continue;
        auto head = fwd.path_to(forward ? meet->first : meet->second);
        auto tail = bwd.path_to(forward ? meet->second : meet->first);
        head.insert(head.end(), tail.rbegin() + 1, tail.rend());
        path = std::move(head);
    }
    if (path) {
        stats.verdict = Verdict::yes;
        stats.witness = label_set_path(*path);
    }
    return stats;
}

}  // namespace

SearchStats solve_bfs(const Instance& inst, std::size_t budget) {
    check_instance(inst);
    const auto& g = inst.graph;
    if (g.num_black_holes() != 0)
        throw std::invalid_argument("solve_bfs: instance contains black holes");
    if (g.size() <= 64) return solve_bfs_small(inst, budget);
    const auto k = inst.k();
    const auto n = g.size();

    SearchStats stats;
    StateArena arena(k);
    std::vector<std::uint32_t> parent;
    std::unordered_set<std::uint32_t, ArenaHash, ArenaEq> seen(1024, ArenaHash{&arena},
                                                              ArenaEq{&arena});
    const VertexSet target(inst.target.begin(), inst.target.end());

    arena.push(inst.start);
    parent.push_back(0);
    seen.insert(0);

    std::vector<std::uint32_t> conflicts(n, 0);
    std::vector<bool> occupied(n, false);
    VertexSet next(k);
    std::optional<std::uint32_t> found;

    for (std::uint32_t head = 0; head < arena.size(); ++head) {
        stats.frontier_peak = std::max<std::size_t>(stats.frontier_peak, arena.size() - head);
        const auto state = arena[head];
        if (std::equal(state.begin(), state.end(), target.begin(), target.end())) {
            found = head;
            break;
        }
        ++stats.states_expanded;
        for (VertexId p : state) {
            occupied[p] = true;
            for (VertexId q : g.neighbors(p)) ++conflicts[q];
        }
        for (std::size_t i = 0; i < k; ++i) {
            const VertexId u = arena[head][i];
            for (VertexId w : g.out(u)) {
                // w is adjacent to u itself, so exactly one conflict means it is free.
                if (occupied[w] || conflicts[w] != 1) continue;
                auto cur = arena[head];
                std::copy(cur.begin(), cur.end(), next.begin());
                next[i] = w;
                std::sort(next.begin(), next.end());
                const auto idx = static_cast<std::uint32_t>(arena.push(next));
                if (seen.insert(idx).second) {
                    parent.push_back(head);
                    if (arena.size() > budget)
                        throw resource_exhausted("solve_bfs: state budget of " +
                                                 std::to_string(budget) + " exceeded");
                } else {
                    arena.pop();
                }
            }
        }
        for (VertexId p : arena[head]) {
            occupied[p] = false;
            for (VertexId q : g.neighbors(p)) --conflicts[q];
        }
    }

    if (found) {
        stats.verdict = Verdict::yes;
        std::vector<VertexSet> path;
        for (auto s = *found;; s = parent[s]) {
            auto st = arena[s];
            path.emplace_back(st.begin(), st.end());
            if (s == 0) break;
        }
        std::reverse(path.begin(), path.end());
        stats.witness = label_set_path(path);
    }
    return stats;
}

std::size_t PruneRules::length_bound(std::size_t k, std::size_t vertices) const {
    const std::size_t per_planet = mode == Mode::dag_collapse ? 1 : static_cast<std::size_t>(iota);
    return std::max<std::size_t>(1, 2 * k * per_planet * vertices);
}

bool obeys(const GalacticDigraph& g, const ReconfigSequence& seq, const PruneRules& rules) {
    if (seq.empty()) return true;
    const auto k = seq.front().size();
    const int limit = rules.mode == PruneRules::Mode::dag_collapse ? 1 : rules.iota;
    std::vector<int> entries(k * g.size(), 0);
    auto enter = [&](TokenId t, VertexId v) {
        return !g.is_planet(v) || ++entries[t * g.size() + v] <= limit;
    };
    for (TokenId t = 0; t < k; ++t)
        if (!enter(t, seq.front()[t])) return false;
    for (std::size_t i = 1; i < seq.size(); ++i)
        for (TokenId t = 0; t < k; ++t)
            if (seq[i][t] != seq[i - 1][t] && !enter(t, seq[i][t])) return false;
    return true;
}

namespace {

class SequenceEnumerator {
public:
    SequenceEnumerator(const GalacticDigraph& g, const PruneRules& rules,
                       const std::function<void(const ReconfigSequence&)>& visit,
                       std::size_t budget)
        : g_(g), rules_(rules), visit_(visit), budget_(budget) {}

    void run(const Configuration& start) {
        if (!no_adjacent_black_holes(g_))
            throw std::invalid_argument("enumerate_sequences: adjacent black holes");
        if (auto bad = check_configuration(g_, start))
            throw std::invalid_argument("enumerate_sequences: invalid start: " + *bad);
        k_ = start.size();
        limit_ = rules_.mode == PruneRules::Mode::dag_collapse ? 1 : rules_.iota;
        bound_ = rules_.length_bound(k_, g_.size());
        entries_.assign(k_ * g_.size(), 0);
        for (TokenId t = 0; t < k_; ++t)
            if (g_.is_planet(start[t])) ++entries_[t * g_.size() + start[t]];
        path_.push_back(start);
        dfs();
        path_.clear();
    }

private:
    void dfs() {
        if (++count_ > budget_)
            throw resource_exhausted("enumerate_sequences: more than " + std::to_string(budget_) +
                                     " sequences");
        if (path_.size() > bound_)
            throw invariant_violation("enumerate_sequences: sequence longer than the length bound");
        visit_(path_);
        const Configuration cur = path_.back();
        for (TokenId t = 0; t < k_; ++t) {
            const VertexId u = cur[t];
            for (VertexId w : g_.out(u)) {
                if (g_.is_planet(w)) {
                    if (entries_[t * g_.size() + w] >= limit_) continue;
                    bool blocked = false;
                    for (TokenId o = 0; o < k_ && !blocked; ++o)
                        blocked = o != t && g_.is_planet(cur[o]) &&
                                  (cur[o] == w || g_.adjacent(cur[o], w));
                    if (blocked) continue;
                    ++entries_[t * g_.size() + w];
                }
                Configuration next = cur;
                next[t] = w;
                path_.push_back(std::move(next));
                dfs();
                path_.pop_back();
                if (g_.is_planet(w)) --entries_[t * g_.size() + w];
            }
        }
    }

    const GalacticDigraph& g_;
    const PruneRules& rules_;
    const std::function<void(const ReconfigSequence&)>& visit_;
    std::size_t budget_;
    std::size_t count_ = 0;
    std::size_t k_ = 0;
    int limit_ = 1;
    std::size_t bound_ = 0;
    std::vector<int> entries_;
    ReconfigSequence path_;
};

}  // namespace

void for_each_sequence(const GalacticDigraph& g, const Configuration& start,
                       const PruneRules& rules,
                       const std::function<void(const ReconfigSequence&)>& visit,
                       std::size_t budget) {
    SequenceEnumerator(g, rules, visit, budget).run(start);
}

std::vector<ReconfigSequence> enumerate_sequences(const GalacticDigraph& g,
                                                  const Configuration& start,
                                                  const PruneRules& rules, std::size_t budget) {
    std::vector<ReconfigSequence> all;
    for_each_sequence(
        g, start, rules, [&](const ReconfigSequence& s) { all.push_back(s); }, budget);
    return all;
}

SearchStats solve_iota_oracle(const Instance& inst, int iota, std::size_t budget) {
    check_instance(inst);
    const auto& g = inst.graph;
    if (g.directed()) throw std::invalid_argument("solve_iota_oracle: graph must be undirected");
    if (iota < 1) throw std::invalid_argument("solve_iota_oracle: iota must be positive");
    const auto k = inst.k();
    const auto n = g.size();

    // State: k positions followed by k*n entry counters.
    using State = std::vector<VertexId>;
    struct StateHash {
        std::size_t operator()(const State& s) const {
            std::size_t h = 1469598103934665603ull;
            for (VertexId v : s) h = (h ^ v) * 1099511628211ull;
            return h;
        }
    };
    std::unordered_map<State, std::size_t, StateHash> index;
    std::vector<State> states;
    std::vector<std::size_t> parent;

    State init(k + k * n, 0);
    for (TokenId t = 0; t < k; ++t) {
        init[t] = inst.start[t];
        init[k + t * n + inst.start[t]] = 1;
    }
    states.push_back(init);
    parent.push_back(0);
    index.emplace(init, 0);

    SearchStats stats;
    std::optional<std::size_t> found;
    VertexSet positions(k);
    for (std::size_t head = 0; head < states.size(); ++head) {
        stats.frontier_peak = std::max(stats.frontier_peak, states.size() - head);
        const State cur = states[head];
        std::copy(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(k), positions.begin());
        std::sort(positions.begin(), positions.end());
        if (std::equal(positions.begin(), positions.end(), inst.target.begin(), inst.target.end())) {
            found = head;
            break;
        }
        ++stats.states_expanded;
        for (TokenId t = 0; t < k; ++t) {
            for (VertexId w : g.out(cur[t])) {
                if (cur[k + t * n + w] >= static_cast<VertexId>(iota)) continue;
                bool blocked = false;
                for (TokenId o = 0; o < k && !blocked; ++o)
                    blocked = o != t && (cur[o] == w || g.adjacent(cur[o], w));
                if (blocked) continue;
                State next = cur;
                next[t] = w;
                ++next[k + t * n + w];
                if (index.emplace(next, states.size()).second) {
                    states.push_back(std::move(next));
                    parent.push_back(head);
                    if (states.size() > budget)
                        throw resource_exhausted("solve_iota_oracle: state budget of " +
                                                 std::to_string(budget) + " exceeded");
                }
            }
        }
    }
    if (found) {
        stats.verdict = Verdict::yes;
        ReconfigSequence seq;
        for (auto s = *found;; s = parent[s]) {
            seq.emplace_back(states[s].begin(), states[s].begin() + static_cast<std::ptrdiff_t>(k));
            if (s == 0) break;
        }
        std::reverse(seq.begin(), seq.end());
        stats.witness = std::move(seq);
    }
    return stats;
}

}  // namespace isr
