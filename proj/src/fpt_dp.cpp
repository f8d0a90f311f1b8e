#include "isr/fpt_dp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "isr/errors.hpp"

namespace isr {

namespace {

struct VectorHash {
    template <typename T>
    std::size_t operator()(const std::vector<T>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
        return h;
    }
};

// States reachable from 0, children before parents. Empty if a cycle is
// reachable.
std::vector<std::uint32_t> postorder(const std::vector<SequenceAutomaton::State>& states) {
    std::vector<std::uint32_t> order;
    if (states.empty()) return order;
    // 0 unseen, 1 on the stack, 2 done
    std::vector<char> mark(states.size(), 0);
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
    mark[0] = 1;
    while (!stack.empty()) {
        auto& [s, i] = stack.back();
        if (i < states[s].next.size()) {
            const auto t = states[s].next[i++].second;
            if (mark[t] == 1) return {};
            if (!mark[t]) {
                mark[t] = 1;
                stack.emplace_back(t, 0);
            }
            continue;
        }
        mark[s] = 2;
        order.push_back(s);
        stack.pop_back();
    }
    return order;
}

}  // namespace

SequenceAutomaton::SequenceAutomaton(Configuration first, std::vector<State> states)
    : first_(std::move(first)), states_(std::move(states)) {
    if (states_.empty()) states_.emplace_back();
}

std::uint32_t SequenceAutomaton::step(std::uint32_t s, std::uint32_t token, VertexId vertex) const {
    const auto& next = states_[s].next;
    const auto l = label(token, vertex);
    auto it = std::lower_bound(next.begin(), next.end(), std::make_pair(l, std::uint32_t{0}));
    return it != next.end() && it->first == l ? it->second : npos;
}

bool SequenceAutomaton::accepts(const ReconfigSequence& seq) const {
    if (seq.empty() || seq.front() != first_) return false;
    std::uint32_t s = 0;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        if (seq[i].size() != first_.size()) return false;
        std::uint32_t moved = npos;
        for (std::uint32_t t = 0; t < seq[i].size(); ++t)
            if (seq[i][t] != seq[i - 1][t]) {
                if (moved != npos) return false;
                moved = t;
            }
        if (moved == npos) return false;
        s = step(s, moved, seq[i][moved]);
        if (s == npos) return false;
    }
    return states_[s].accept;
}

bool SequenceAutomaton::empty() const { return !states_[0].accept && states_[0].next.empty(); }

bool SequenceAutomaton::finite() const { return !postorder(states_).empty(); }

double SequenceAutomaton::count() const {
    if (!finite()) return std::numeric_limits<double>::infinity();
    std::vector<double> c(states_.size(), 0);
    for (auto s : postorder(states_)) {
        double total = states_[s].accept ? 1 : 0;
        for (const auto& [l, t] : states_[s].next) total += c[t];
        c[s] = std::min(total, std::numeric_limits<double>::max());
    }
    return c[0];
}

std::size_t SequenceAutomaton::longest() const {
    if (empty()) return 0;
    if (!finite()) return std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> len(states_.size(), 0);
    for (auto s : postorder(states_)) {
        std::size_t best = states_[s].accept ? 1 : 0;
        for (const auto& [l, t] : states_[s].next)
            if (len[t] > 0) best = std::max(best, len[t] + 1);
        len[s] = best;
    }
    return len[0];
}

ReconfigSequence SequenceAutomaton::shortest() const {
    if (empty()) throw std::logic_error("shortest: empty automaton");
    std::vector<std::uint32_t> parent(states_.size(), npos);
    std::vector<Label> via(states_.size(), 0);
    std::deque<std::uint32_t> queue{0};
    parent[0] = 0;
    std::uint32_t found = npos;
    while (!queue.empty() && found == npos) {
        const auto s = queue.front();
        queue.pop_front();
        if (states_[s].accept) {
            found = s;
            break;
        }
        for (const auto& [l, t] : states_[s].next)
            if (parent[t] == npos) {
                parent[t] = s;
                via[t] = l;
                queue.push_back(t);
            }
    }
    std::vector<Label> moves;
    for (auto s = found; s != 0; s = parent[s]) moves.push_back(via[s]);
    ReconfigSequence seq{first_};
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
        Configuration c = seq.back();
        c[token_of(*it)] = vertex_of(*it);
        seq.push_back(std::move(c));
    }
    return seq;
}

std::vector<ReconfigSequence> SequenceAutomaton::sequences(std::size_t limit) const {
    return sequences(limit, [](const ReconfigSequence&) { return true; });
}

std::vector<ReconfigSequence> SequenceAutomaton::sequences(
    std::size_t limit, const std::function<bool(const ReconfigSequence&)>& keep) const {
    std::vector<ReconfigSequence> all;
    ReconfigSequence path{first_};
    // (state, next transition index)
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
    if (states_[0].accept) all.push_back(path);
    while (!stack.empty()) {
        auto& [s, i] = stack.back();
        if (i == states_[s].next.size()) {
            stack.pop_back();
            path.pop_back();
            continue;
        }
        const auto [l, t] = states_[s].next[i++];
        Configuration c = path.back();
        c[token_of(l)] = vertex_of(l);
        path.push_back(std::move(c));
        if (!keep(path)) {
            path.pop_back();
            continue;
        }
        if (path.size() > limit)
            throw resource_exhausted("automaton accepts sequences longer than " +
                                     std::to_string(limit));
        stack.emplace_back(t, 0);
        if (states_[t].accept) {
            all.push_back(path);
            if (all.size() > limit)
                throw resource_exhausted("automaton accepts more than " + std::to_string(limit) +
                                         " sequences");
        }
    }
    std::sort(all.begin(), all.end());
    return all;
}

std::vector<std::uint32_t> topological_rank(const GalacticDigraph& g) {
    const auto order = topological_order(g);
    if (order.size() != g.size()) throw std::invalid_argument("topological_rank: graph has a cycle");
    std::vector<std::uint32_t> rank(g.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<std::uint32_t>(i);
    return rank;
}

bool respects_order(const Instance& inst, const View& h, const std::vector<std::uint32_t>& rank,
                    const ReconfigSequence& seq) {
    if (seq.empty()) return true;
    std::vector<std::uint32_t> last;
    for (VertexId s : inst.start) last.push_back(rank[s]);
    for (std::size_t i = 1; i < seq.size(); ++i)
        for (std::size_t t = 0; t < seq[i].size(); ++t) {
            const auto w = seq[i][t];
            if (w == seq[i - 1][t] || !h.graph.is_planet(w)) continue;
            const auto r = rank[h.rep[w]];
            if (r <= last[t]) return false;
            last[t] = r;
        }
    return true;
}

namespace {

using Edge = std::pair<SequenceAutomaton::Label, std::uint32_t>;

constexpr SequenceAutomaton::Label epsilon = ~SequenceAutomaton::Label{0};

Configuration start_image(const Instance& inst, const View& v) {
    Configuration c;
    for (VertexId s : inst.start) c.push_back(v.from_root.at(s));
    return c;
}

Configuration target_image(const Instance& inst, const View& v) {
    Configuration c;
    for (VertexId d : inst.target) c.push_back(v.from_root.at(d));
    std::sort(c.begin(), c.end());
    return c;
}

// Deterministic sequence language that a parent search steps through.
class Language {
public:
    virtual ~Language() = default;
    virtual const Configuration& first() const = 0;
    virtual bool known_empty() const = 0;
    virtual std::uint32_t step(std::uint32_t s, std::uint32_t token, VertexId v) = 0;
    virtual bool accepting(std::uint32_t s) = 0;
};

class AutomatonLanguage final : public Language {
public:
    explicit AutomatonLanguage(const SequenceAutomaton& a) : a_(a) {}
    const Configuration& first() const override { return a_.first(); }
    bool known_empty() const override { return a_.empty(); }
    std::uint32_t step(std::uint32_t s, std::uint32_t token, VertexId v) override {
        return a_.step(s, token, v);
    }
    bool accepting(std::uint32_t s) override { return a_.state(s).accept; }

private:
    const SequenceAutomaton& a_;
};

struct Constraint {
    std::vector<VertexId> to_warp;
    Language* language;
};

// Search over (configuration on H, per-token prune-rule memory, state of each
// child language[, position in a fixed output sequence]). In DAG mode the
// memory is the rank of the last planet entered; in iteration mode it is a
// 4-bit entry counter per vertex of H. Moves invisible in warp(x) are labeled
// epsilon.
class Explorer {
public:
    Explorer(const Instance& inst, std::size_t node, const View& h, const View& warp,
             std::vector<Constraint> kids, const DpOptions& opts,
             const std::vector<std::uint32_t>* rank, const ReconfigSequence* fixed = nullptr)
        : inst_(inst), node_(node), h_(h), g_(h.graph), kids_(std::move(kids)), opts_(opts),
          rank_(rank), fixed_(fixed) {
        k_ = inst.k();
        dag_ = opts.rules.mode == PruneRules::Mode::dag_collapse;
        if (dag_ && !rank_) throw std::logic_error("DAG mode needs topological ranks");
        limit_ = dag_ ? 1 : opts.rules.iota;
        if (limit_ < 1 || limit_ > 15) throw std::invalid_argument("iteration bound must be in 1..15");
        words_ = dag_ ? 1 : (g_.size() + 7) / 8;
        kid_base_ = k_ + k_ * words_;
        width_ = kid_base_ + kids_.size() + (fixed_ ? 1 : 0);
        to_warp_ = refine_map(h, warp);
        start_ = start_image(inst, h);
        target_ = target_image(inst, h);
        warp_first_ = map_configuration(start_, to_warp_);
        // Planets that stay planets in warp(x) are counted by an ancestor.
        counted_.assign(g_.size(), 0);
        for (VertexId v = 0; v < g_.size(); ++v)
            counted_[v] = g_.is_planet(v) && !warp.graph.is_planet(to_warp_[v]);
        if (fixed_) {
            for (std::size_t i = 1; i < fixed_->size(); ++i) {
                std::uint32_t moved = 0;
                while ((*fixed_)[i][moved] == (*fixed_)[i - 1][moved]) ++moved;
                fixed_moves_.push_back(SequenceAutomaton::label(moved, (*fixed_)[i][moved]));
            }
        }
    }

    std::size_t node() const { return node_; }
    const Configuration& warp_first() const { return warp_first_; }
    std::size_t size() const { return count_; }

    /// Interns the initial state as state 0. False when the constraints
    /// already rule out every sequence.
    bool start() {
        if (fixed_ && (fixed_->empty() || fixed_->front() != warp_first_)) return false;
        for (const auto& kid : kids_) {
            if (kid.language->first() != map_configuration(start_, kid.to_warp))
                throw invariant_violation("child profile starts elsewhere");
            if (kid.language->known_empty()) return false;
        }
        std::vector<std::uint32_t> init(width_, 0);
        std::copy(start_.begin(), start_.end(), init.begin());
        for (std::size_t t = 0; t < k_; ++t) {
            if (dag_) init[k_ + t] = (*rank_)[inst_.start[t]];
            else if (counted_[start_[t]]) init[k_ + t * words_ + start_[t] / 8] += 1u << (4 * (start_[t] % 8));
        }
        intern(init);
        return true;
    }

    Configuration configuration(std::size_t i) const { return Configuration(state(i), state(i) + k_); }

    bool accepting(std::size_t i) {
        const auto* s = state(i);
        scratch_.assign(s, s + k_);
        std::sort(scratch_.begin(), scratch_.end());
        if (scratch_ != target_) return false;
        if (fixed_ && s[width_ - 1] != fixed_moves_.size()) return false;
        for (std::size_t j = 0; j < kids_.size(); ++j)
            if (!kids_[j].language->accepting(state(i)[kid_base_ + j])) return false;
        return true;
    }

    /// Calls emit(label, successor id) for every move out of state i.
    template <typename Emit>
    void expand(std::size_t i, Emit&& emit) {
        const std::vector<std::uint32_t> cur(state(i), state(i) + width_);
        std::vector<std::uint32_t> next;
        for (std::size_t t = 0; t < k_; ++t) {
            const VertexId u = cur[t];
            for (VertexId w : g_.out(u)) {
                const bool planet = g_.is_planet(w);
                if (planet) {
                    bool blocked = false;
                    for (std::size_t o = 0; o < k_ && !blocked; ++o)
                        blocked = o != t && g_.is_planet(cur[o]) &&
                                  (cur[o] == w || g_.adjacent(cur[o], w));
                    if (blocked) continue;
                    if (dag_) {
                        if ((*rank_)[h_.rep[w]] <= cur[k_ + t]) continue;
                    } else if (counted_[w] && entries(cur.data(), t, w) >= static_cast<unsigned>(limit_)) {
                        continue;
                    }
                }
                next = cur;
                next[t] = w;
                if (planet) {
                    if (dag_) next[k_ + t] = (*rank_)[h_.rep[w]];
                    else if (counted_[w]) next[k_ + t * words_ + w / 8] += 1u << (4 * (w % 8));
                }
                bool alive = true;
                for (std::size_t j = 0; j < kids_.size() && alive; ++j) {
                    const auto& m = kids_[j].to_warp;
                    if (m[u] == m[w]) continue;
                    auto& slot = next[kid_base_ + j];
                    slot = kids_[j].language->step(slot, static_cast<std::uint32_t>(t), m[w]);
                    alive = slot != SequenceAutomaton::npos;
                }
                if (!alive) continue;
                auto l = epsilon;
                if (to_warp_[u] != to_warp_[w]) {
                    l = SequenceAutomaton::label(static_cast<std::uint32_t>(t), to_warp_[w]);
                    if (fixed_) {
                        auto& pos = next[width_ - 1];
                        if (pos >= fixed_moves_.size() || fixed_moves_[pos] != l) continue;
                        ++pos;
                    }
                }
                emit(l, intern(next));
            }
        }
    }

private:
    const std::uint32_t* state(std::size_t i) const { return arena_.data() + i * width_; }

    unsigned entries(const std::uint32_t* s, std::size_t t, VertexId v) const {
        return (s[k_ + t * words_ + v / 8] >> (4 * (v % 8))) & 15u;
    }

    std::uint32_t intern(const std::vector<std::uint32_t>& s) {
        arena_.insert(arena_.end(), s.begin(), s.end());
        const auto idx = static_cast<std::uint32_t>(count_);
        ++count_;
        auto [it, fresh] = seen_.insert(idx);
        if (!fresh) {
            arena_.resize(arena_.size() - width_);
            --count_;
            return *it;
        }
        if (count_ > opts_.state_budget)
            throw resource_exhausted("profile search at node " + std::to_string(node_) +
                                     " exceeded the state budget of " +
                                     std::to_string(opts_.state_budget));
        return idx;
    }

    struct Hash {
        const Explorer* self;
        std::size_t operator()(std::uint32_t i) const {
            std::size_t h = 1469598103934665603ull;
            const auto* s = self->state(i);
            for (std::size_t j = 0; j < self->width_; ++j) h = (h ^ s[j]) * 1099511628211ull;
            return h;
        }
    };
    struct Eq {
        const Explorer* self;
        bool operator()(std::uint32_t a, std::uint32_t b) const {
            return std::equal(self->state(a), self->state(a) + self->width_, self->state(b));
        }
    };

    const Instance& inst_;
    std::size_t node_;
    const View& h_;
    const GalacticDigraph& g_;
    std::vector<Constraint> kids_;
    const DpOptions& opts_;
    const std::vector<std::uint32_t>* rank_;
    const ReconfigSequence* fixed_;

    std::size_t k_ = 0;
    bool dag_ = true;
    int limit_ = 1;
    std::size_t words_ = 0;
    std::size_t kid_base_ = 0;
    std::size_t width_ = 0;
    std::vector<VertexId> to_warp_;
    std::vector<char> counted_;
    Configuration start_, target_, warp_first_;
    std::vector<SequenceAutomaton::Label> fixed_moves_;

    std::vector<std::uint32_t> arena_;
    std::size_t count_ = 0;
    std::unordered_set<std::uint32_t, Hash, Eq> seen_{1024, Hash{this}, Eq{this}};
    Configuration scratch_;
};

// Some path from state 0 to an accepting state, as configurations over H.
std::optional<ReconfigSequence> find_path(Explorer& e) {
    if (!e.start()) return std::nullopt;
    std::vector<std::uint32_t> parent{0};
    for (std::size_t head = 0; head < e.size(); ++head) {
        if (e.accepting(head)) {
            ReconfigSequence path;
            for (auto i = static_cast<std::uint32_t>(head);; i = parent[i]) {
                path.push_back(e.configuration(i));
                if (i == 0) break;
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        e.expand(head, [&](SequenceAutomaton::Label, std::uint32_t id) {
            if (id == parent.size()) parent.push_back(static_cast<std::uint32_t>(head));
        });
    }
    return std::nullopt;
}

std::vector<std::uint32_t> sorted_unique(std::vector<std::uint32_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Subset construction over the states of an Explorer. Owns the table of
// subsets; `edges_of(q)` lists the moves out of search state q.
template <typename EdgesOf, typename Accepting>
class SubsetBuilder {
public:
    SubsetBuilder(EdgesOf edges_of, Accepting accepting, std::size_t cap, std::size_t node)
        : edges_of_(std::move(edges_of)), accepting_(std::move(accepting)), cap_(cap), node_(node) {}

    std::size_t size() const { return subsets_.size(); }
    const std::vector<std::uint32_t>& subset(std::uint32_t d) const { return subsets_[d]; }
    bool accept(std::uint32_t d) const { return accept_[d]; }

    std::uint32_t intern_closure(std::vector<std::uint32_t> seeds) {
        std::vector<std::uint32_t> work = sorted_unique(std::move(seeds));
        std::unordered_set<std::uint32_t> in(work.begin(), work.end());
        std::vector<std::uint32_t> out;
        while (!work.empty()) {
            const auto s = work.back();
            work.pop_back();
            out.push_back(s);
            for (const auto& [l, t] : edges_of_(s))
                if (l == epsilon && in.insert(t).second) work.push_back(t);
        }
        std::sort(out.begin(), out.end());
        auto [it, fresh] = ids_.emplace(out, static_cast<std::uint32_t>(subsets_.size()));
        if (fresh) {
            if (subsets_.size() >= cap_)
                throw resource_exhausted("profile of node " + std::to_string(node_) +
                                         " needs more than " + std::to_string(cap_) +
                                         " automaton states");
            bool acc = false;
            for (auto s : out) acc = acc || accepting_(s);
            accept_.push_back(acc);
            subsets_.push_back(std::move(out));
        }
        return it->second;
    }

    /// Labeled moves out of subset d, grouped by label, each to its target subset.
    std::vector<Edge> moves(std::uint32_t d) {
        std::vector<Edge> all;
        for (auto s : subsets_[d])
            for (const auto& e : edges_of_(s))
                if (e.first != epsilon) all.push_back(e);
        std::sort(all.begin(), all.end());
        std::vector<Edge> next;
        for (std::size_t i = 0; i < all.size();) {
            std::size_t j = i;
            std::vector<std::uint32_t> targets;
            while (j < all.size() && all[j].first == all[i].first) targets.push_back(all[j++].second);
            const auto l = all[i].first;
            next.emplace_back(l, intern_closure(std::move(targets)));
            i = j;
        }
        return next;
    }

    /// Successor of subset d on label l, or npos.
    std::uint32_t move(std::uint32_t d, SequenceAutomaton::Label l) {
        std::vector<std::uint32_t> targets;
        for (auto s : subsets_[d])
            for (const auto& e : edges_of_(s))
                if (e.first == l) targets.push_back(e.second);
        return targets.empty() ? SequenceAutomaton::npos : intern_closure(std::move(targets));
    }

private:
    EdgesOf edges_of_;
    Accepting accepting_;
    std::size_t cap_;
    std::size_t node_;
    std::vector<std::vector<std::uint32_t>> subsets_;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VectorHash> ids_;
    std::vector<char> accept_;
};

SequenceAutomaton minimize(const Configuration& first, std::vector<SequenceAutomaton::State> dfa) {
    std::vector<std::uint32_t> cls(dfa.size(), SequenceAutomaton::npos);
    std::vector<std::uint32_t> representative;
    if (const auto order = postorder(dfa); !order.empty()) {
        // Acyclic: merge states bottom-up by (accept, transitions to classes).
        std::unordered_map<std::vector<std::uint64_t>, std::uint32_t, VectorHash> classes;
        for (auto s : order) {
            std::vector<std::uint64_t> sig{dfa[s].accept ? 1u : 0u};
            for (const auto& [l, t] : dfa[s].next) {
                sig.push_back(l);
                sig.push_back(cls[t]);
            }
            auto [it, fresh] = classes.emplace(std::move(sig), static_cast<std::uint32_t>(representative.size()));
            if (fresh) representative.push_back(s);
            cls[s] = it->second;
        }
    } else {
        // Moore refinement.
        for (std::size_t s = 0; s < dfa.size(); ++s) cls[s] = dfa[s].accept ? 1 : 0;
        std::size_t classes_before = 0;
        for (;;) {
            std::unordered_map<std::vector<std::uint64_t>, std::uint32_t, VectorHash> classes;
            std::vector<std::uint32_t> refined(dfa.size());
            representative.clear();
            for (std::size_t s = 0; s < dfa.size(); ++s) {
                std::vector<std::uint64_t> sig{cls[s]};
                for (const auto& [l, t] : dfa[s].next) {
                    sig.push_back(l);
                    sig.push_back(cls[t]);
                }
                auto [it, fresh] = classes.emplace(std::move(sig), static_cast<std::uint32_t>(representative.size()));
                if (fresh) representative.push_back(static_cast<std::uint32_t>(s));
                refined[s] = it->second;
            }
            cls = std::move(refined);
            if (representative.size() == classes_before) break;
            classes_before = representative.size();
        }
    }
    // Renumber classes breadth-first from the start.
    std::vector<std::uint32_t> number(representative.size(), SequenceAutomaton::npos);
    std::vector<std::uint32_t> order{cls[0]};
    number[cls[0]] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (const auto& [l, t] : dfa[representative[order[i]]].next)
            if (number[cls[t]] == SequenceAutomaton::npos) {
                number[cls[t]] = static_cast<std::uint32_t>(order.size());
                order.push_back(cls[t]);
            }
    std::vector<SequenceAutomaton::State> states(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& src = dfa[representative[order[i]]];
        states[i].accept = src.accept;
        for (const auto& [l, t] : src.next) states[i].next.emplace_back(l, number[cls[t]]);
    }
    return SequenceAutomaton(first, std::move(states));
}

// Explores every state, then determinizes over the states that can still
// reach acceptance and minimizes.
SequenceAutomaton build_profile(Explorer& e, std::size_t cap, NodeStats* stats) {
    SequenceAutomaton result(e.warp_first(), {});
    if (e.start()) {
        std::vector<std::size_t> offsets;
        std::vector<Edge> edges;
        std::vector<char> accept;
        for (std::size_t head = 0; head < e.size(); ++head) {
            offsets.push_back(edges.size());
            accept.push_back(e.accepting(head));
            e.expand(head, [&](SequenceAutomaton::Label l, std::uint32_t id) { edges.emplace_back(l, id); });
        }
        offsets.push_back(edges.size());
        const auto n = e.size();

        std::vector<std::vector<std::uint32_t>> reverse(n);
        for (std::uint32_t s = 0; s < n; ++s)
            for (auto i = offsets[s]; i < offsets[s + 1]; ++i) reverse[edges[i].second].push_back(s);
        std::vector<char> useful(accept);
        std::vector<std::uint32_t> stack;
        for (std::uint32_t s = 0; s < n; ++s)
            if (useful[s]) stack.push_back(s);
        while (!stack.empty()) {
            const auto s = stack.back();
            stack.pop_back();
            for (auto p : reverse[s])
                if (!useful[p]) {
                    useful[p] = 1;
                    stack.push_back(p);
                }
        }
        if (useful[0]) {
            std::vector<std::vector<Edge>> kept(n);
            for (std::uint32_t s = 0; s < n; ++s)
                for (auto i = offsets[s]; i < offsets[s + 1]; ++i)
                    if (useful[edges[i].second]) kept[s].push_back(edges[i]);
            auto edges_of = [&](std::uint32_t s) -> const std::vector<Edge>& { return kept[s]; };
            auto accepting = [&](std::uint32_t s) { return accept[s] != 0; };
            SubsetBuilder builder(edges_of, accepting, cap, e.node());
            builder.intern_closure({0});
            std::vector<SequenceAutomaton::State> dfa;
            for (std::uint32_t d = 0; d < builder.size(); ++d) {
                SequenceAutomaton::State st;
                st.next = builder.moves(d);
                st.accept = builder.accept(d);
                dfa.push_back(std::move(st));
            }
            result = minimize(e.warp_first(), std::move(dfa));
        }
    }
    if (stats) {
        stats->node = e.node();
        stats->automaton_states = result.size();
        stats->sequences = result.count();
        stats->search_states = e.size();
    }
    return result;
}

// Profile determinized on demand, along the moves a parent actually tries.
class LazyLanguage final : public Language {
public:
    LazyLanguage(std::unique_ptr<Explorer> e, std::size_t cap)
        : e_(std::move(e)),
          builder_([this](std::uint32_t q) -> const std::vector<Edge>& { return edges(q); },
                   [this](std::uint32_t q) { return e_->accepting(q); }, cap, e_->node()) {
        if (e_->start()) builder_.intern_closure({0});
        else dead_ = true;
    }

    const Configuration& first() const override { return e_->warp_first(); }
    bool known_empty() const override { return dead_; }

    std::uint32_t step(std::uint32_t s, std::uint32_t token, VertexId v) override {
        const auto l = SequenceAutomaton::label(token, v);
        if (s >= trans_.size()) trans_.resize(builder_.size());
        for (const auto& [a, b] : trans_[s])
            if (a == l) return b;
        const auto r = builder_.move(s, l);
        if (s >= trans_.size()) trans_.resize(builder_.size());
        trans_[s].emplace_back(l, r);
        return r;
    }

    bool accepting(std::uint32_t s) override { return builder_.accept(s); }

    NodeStats stats() const {
        NodeStats s;
        s.node = e_->node();
        s.automaton_states = builder_.size();
        s.search_states = e_->size();
        return s;
    }

private:
    const std::vector<Edge>& edges(std::uint32_t q) {
        if (q >= succ_.size()) {
            succ_.resize(q + 1);
            expanded_.resize(q + 1, 0);
        }
        if (!expanded_[q]) {
            std::vector<Edge> out;
            e_->expand(q, [&](SequenceAutomaton::Label l, std::uint32_t t) { out.emplace_back(l, t); });
            expanded_[q] = 1;
            succ_[q] = std::move(out);
        }
        return succ_[q];
    }

    using EdgesFn = std::function<const std::vector<Edge>&(std::uint32_t)>;
    using AcceptFn = std::function<bool(std::uint32_t)>;

    std::unique_ptr<Explorer> e_;
    std::vector<std::vector<Edge>> succ_;
    std::vector<char> expanded_;
    SubsetBuilder<EdgesFn, AcceptFn> builder_;
    std::vector<std::vector<Edge>> trans_;
    bool dead_ = false;
};

std::vector<std::uint32_t> ranks_for(const Instance& inst, const DpOptions& opts) {
    if (opts.rules.mode != PruneRules::Mode::dag_collapse) return {};
    return topological_rank(inst.graph);
}

const View& search_view(const CollapsedViews& x, bool leaf) { return leaf ? x.significant : x.hull; }

std::unique_ptr<Explorer> make_explorer(const Instance& inst, const CollapsedViews& x,
                                        const std::vector<const CollapsedViews*>& child_views,
                                        const std::vector<Language*>& child_languages,
                                        const DpOptions& opts, const std::vector<std::uint32_t>& rank,
                                        const ReconfigSequence* fixed = nullptr) {
    std::vector<Constraint> kids;
    for (std::size_t j = 0; j < child_views.size(); ++j)
        kids.push_back({refine_map(x.hull, child_views[j]->warp), child_languages[j]});
    return std::make_unique<Explorer>(inst, x.node, search_view(x, child_views.empty()), x.warp,
                                      std::move(kids), opts, rank.empty() ? nullptr : &rank, fixed);
}

Profile profile_at(const Instance& inst, const CollapsedViews& x,
                   const std::vector<ChildProfile>& children, const DpOptions& opts,
                   const std::vector<std::uint32_t>& rank, NodeStats* stats) {
    std::vector<const CollapsedViews*> views;
    std::vector<std::unique_ptr<AutomatonLanguage>> owned;
    std::vector<Language*> languages;
    for (const auto& c : children) {
        views.push_back(c.views);
        owned.push_back(std::make_unique<AutomatonLanguage>(c.profile->automaton));
        languages.push_back(owned.back().get());
    }
    auto e = make_explorer(inst, x, views, languages, opts, rank);
    Profile p;
    p.node = x.node;
    p.automaton = build_profile(*e, opts.profile_cap, stats);
    if (!p.empty() && p.automaton.finite()) {
        if (p.automaton.longest() > opts.rules.length_bound(inst.k(), x.warp.graph.size()))
            throw invariant_violation("profile sequence longer than the length bound");
    }
    return p;
}

}  // namespace

Profile leaf_profile(const Instance& inst, const CollapsedViews& x, const DpOptions& opts,
                     NodeStats* stats) {
    return profile_at(inst, x, {}, opts, ranks_for(inst, opts), stats);
}

Profile combine_profiles(const Instance& inst, const CollapsedViews& x, const CollapsedViews& y1,
                         const Profile& p1, const CollapsedViews& y2, const Profile& p2,
                         const DpOptions& opts, NodeStats* stats) {
    return profile_at(inst, x, {{&y1, &p1}, {&y2, &p2}}, opts, ranks_for(inst, opts), stats);
}

std::vector<ReconfigSequence> profile_by_enumeration(const Instance& inst, const CollapsedViews& x,
                                                     const std::vector<ChildProfile>& children,
                                                     const DpOptions& opts) {
    const View& h = search_view(x, children.empty());
    const auto rank = ranks_for(inst, opts);
    const auto to_warp = refine_map(h, x.warp);
    std::vector<std::vector<VertexId>> to_child;
    for (const auto& c : children) to_child.push_back(refine_map(h, c.views->warp));
    const auto target = target_image(inst, h);

    std::set<ReconfigSequence> found;
    for_each_sequence(
        h.graph, start_image(inst, h), opts.rules,
        [&](const ReconfigSequence& seq) {
            Configuration last = seq.back();
            std::sort(last.begin(), last.end());
            if (last != target) return;
            if (!rank.empty() && !respects_order(inst, h, rank, seq)) return;
            for (std::size_t j = 0; j < children.size(); ++j)
                if (!children[j].profile->contains(collapse_sequence(seq, to_child[j]).sequence))
                    return;
            found.insert(collapse_sequence(seq, to_warp).sequence);
        },
        opts.state_budget);
    return {found.begin(), found.end()};
}

DpRun run_dp(const Instance& inst, const TreeDecomposition& td, const DpOptions& opts) {
    check_instance(inst);
    if (td.num_vertices != inst.graph.size())
        throw std::invalid_argument("decomposition and graph disagree on the vertex count");
    DpRun run;
    run.options = opts;
    run.views = build_all_views(inst.graph, td);
    run.profiles.resize(td.nodes.size());
    const auto rank = ranks_for(inst, opts);
    for (auto x : td.postorder()) {
        NodeStats s;
        std::vector<ChildProfile> children;
        for (auto c : td.nodes[x].children) children.push_back({&run.views[c], &run.profiles[c]});
        run.profiles[x] = profile_at(inst, run.views[x], children, opts, rank, &s);
        run.node_stats.push_back(s);
    }
    return run;
}

namespace {

VertexSet outside_cone_image(const View& v, const VertexSet& cone) {
    VertexSet r;
    for (VertexId o = 0; o < v.from_root.size(); ++o)
        if (!std::binary_search(cone.begin(), cone.end(), o)) r.push_back(v.from_root[o]);
    return make_set(std::move(r));
}

ReconfigSequence translate(const ReconfigSequence& seq, const View& from, const View& to) {
    const auto f = refine_map(from, to);
    ReconfigSequence out;
    for (const auto& c : seq) out.push_back(map_configuration(c, f));
    return out;
}

// Glues `outer` (over base ⊙ comp(child)) with `inner` (over the child's
// significant graph) into a sequence over `base`.
ReconfigSequence glue_child(const View& base, const std::optional<CollapseMap>& to_u,
                            const View& outer_view, const ReconfigSequence& outer,
                            const CollapsedViews& child, const ReconfigSequence& inner) {
    if (!to_u) return outer;
    const auto v_set = outside_cone_image(base, child.sets.cone);
    if (v_set.empty()) return translate(inner, child.significant, base);
    const auto to_v = collapse(base.graph, v_set);
    const auto v_view = apply_collapse(base, to_v);
    const auto beta = translate(inner, child.significant, v_view);
    const auto u_common = refine_map(outer_view, child.warp);
    const auto v_common = refine_map(v_view, child.warp);
    return glue(outer, beta, GlueContext{*to_u, to_v, u_common, v_common});
}

struct Extraction {
    const Instance& inst;
    const TreeDecomposition& td;
    const std::vector<CollapsedViews>& views;
    const DpOptions& opts;
    const std::vector<std::uint32_t>& rank;
    const std::vector<Language*>& languages;
    std::size_t searched = 0;

    // Sequence over significant(x) collapsing to `alpha` (any output when
    // null), or nullopt if there is none.
    std::optional<ReconfigSequence> at(std::size_t x, const ReconfigSequence* alpha) {
        const auto& kids = td.nodes.at(x).children;
        const auto& v = views[x];
        std::vector<const CollapsedViews*> child_views;
        std::vector<Language*> child_languages;
        for (auto c : kids) {
            child_views.push_back(&views[c]);
            child_languages.push_back(languages[c]);
        }
        auto e = make_explorer(inst, v, child_views, child_languages, opts, rank, alpha);
        auto gamma = find_path(*e);
        searched += e->size();
        if (!gamma || kids.empty()) return gamma;

        std::vector<ReconfigSequence> inner;
        for (auto c : kids) {
            const auto beta = collapse_sequence(*gamma, refine_map(v.hull, views[c].warp)).sequence;
            auto sub = at(c, &beta);
            if (!sub) throw invariant_violation("profile sequence of node " + std::to_string(c) +
                                                " has no realization");
            inner.push_back(std::move(*sub));
        }
        const auto over_right = glue_child(v.right_significant, v.to_hull, v.hull, *gamma,
                                           views[kids[1]], inner[1]);
        return glue_child(v.significant, v.to_right, v.right_significant, over_right,
                          views[kids[0]], inner[0]);
    }
};

}  // namespace

ReconfigSequence extract_sequence(const Instance& inst, const TreeDecomposition& td,
                                  const DpRun& run, std::size_t x, const ReconfigSequence& alpha) {
    const auto rank = ranks_for(inst, run.options);
    std::vector<std::unique_ptr<AutomatonLanguage>> owned;
    std::vector<Language*> languages;
    for (const auto& p : run.profiles) {
        owned.push_back(std::make_unique<AutomatonLanguage>(p.automaton));
        languages.push_back(owned.back().get());
    }
    Extraction ex{inst, td, run.views, run.options, rank, languages};
    auto seq = ex.at(x, &alpha);
    if (!seq) throw invariant_violation("sequence is not in the profile of node " + std::to_string(x));
    return *seq;
}

namespace {

SearchStats solve_lazily(const Instance& inst, const TreeDecomposition& td, const DpOptions& opts,
                         std::vector<NodeStats>* node_stats) {
    if (td.num_vertices != inst.graph.size())
        throw std::invalid_argument("decomposition and graph disagree on the vertex count");
    const auto views = build_all_views(inst.graph, td);
    const auto rank = ranks_for(inst, opts);
    std::vector<std::unique_ptr<LazyLanguage>> lazy(td.nodes.size());
    std::vector<Language*> languages(td.nodes.size(), nullptr);
    for (auto x : td.postorder()) {
        if (x == td.root) continue;
        std::vector<const CollapsedViews*> child_views;
        std::vector<Language*> child_languages;
        for (auto c : td.nodes[x].children) {
            child_views.push_back(&views[c]);
            child_languages.push_back(languages[c]);
        }
        lazy[x] = std::make_unique<LazyLanguage>(
            make_explorer(inst, views[x], child_views, child_languages, opts, rank), opts.profile_cap);
        languages[x] = lazy[x].get();
    }

    Extraction ex{inst, td, views, opts, rank, languages};
    auto witness = ex.at(td.root, nullptr);

    SearchStats stats;
    stats.states_expanded = ex.searched;
    for (auto x : td.postorder()) {
        if (!lazy[x]) continue;
        const auto s = lazy[x]->stats();
        stats.states_expanded += s.search_states;
        stats.frontier_peak = std::max(stats.frontier_peak, s.automaton_states);
        if (node_stats) node_stats->push_back(s);
    }
    if (!witness) return stats;
    if (auto bad = check_solution(inst.graph, *witness, inst.start, inst.target))
        throw invariant_violation("extracted witness fails at step " + std::to_string(bad->step) +
                                  ": " + bad->reason);
    if (!obeys(inst.graph, *witness, opts.rules))
        throw invariant_violation("extracted witness breaks the prune rule");
    stats.verdict = Verdict::yes;
    stats.witness = std::move(witness);
    return stats;
}

}  // namespace

SearchStats solve_tw(const Instance& inst, const TreeDecomposition& td, const DpOptions& opts,
                     std::vector<NodeStats>* node_stats) {
    check_instance(inst);
    if (!inst.graph.directed() || !is_dag(inst.graph))
        throw std::invalid_argument("solve_tw: input is not a DAG");
    if (inst.graph.num_black_holes() != 0)
        throw std::invalid_argument("solve_tw: input contains black holes");
    DpOptions o = opts;
    o.rules = PruneRules::dag();
    return solve_lazily(inst, td, o, node_stats);
}

SearchStats solve_tw_iota(const Instance& inst, const TreeDecomposition& td, int iota,
                          DpOptions opts, std::vector<NodeStats>* node_stats) {
    check_instance(inst);
    if (inst.graph.directed()) throw std::invalid_argument("solve_tw_iota: graph must be undirected");
    if (inst.graph.num_black_holes() != 0)
        throw std::invalid_argument("solve_tw_iota: input contains black holes");
    if (iota < 1) throw std::invalid_argument("solve_tw_iota: iota must be positive");
    opts.rules = PruneRules::iteration(iota);
    return solve_lazily(inst, td, opts, node_stats);
}

}  // namespace isr
