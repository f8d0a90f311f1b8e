#include "isr/treedec.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "isr/errors.hpp"

namespace isr {

std::size_t TdFile::width() const {
    std::size_t w = 0;
    for (const auto& b : bags) w = std::max(w, b.size());
    return w == 0 ? 0 : w - 1;
}

namespace {

std::size_t parse_count(const std::string& s, std::size_t line) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw parse_error(line, "expected a number, got '" + s + "'");
    return std::stoull(s);
}

}  // namespace

TdFile parse_td_file(std::string_view text) {
    TdFile td;
    bool have_header = false;
    std::size_t declared_width = 0;
    std::vector<bool> seen;
    std::istringstream in{std::string(text)};
    std::size_t number = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++number;
        std::istringstream ls(raw);
        std::vector<std::string> f;
        for (std::string w; ls >> w;) f.push_back(w);
        if (f.empty() || f[0] == "c") continue;
        if (f[0] == "s") {
            if (have_header) throw parse_error(number, "duplicate header");
            if (f.size() != 5 || f[1] != "td")
                throw parse_error(number, "expected 's td <bags> <width+1> <vertices>'");
            td.bags.resize(parse_count(f[2], number));
            seen.assign(td.bags.size(), false);
            declared_width = parse_count(f[3], number);
            td.num_vertices = parse_count(f[4], number);
            have_header = true;
            continue;
        }
        if (!have_header) throw parse_error(number, "content before the 's td' header");
        if (f[0] == "b") {
            if (f.size() < 2) throw parse_error(number, "bag line without an id");
            const auto id = parse_count(f[1], number);
            if (id < 1 || id > td.bags.size())
                throw parse_error(number, "bag id " + std::to_string(id) + " out of range");
            if (seen[id - 1]) throw parse_error(number, "bag " + std::to_string(id) + " repeated");
            seen[id - 1] = true;
            for (std::size_t i = 2; i < f.size(); ++i) {
                const auto v = parse_count(f[i], number);
                if (v < 1 || v > td.num_vertices)
                    throw parse_error(number, "vertex " + std::to_string(v) + " out of range");
                td.bags[id - 1].push_back(static_cast<VertexId>(v - 1));
            }
            continue;
        }
        if (f.size() != 2) throw parse_error(number, "expected an edge '<i> <j>'");
        const auto a = parse_count(f[0], number);
        const auto b = parse_count(f[1], number);
        if (a < 1 || a > td.bags.size() || b < 1 || b > td.bags.size())
            throw parse_error(number, "tree edge references a missing bag");
        td.edges.emplace_back(a - 1, b - 1);
    }
    if (!have_header) throw parse_error(0, "missing 's td' header");
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) throw parse_error(0, "bag " + std::to_string(i + 1) + " never listed");
    if (!td.bags.empty() && declared_width != td.width() + 1)
        throw parse_error(0, "header declares bag size " + std::to_string(declared_width) +
                                 ", largest bag has " + std::to_string(td.width() + 1));
    return td;
}

void write_td(std::ostream& out, const TdFile& td) {
    std::size_t largest = 0;
    for (const auto& b : td.bags) largest = std::max(largest, b.size());
    out << "s td " << td.bags.size() << ' ' << largest << ' ' << td.num_vertices << '\n';
    for (std::size_t i = 0; i < td.bags.size(); ++i) {
        out << "b " << i + 1;
        for (VertexId v : td.bags[i]) out << ' ' << v + 1;
        out << '\n';
    }
    for (const auto& [a, b] : td.edges) out << a + 1 << ' ' << b + 1 << '\n';
}

std::string format_td(const TdFile& td) {
    std::ostringstream ss;
    write_td(ss, td);
    return ss.str();
}

namespace {

std::vector<std::vector<std::size_t>> tree_adjacency(const TdFile& td) {
    std::vector<std::vector<std::size_t>> adj(td.bags.size());
    for (const auto& [a, b] : td.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

}  // namespace

void validate(const TdFile& td, const GalacticDigraph& g) {
    const auto n = g.size();
    if (td.num_vertices != n)
        throw invalid_decomposition("decomposition is over " + std::to_string(td.num_vertices) +
                                    " vertices, graph has " + std::to_string(n));
    if (td.bags.empty()) throw invalid_decomposition("decomposition has no bags");
    if (td.edges.size() + 1 != td.bags.size())
        throw invalid_decomposition("bag graph is not a tree: " + std::to_string(td.bags.size()) +
                                    " bags, " + std::to_string(td.edges.size()) + " edges");
    const auto adj = tree_adjacency(td);
    std::vector<bool> reached(td.bags.size(), false);
    std::vector<std::size_t> stack{0};
    reached[0] = true;
    while (!stack.empty()) {
        const auto b = stack.back();
        stack.pop_back();
        for (auto c : adj[b])
            if (!reached[c]) {
                reached[c] = true;
                stack.push_back(c);
            }
    }
    for (std::size_t b = 0; b < reached.size(); ++b)
        if (!reached[b]) throw invalid_decomposition("bag " + std::to_string(b + 1) + " is disconnected");

    std::vector<VertexSet> sorted(td.bags.size());
    std::vector<std::size_t> occurrences(n, 0);
    for (std::size_t b = 0; b < td.bags.size(); ++b) {
        sorted[b] = make_set(td.bags[b]);
        if (sorted[b].size() != td.bags[b].size())
            throw invalid_decomposition("bag " + std::to_string(b + 1) + " repeats a vertex");
        for (VertexId v : sorted[b]) ++occurrences[v];
    }
    for (VertexId v = 0; v < n; ++v)
        if (occurrences[v] == 0)
            throw invalid_decomposition("vertex " + std::to_string(v + 1) + " is in no bag");

    auto contains = [&](std::size_t b, VertexId v) {
        return std::binary_search(sorted[b].begin(), sorted[b].end(), v);
    };
    for (const auto& [u, v] : g.edges()) {
        bool covered = false;
        for (std::size_t b = 0; b < sorted.size() && !covered; ++b)
            covered = contains(b, u) && contains(b, v);
        if (!covered)
            throw invalid_decomposition("arc (" + std::to_string(u + 1) + "," +
                                        std::to_string(v + 1) + ") is in no bag");
    }
    // In a tree, the bags holding v are connected iff they span |bags|-1 tree edges.
    std::vector<std::size_t> inner_edges(n, 0);
    for (const auto& [a, b] : td.edges)
        for (VertexId v : sorted[a])
            if (contains(b, v)) ++inner_edges[v];
    for (VertexId v = 0; v < n; ++v)
        if (inner_edges[v] + 1 != occurrences[v])
            throw invalid_decomposition("bags containing vertex " + std::to_string(v + 1) +
                                        " are not connected");
}

std::vector<std::size_t> TreeDecomposition::postorder() const {
    std::vector<std::size_t> order;
    order.reserve(nodes.size());
    std::vector<std::pair<std::size_t, bool>> stack{{root, false}};
    while (!stack.empty()) {
        auto [x, expanded] = stack.back();
        stack.pop_back();
        if (expanded) {
            order.push_back(x);
            continue;
        }
        stack.emplace_back(x, true);
        for (auto it = nodes[x].children.rbegin(); it != nodes[x].children.rend(); ++it)
            stack.emplace_back(*it, false);
    }
    return order;
}

TreeDecomposition make_rooted_binary(const TdFile& file, std::size_t root_bag) {
    if (root_bag >= file.bags.size()) throw std::invalid_argument("root bag out of range");
    TreeDecomposition td;
    td.num_vertices = file.num_vertices;
    td.width = file.width();
    const auto adj = tree_adjacency(file);

    auto add_node = [&](std::size_t source, std::size_t parent) {
        TreeDecomposition::Node node;
        node.bag = make_set(file.bags[source]);
        node.parent = parent;
        node.source_bag = source;
        td.nodes.push_back(std::move(node));
        const auto id = td.nodes.size() - 1;
        if (parent != TreeDecomposition::none) td.nodes[parent].children.push_back(id);
        return id;
    };

    td.root = add_node(root_bag, TreeDecomposition::none);
    // (file bag, its node, file parent)
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> stack{
        {root_bag, td.root, TreeDecomposition::none}};
    while (!stack.empty()) {
        auto [bag, node, from] = stack.back();
        stack.pop_back();
        std::vector<std::size_t> kids;
        for (auto c : adj[bag])
            if (c != from) kids.push_back(c);
        if (kids.empty()) continue;
        if (kids.size() == 1) {
            stack.emplace_back(kids[0], add_node(kids[0], node), bag);
            add_node(bag, node);
            continue;
        }
        // Chain of duplicates: node gets kids[0] and a copy holding the rest.
        auto attach = node;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            const bool last_pair = i + 2 == kids.size();
            stack.emplace_back(kids[i], add_node(kids[i], attach), bag);
            if (last_pair) {
                stack.emplace_back(kids[i + 1], add_node(kids[i + 1], attach), bag);
                break;
            }
            attach = add_node(bag, attach);
        }
    }
    return td;
}

TreeDecomposition parse_td(std::string_view text, const GalacticDigraph& g, std::size_t root_bag) {
    const auto file = parse_td_file(text);
    validate(file, g);
    return make_rooted_binary(file, root_bag);
}

namespace {

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}
VertexSet set_minus(const VertexSet& a, const VertexSet& b) {
    VertexSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}
VertexSet set_meet(const VertexSet& a, const VertexSet& b) {
    VertexSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

NodeSets finish_sets(const TreeDecomposition& td, std::size_t x, VertexSet cone) {
    NodeSets s;
    s.cone = std::move(cone);
    const auto& node = td.nodes[x];
    if (node.parent != TreeDecomposition::none) s.adh = set_meet(node.bag, td.nodes[node.parent].bag);
    s.mrg = set_minus(node.bag, s.adh);
    s.comp = set_minus(s.cone, s.adh);
    return s;
}

}  // namespace

std::vector<NodeSets> all_node_sets(const TreeDecomposition& td) {
    std::vector<VertexSet> cones(td.nodes.size());
    for (auto x : td.postorder()) {
        cones[x] = td.nodes[x].bag;
        for (auto c : td.nodes[x].children) cones[x] = set_union(cones[x], cones[c]);
    }
    std::vector<NodeSets> sets(td.nodes.size());
    for (std::size_t x = 0; x < td.nodes.size(); ++x) sets[x] = finish_sets(td, x, std::move(cones[x]));
    return sets;
}

NodeSets node_sets(const TreeDecomposition& td, std::size_t x) {
    VertexSet cone;
    std::vector<std::size_t> stack{x};
    while (!stack.empty()) {
        const auto y = stack.back();
        stack.pop_back();
        cone = set_union(cone, td.nodes[y].bag);
        for (auto c : td.nodes[y].children) stack.push_back(c);
    }
    return finish_sets(td, x, std::move(cone));
}

TdFile heuristic_decomposition(const GalacticDigraph& g) {
    const auto n = g.size();
    TdFile td;
    td.num_vertices = n;
    if (n == 0) {
        td.bags.emplace_back();
        return td;
    }
    std::vector<std::set<VertexId>> nbr(n);
    for (VertexId v = 0; v < n; ++v)
        for (VertexId w : g.neighbors(v)) nbr[v].insert(w);

    std::vector<bool> eliminated(n, false);
    std::vector<VertexId> order;
    std::vector<std::size_t> position(n);
    std::vector<std::vector<VertexId>> later(n);  // neighbours at elimination time
    for (std::size_t step = 0; step < n; ++step) {
        VertexId best = no_vertex;
        for (VertexId v = 0; v < n; ++v)
            if (!eliminated[v] && (best == no_vertex || nbr[v].size() < nbr[best].size())) best = v;
        eliminated[best] = true;
        position[best] = step;
        order.push_back(best);
        later[best].assign(nbr[best].begin(), nbr[best].end());
        for (VertexId a : later[best]) {
            nbr[a].erase(best);
            for (VertexId b : later[best])
                if (a != b) nbr[a].insert(b);
        }
    }
    // Bag i belongs to order[i]; it hangs below the bag of its earliest-eliminated
    // later neighbour, or the next bag when it has none.
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = order[i];
        std::vector<VertexId> bag{v};
        bag.insert(bag.end(), later[v].begin(), later[v].end());
        std::sort(bag.begin(), bag.end());
        td.bags.push_back(std::move(bag));
        if (i + 1 == n) break;
        std::size_t parent = n;
        for (VertexId w : later[v]) parent = std::min(parent, position[w]);
        td.edges.emplace_back(i, parent == n ? i + 1 : parent);
    }
    return td;
}

View identity_view(const GalacticDigraph& g) {
    View v;
    v.graph = g;
    v.from_root.resize(g.size());
    std::iota(v.from_root.begin(), v.from_root.end(), VertexId{0});
    v.rep = v.from_root;
    return v;
}

View apply_collapse(const View& base, const CollapseMap& cm) {
    if (!(cm.source == base.graph)) throw std::invalid_argument("apply_collapse: graph mismatch");
    View v;
    v.graph = cm.target;
    v.from_root.resize(base.from_root.size());
    v.rep.assign(cm.target.size(), no_vertex);
    for (std::size_t o = 0; o < base.from_root.size(); ++o) {
        v.from_root[o] = cm.f[base.from_root[o]];
        if (v.rep[v.from_root[o]] == no_vertex) v.rep[v.from_root[o]] = static_cast<VertexId>(o);
    }
    return v;
}

std::vector<VertexId> refine_map(const View& fine, const View& coarse) {
    std::vector<VertexId> f(fine.graph.size());
    for (VertexId v = 0; v < f.size(); ++v) f[v] = coarse.from_root.at(fine.rep.at(v));
    for (std::size_t o = 0; o < fine.from_root.size(); ++o)
        if (f[fine.from_root[o]] != coarse.from_root[o])
            throw std::invalid_argument("refine_map: views are not nested");
    return f;
}

namespace {

// Collapses `set` (view vertices) when non-empty.
std::optional<CollapseMap> maybe_collapse(const View& base, View& out, const VertexSet& set) {
    if (set.empty()) {
        out = base;
        return std::nullopt;
    }
    auto cm = collapse(base.graph, set);
    out = apply_collapse(base, cm);
    return cm;
}

VertexSet image(const View& view, const VertexSet& vertices) {
    VertexSet r;
    for (VertexId v : vertices) r.push_back(view.from_root[v]);
    return make_set(std::move(r));
}

CollapsedViews views_from_sets(const GalacticDigraph& g, const TreeDecomposition& td,
                               std::size_t x, const std::vector<const NodeSets*>& sets) {
    CollapsedViews cv;
    cv.node = x;
    cv.sets = *sets[0];
    const auto& node = td.nodes[x];
    const auto root = identity_view(g);

    VertexSet all(g.size());
    std::iota(all.begin(), all.end(), VertexId{0});
    cv.to_significant = maybe_collapse(root, cv.significant, set_minus(all, cv.sets.cone));

    const VertexSet none;
    const VertexSet& comp1 = node.children.empty() ? none : sets[1]->comp;
    const VertexSet& comp2 = node.children.empty() ? none : sets[2]->comp;
    cv.to_right = maybe_collapse(cv.significant, cv.right_significant, image(cv.significant, comp1));
    cv.to_hull = maybe_collapse(cv.right_significant, cv.hull, image(cv.right_significant, comp2));

    if (cv.to_significant) cv.hull_above = cv.hull.from_root[cv.significant.rep[cv.to_significant->hole]];
    if (!comp1.empty()) cv.hull_left = cv.hull.from_root[comp1.front()];
    if (!comp2.empty()) cv.hull_right = cv.hull.from_root[comp2.front()];

    VertexSet below = image(cv.hull, cv.sets.mrg);
    if (cv.hull_left) below.push_back(*cv.hull_left);
    if (cv.hull_right) below.push_back(*cv.hull_right);
    cv.to_warp = maybe_collapse(cv.hull, cv.warp, make_set(std::move(below)));
    if (cv.hull_above) cv.warp_above = cv.to_warp ? cv.to_warp->f[*cv.hull_above] : *cv.hull_above;
    if (cv.to_warp) cv.warp_below = cv.to_warp->hole;
    return cv;
}

}  // namespace

CollapsedViews build_views(const GalacticDigraph& g, const TreeDecomposition& td, std::size_t x) {
    const auto own = node_sets(td, x);
    std::vector<NodeSets> kids;
    for (auto c : td.nodes.at(x).children) kids.push_back(node_sets(td, c));
    std::vector<const NodeSets*> sets{&own};
    for (const auto& k : kids) sets.push_back(&k);
    return views_from_sets(g, td, x, sets);
}

std::vector<CollapsedViews> build_all_views(const GalacticDigraph& g, const TreeDecomposition& td) {
    const auto sets = all_node_sets(td);
    std::vector<CollapsedViews> views;
    views.reserve(td.nodes.size());
    for (std::size_t x = 0; x < td.nodes.size(); ++x) {
        std::vector<const NodeSets*> s{&sets[x]};
        for (auto c : td.nodes[x].children) s.push_back(&sets[c]);
        views.push_back(views_from_sets(g, td, x, s));
    }
    return views;
}

}  // namespace isr
