// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number (default: all).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "isr/cli.hpp"
#include "isr/errors.hpp"
#include "isr/fpt_dp.hpp"
#include "isr/generate.hpp"
#include "isr/instance_io.hpp"
#include "isr/low_depth.hpp"
#include "isr/oracle.hpp"
#include "isr/reductions.hpp"
#include "isr/treedec.hpp"
#include "support.hpp"

using namespace isr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::string first_failure;

    void fail(const std::string& why) {
        if (pass) first_failure = why;
        pass = false;
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
};

bool yes(const SearchStats& s) { return s.verdict == Verdict::yes; }

std::string describe(const Instance& inst) {
    std::string s = format_instance(inst);
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("isr-acceptance-" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

int cli_verify(const TempDir& dir, const Instance& inst, const ReconfigSequence& witness) {
    const auto inst_path = dir.file("instance.isr");
    const auto seq_path = dir.file("witness.seq");
    std::ofstream(inst_path) << format_instance(inst);
    {
        std::ofstream out(seq_path);
        write_sequence(out, witness);
    }
    const std::vector<std::string> args{"isr", "verify", inst_path, seq_path};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

// 1. depth-2 greedy against breadth-first search on the exhaustive family.
Outcome depth2_equivalence() {
    Outcome o;
    const auto family = testing::depth2_family(3);
    if (family.size() > 100'000) o.fail("family larger than 10^5 instances");
    std::size_t positives = 0;
    for (const auto& inst : family) {
        const auto greedy = solve_depth2(inst);
        const auto bfs = solve_bfs(inst);
        if (yes(greedy) != yes(bfs)) o.fail("verdicts differ on " + describe(inst));
        if (greedy.witness && !validate_sequence(inst.graph, *greedy.witness, inst.start, inst.target))
            o.fail("invalid greedy witness on " + describe(inst));
        positives += yes(bfs);
    }
    o.detail = std::to_string(family.size()) + " instances, " + std::to_string(positives) + " positive";
    return o;
}

// 2. depth-3 kernel: verdict and size.
Outcome kernel_correctness() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::size_t shortcuts = 0, largest = 0;
    const double densities[] = {0.2, 0.35, 0.5};
    for (int i = 0; i < 1000; ++i) {
        const std::size_t k = 1 + static_cast<std::size_t>(i % 3);
        const std::size_t n = std::max<std::size_t>(2 * k, 4 + static_cast<std::size_t>(i % 11));
        const auto inst = testing::random_depth3_instance(n, k, densities[i % 3], rng);
        const auto kernel = kernelize_depth3(inst);
        const bool want = yes(solve_bfs(inst));
        bool got;
        if (kernel.verdict_shortcut) {
            ++shortcuts;
            got = *kernel.verdict_shortcut == Verdict::yes;
        } else {
            const auto stats = solve_bfs(kernel.instance);
            got = yes(stats);
            if (stats.witness &&
                !validate_sequence(inst.graph, lift_kernel_witness(inst, kernel, *stats.witness),
                                   inst.start, inst.target))
                o.fail("lifted kernel witness invalid on " + describe(inst));
            const auto size = kernel.instance.graph.size();
            largest = std::max(largest, size);
            VertexSet sd = inst.start;
            sd.insert(sd.end(), inst.target.begin(), inst.target.end());
            sd = make_set(sd);
            if (size > 2 * k + static_cast<std::size_t>(std::pow(4.0, static_cast<double>(k))))
                o.fail("kernel above 2k + 4^k on " + describe(inst));
            if (size > 2 * k + (std::size_t{1} << sd.size()))
                o.fail("kernel above 2k + 2^|S∪D| on " + describe(inst));
        }
        if (got != want) o.fail("kernel changes the verdict on " + describe(inst));
    }
    o.detail = "1000 instances, " + std::to_string(shortcuts) + " decided by normalization, largest kernel " +
               std::to_string(largest) + " vertices";
    return o;
}

// 3. 3-SAT construction.
Outcome sat_equivalence() {
    Outcome o;
    const auto family = testing::cnf_family(3, 3);
    std::size_t satisfiable = 0;
    for (const auto& phi : family) {
        const auto red = reduce_3sat(phi);
        if (depth(red.instance.graph) != 3) o.fail("depth is not 3");
        const auto stats = solve_bfs(red.instance);
        const bool sat = testing::brute_force_sat(phi);
        satisfiable += sat;
        if (yes(stats) != sat) o.fail("verdict differs from brute force");
        if (stats.witness && !satisfies(phi, extract_assignment(red, *stats.witness)))
            o.fail("extracted assignment does not satisfy the formula");
    }
    o.detail = std::to_string(family.size()) + " formulas (canonical forms), " + std::to_string(satisfiable) +
               " satisfiable";
    return o;
}

// 4. independent-set construction.
Outcome independent_set_equivalence() {
    Outcome o;
    std::size_t cases = 0, positives = 0;
    for (std::size_t n = 1; n <= 5; ++n)
        for (const auto& g : testing::graphs_up_to_isomorphism(n))
            for (std::size_t k = 1; k <= 2; ++k) {
                const auto red = reduce_independent_set(g, k);
                const auto& inst = red.instance;
                if (inst.graph.size() != 4 * k * n + 6 * k + 6) o.fail("vertex count is not 4kn+6k+6");
                if (depth(inst.graph) != 4) o.fail("depth is not 4");
                const auto stats = solve_bfs(inst);
                const bool want = testing::brute_force_independent_set(g, k);
                if (yes(stats) != want) o.fail("verdict differs from brute force");
                if (stats.witness) {
                    const auto set = extract_independent_set(red, *stats.witness);
                    if (!testing::is_independent_set_of(g, set, k)) o.fail("extracted set is not independent");
                }
                ++cases;
                positives += want;
            }
    o.detail = std::to_string(cases) + " (graph, k) pairs over graphs up to isomorphism, " +
               std::to_string(positives) + " positive";
    return o;
}

// 5. treewidth dynamic program against breadth-first search.
Outcome dp_equivalence() {
    Outcome o;
    TempDir dir;
    std::mt19937_64 rng(5005);
    std::size_t done = 0, skipped = 0, positives = 0, widest = 0, verified = 0;
    const double densities[] = {0.2, 0.3, 0.4};
    for (int i = 0; done < 500; ++i) {
        const std::size_t n = 6 + static_cast<std::size_t>(i % 7);
        const std::size_t k = 1 + static_cast<std::size_t>(i % 3);
        const auto inst = testing::random_dag_instance(n, k, densities[i % 3], rng);
        const auto file = heuristic_decomposition(inst.graph);
        if (file.width() > 4) {
            ++skipped;
            continue;
        }
        widest = std::max(widest, file.width());
        const auto td = make_rooted_binary(file);
        const auto tw = solve_tw(inst, td);
        const auto bfs = solve_bfs(inst);
        if (yes(tw) != yes(bfs)) o.fail("verdicts differ on " + describe(inst));
        if (yes(tw) && !tw.witness) o.fail("no witness on " + describe(inst));
        if (tw.witness) {
            if (cli_verify(dir, inst, *tw.witness) != exit_yes)
                o.fail("verify rejects the witness on " + describe(inst));
            ++verified;
        }
        positives += yes(bfs);
        ++done;
    }
    o.detail = "500 instances, " + std::to_string(positives) + " positive (" + std::to_string(verified) + " witnesses accepted by verify), widths up to " +
               std::to_string(widest) + ", " + std::to_string(skipped) + " wider draws skipped";
    return o;
}

// 6. iteration-bounded dynamic program against the iteration oracle.
Outcome iota_equivalence() {
    Outcome o;
    std::mt19937_64 rng(6006);
    std::size_t positives[3] = {0, 0, 0};
    const double densities[] = {0.2, 0.3, 0.45};
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 4 + static_cast<std::size_t>(i % 5);
        const std::size_t k = 1 + static_cast<std::size_t>(i % 2);
        const auto inst = testing::random_undirected_instance(n, k, densities[i % 3], rng);
        const auto td = make_rooted_binary(heuristic_decomposition(inst.graph));
        bool previous = false;
        for (int iota = 1; iota <= 2; ++iota) {
            const auto tw = solve_tw_iota(inst, td, iota);
            const auto oracle = solve_iota_oracle(inst, iota);
            if (yes(tw) != yes(oracle)) o.fail("verdicts differ on " + describe(inst));
            if (tw.witness && (!validate_sequence(inst.graph, *tw.witness, inst.start, inst.target) ||
                               iteration_of(inst.graph, *tw.witness) > iota))
                o.fail("witness invalid on " + describe(inst));
            if (previous && !yes(tw)) o.fail("not monotone in iota on " + describe(inst));
            previous = yes(tw);
            positives[iota] += yes(tw);
        }
    }
    o.detail = "200 instances, positive at iota=1: " + std::to_string(positives[1]) +
               ", at iota=2: " + std::to_string(positives[2]);
    return o;
}

// 7. property suites.
VertexSet all_vertices(std::size_t n) {
    VertexSet v(n);
    for (VertexId i = 0; i < n; ++i) v[i] = i;
    return v;
}

std::vector<VertexId> common_map(const CollapseMap& cm, const CollapseMap& other, VertexId own_hole) {
    std::vector<VertexId> m(cm.target.size());
    const auto n = static_cast<VertexId>(cm.source.size());
    for (VertexId v = 0; v < n; ++v) {
        const bool mine = cm.f[v] == cm.hole;
        const bool theirs = other.f[v] == other.hole;
        m[cm.f[v]] = mine ? own_hole : theirs ? (own_hole == n ? n + 1 : n) : v;
    }
    return m;
}

// A random walk of k tokens, or nothing when the graph has no room for them.
std::optional<ReconfigSequence> try_walk(const GalacticDigraph& g, std::size_t k, std::size_t steps,
                                         std::mt19937_64& rng) {
    try {
        return testing::random_walk(g, k, steps, rng);
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
}

std::size_t transitivity_suite(Outcome& o, std::mt19937_64& rng) {
    std::size_t cases = 0;
    for (int i = 0; cases < 1000; ++i) {
        const auto g = random_dag(6 + static_cast<std::size_t>(i % 5), 0.35, rng);
        const auto walk = try_walk(g, 1 + static_cast<std::size_t>(i % 3), 12, rng);
        if (!walk) continue;
        const auto& alpha = *walk;
        auto pool = all_vertices(g.size());
        std::shuffle(pool.begin(), pool.end(), rng);
        const auto a = make_set({pool[0], pool[1]});
        const auto b = make_set({pool[2], pool[3], pool[4]});
        auto both = a;
        both.insert(both.end(), b.begin(), b.end());
        const auto direct = collapse(g, make_set(both));
        const auto want = collapse_sequence(alpha, direct).sequence;
        for (const auto* first : {&a, &b}) {
            const auto* second = first == &a ? &b : &a;
            const auto one = collapse(g, *first);
            VertexSet next{one.hole};
            for (VertexId v : *second) next.push_back(one.f[v]);
            const auto two = collapse(one.target, make_set(next));
            if (!(two.target == direct.target)) o.fail("two-step collapse graph differs");
            const auto stepwise = collapse_sequence(collapse_sequence(alpha, one).sequence, two).sequence;
            if (stepwise != want) o.fail("sequence collapse is not transitive");
            if (check_sequence(two.target, stepwise)) o.fail("collapsed sequence invalid");
        }
        ++cases;
    }
    return cases;
}

std::size_t glue_suite(Outcome& o, std::mt19937_64& rng) {
    std::size_t cases = 0;
    while (cases < 1000) {
        const auto g = random_dag(8, 0.3, rng);
        const auto walk = try_walk(g, 1 + cases % 3, 12, rng);
        if (!walk) continue;
        const auto& delta0 = *walk;
        const auto u = testing::random_subset(all_vertices(g.size()), rng);
        VertexSet pool;
        for (VertexId v = 0; v < g.size(); ++v) {
            bool ok = !std::binary_search(u.begin(), u.end(), v);
            for (VertexId w : u) ok = ok && !g.adjacent(v, w);
            if (ok) pool.push_back(v);
        }
        if (pool.empty()) continue;
        const auto v = testing::random_subset(pool, rng);
        const auto to_u = collapse(g, u);
        const auto to_v = collapse(g, v);
        const auto uc = common_map(to_u, to_v, 8);
        const auto vc = common_map(to_v, to_u, 9);
        const auto alpha = collapse_sequence(delta0, to_u).sequence;
        const auto beta = collapse_sequence(delta0, to_v).sequence;
        const auto delta = glue(alpha, beta, GlueContext{to_u, to_v, uc, vc});
        if (check_sequence(g, delta)) o.fail("glued sequence invalid");
        if (collapse_sequence(delta, to_u).sequence != alpha) o.fail("glued sequence misses alpha");
        if (collapse_sequence(delta, to_v).sequence != beta) o.fail("glued sequence misses beta");
        ++cases;
    }
    return cases;
}

// Vertices a token occupies again after having left them.
std::vector<VertexId> revisited(const ReconfigSequence& seq) {
    std::vector<VertexId> out;
    for (std::size_t t = 0; t < seq.front().size(); ++t) {
        std::set<VertexId> left;
        for (std::size_t i = 1; i < seq.size(); ++i) {
            if (seq[i][t] == seq[i - 1][t]) continue;
            left.insert(seq[i - 1][t]);
            if (left.count(seq[i][t])) out.push_back(seq[i][t]);
        }
    }
    return out;
}

std::size_t revisit_suite(Outcome& o, std::mt19937_64& rng) {
    std::size_t cases = 0;
    for (int i = 0; cases < 1000; ++i) {
        const auto g = random_dag(7 + static_cast<std::size_t>(i % 5), 0.35, rng);
        const auto walk = try_walk(g, 1 + static_cast<std::size_t>(i % 3), 15, rng);
        if (!walk) continue;
        const auto& seq = *walk;
        if (!revisited(seq).empty()) o.fail("token revisits a vertex of a DAG");
        const auto cm = collapse(g, testing::random_subset(all_vertices(g.size()), rng));
        const auto image = collapse_sequence(seq, cm).sequence;
        for (VertexId v : revisited(image))
            if (!cm.target.is_black_hole(v)) o.fail("collapsed sequence revisits a planet");
        ++cases;
    }
    return cases;
}

std::size_t bounds_suite(Outcome& o, std::mt19937_64& rng, std::size_t& sequences) {
    std::size_t cases = 0;
    for (int i = 0; cases < 1000; ++i) {
        const bool dag = i % 2 == 0;
        const std::size_t k = 1 + static_cast<std::size_t>(i % 4 < 2 ? 0 : 1);
        // Iteration mode is kept small: the sequence count grows quickly with
        // the iteration and the number of tokens.
        const bool small = !dag && k == 2;
        const std::size_t n = dag ? 4 + static_cast<std::size_t>(i % 3) : small ? 4 : 4 + static_cast<std::size_t>(i % 2);
        auto g = dag ? random_dag(n, 0.35, rng) : random_undirected(n, 0.35, rng);
        auto set = testing::random_subset(all_vertices(n), rng);
        if (set.size() > 2) set.resize(2);
        g = collapse(g, set).target;
        const auto walk = try_walk(g, k, 0, rng);
        if (!walk) continue;
        const auto start = walk->front();
        const int iota = dag || small ? 1 : 1 + (i / 4) % 2;
        const auto rules = dag ? PruneRules::dag() : PruneRules::iteration(iota);
        const auto all = enumerate_sequences(g, start, rules);
        const double v = static_cast<double>(g.size());
        const double kk = static_cast<double>(k);
        sequences += all.size();
        for (const auto& seq : all) {
            if (check_sequence(g, seq)) o.fail("enumerated sequence invalid");
            if (seq.size() > 2 * k * static_cast<std::size_t>(iota) * g.size())
                o.fail("sequence longer than the length bound");
        }
        if (dag && std::log(static_cast<double>(all.size())) > 2 * kk * kk * v * std::log(v) + 1e-9)
            o.fail("more sequences than the count bound");
        ++cases;
    }
    return cases;
}

std::size_t iteration_suite(Outcome& o, std::mt19937_64& rng) {
    std::size_t cases = 0;
    for (int i = 0; cases < 1000; ++i) {
        const auto g = random_undirected(5 + static_cast<std::size_t>(i % 4), 0.4, rng);
        const auto walk = try_walk(g, 1 + static_cast<std::size_t>(i % 2), 20, rng);
        if (!walk) continue;
        const auto& seq = *walk;
        const auto cm = collapse(g, testing::random_subset(all_vertices(g.size()), rng));
        if (iteration_of(cm.target, collapse_sequence(seq, cm).sequence) > iteration_of(g, seq))
            o.fail("collapse increases the iteration");
        ++cases;
    }
    return cases;
}

Outcome property_suites() {
    Outcome o;
    std::mt19937_64 rng(7007);
    std::ostringstream detail;
    detail << "transitivity " << transitivity_suite(o, rng);
    detail << ", glue round-trip " << glue_suite(o, rng);
    detail << ", no planet revisit " << revisit_suite(o, rng);
    std::size_t sequences = 0;
    detail << ", length/count bounds " << bounds_suite(o, rng, sequences);
    detail << ", iteration under collapse " << iteration_suite(o, rng);
    detail << " cases; " << sequences << " enumerated sequences checked";
    o.detail = detail.str();
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "depth-2 greedy = BFS", 120, depth2_equivalence},
        {2, "depth-3 kernel verdict and size", 120, kernel_correctness},
        {3, "3-SAT construction = brute force", 300, sat_equivalence},
        {4, "independent-set construction = brute force", 900, independent_set_equivalence},
        {5, "treewidth DP = BFS", 600, dp_equivalence},
        {6, "iteration-bounded DP = iteration oracle", 600, iota_equivalence},
        {7, "property suites", 600, property_suites},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    bool all = true;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.limit_seconds) o.fail("over the time limit");
        all = all && o.pass;
        std::printf("%s [%d] %s: %s; %.1f s (limit %.0f s)%s%s\n", o.pass ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), o.detail.c_str(), seconds, c.limit_seconds,
                    o.pass ? "" : "; first failure: ", o.first_failure.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
