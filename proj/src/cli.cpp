#include "isr/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "isr/errors.hpp"
#include "isr/fpt_dp.hpp"
#include "isr/generate.hpp"
#include "isr/instance_io.hpp"
#include "isr/low_depth.hpp"
#include "isr/oracle.hpp"
#include "isr/reductions.hpp"
#include "isr/treedec.hpp"

namespace isr {

namespace {

using nlohmann::ordered_json;

// Ordered key/value report, printed as `key: value` lines or one JSON object.
class Report {
public:
    template <typename T>
    void add(const std::string& key, T value) {
        data_[key] = std::move(value);
    }

    void print(std::ostream& out, bool json) const {
        if (json) {
            out << data_.dump() << '\n';
            return;
        }
        for (const auto& [key, value] : data_.items()) {
            out << key << ": ";
            if (value.is_string()) out << value.get<std::string>();
            else if (value.is_array()) {
                bool first = true;
                for (const auto& v : value) {
                    out << (first ? "" : " ") << v.dump();
                    first = false;
                }
            } else out << value.dump();
            out << '\n';
        }
    }

private:
    ordered_json data_ = ordered_json::object();
};

class Stopwatch {
public:
    double lap_ms() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// Raised for usage problems detected after CLI11 parsing.
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f) throw std::runtime_error("cannot write " + path);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") out << text;
    else write_text_file(path, text);
}

struct SolveArgs {
    std::string instance;
    std::string algo = "auto";
    std::string td;
    int iota = 0;
    std::size_t budget = default_state_budget;
    std::uint64_t seed = 1;
    std::string witness;
    bool json = false;
    bool timings = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
    Report report;
    Stopwatch clock;
    report.add("command", "solve");
    report.add("instance", a.instance);
    const auto inst = parse_instance(read_file(a.instance));
    const double parse_ms = clock.lap_ms();

    std::string algo = a.algo;
    const auto& g = inst.graph;
    const bool dag = g.directed() && is_dag(g);
    if (algo == "auto") {
        const int d = dag ? depth(g) : 0;
        algo = !dag ? "bfs" : d <= 2 ? "depth2" : d == 3 ? "kernel" : "bfs";
    }
    if ((algo == "tw" || algo == "tw-iota") && a.td.empty())
        throw usage_error("--algo " + algo + " requires --td");
    if (algo == "tw-iota" && a.iota < 1) throw usage_error("--algo tw-iota requires --iota >= 1");
    if (algo != "tw-iota" && a.iota != 0) throw usage_error("--iota only applies to --algo tw-iota");
    if (algo != "tw" && algo != "tw-iota" && !a.td.empty())
        throw usage_error("--td only applies to the tw algorithms");

    report.add("algorithm", algo);
    report.add("seed", a.seed);
    report.add("vertices", g.size());
    report.add("tokens", inst.k());

    SearchStats stats;
    std::vector<NodeStats> nodes;
    double prepare_ms = 0;
    if (algo == "bfs") {
        stats = solve_bfs(inst, a.budget);
    } else if (algo == "depth2") {
        stats = solve_depth2(inst);
    } else if (algo == "kernel") {
        const auto kernel = kernelize_depth3(inst);
        prepare_ms = clock.lap_ms();
        report.add("kernel_vertices", kernel.instance.graph.size());
        report.add("kernel_rewrites", kernel.trace.size());
        if (kernel.verdict_shortcut == Verdict::no) {
            stats.verdict = Verdict::no;
        } else {
            stats = solve_bfs(kernel.instance, a.budget);
            if (stats.witness) stats.witness = lift_kernel_witness(inst, kernel, *stats.witness);
        }
    } else if (algo == "tw" || algo == "tw-iota") {
        const auto td = parse_td(read_file(a.td), g);
        prepare_ms = clock.lap_ms();
        report.add("width", td.width);
        report.add("nodes", td.nodes.size());
        DpOptions opts;
        opts.state_budget = a.budget;
        stats = algo == "tw" ? solve_tw(inst, td, opts, &nodes)
                             : solve_tw_iota(inst, td, a.iota, opts, &nodes);
        if (algo == "tw-iota") report.add("iota", a.iota);
    } else {
        throw usage_error("unknown algorithm '" + algo + "'");
    }
    const double solve_ms = clock.lap_ms();

    report.add("verdict", to_string(stats.verdict));
    report.add("states", stats.states_expanded);
    if (!nodes.empty()) {
        std::vector<std::size_t> sizes;
        std::size_t largest = 0;
        for (const auto& n : nodes) {
            sizes.push_back(n.automaton_states);
            largest = std::max(largest, n.automaton_states);
        }
        report.add("profile_states", sizes);
        report.add("max_profile_states", largest);
    }
    if (stats.witness) {
        if (auto bad = check_solution(g, *stats.witness, inst.start, inst.target))
            throw invariant_violation("solver produced an invalid witness at step " +
                                      std::to_string(bad->step));
        report.add("witness_length", stats.witness->size());
        if (!a.witness.empty()) {
            std::ostringstream ss;
            write_sequence(ss, *stats.witness);
            write_text_file(a.witness, ss.str());
            report.add("witness", a.witness);
        }
    }
    if (a.timings) {
        report.add("time_parse_ms", parse_ms);
        if (prepare_ms > 0) report.add("time_prepare_ms", prepare_ms);
        report.add("time_solve_ms", solve_ms);
    }
    report.print(out, a.json);
    return stats.verdict == Verdict::yes ? exit_yes : exit_no;
}

int cmd_verify(const std::string& instance, const std::string& sequence, bool json,
               std::ostream& out) {
    const auto inst = parse_instance(read_file(instance));
    const auto seq = parse_sequence(read_file(sequence));
    Report report;
    report.add("command", "verify");
    report.add("instance", instance);
    report.add("sequence", sequence);
    std::optional<Violation> bad;
    if (!seq.empty() && seq.front().size() != inst.k())
        bad = Violation{0, "sequence has " + std::to_string(seq.front().size()) + " tokens, instance " +
                               std::to_string(inst.k())};
    else
        bad = check_solution(inst.graph, seq, inst.start, inst.target);
    report.add("result", bad ? "invalid" : "valid");
    if (bad) {
        report.add("step", bad->step);
        report.add("reason", bad->reason);
    }
    report.print(out, json);
    return bad ? exit_no : exit_yes;
}

int cmd_kernelize(const std::string& instance, const std::string& output, std::ostream& out) {
    const auto inst = parse_instance(read_file(instance));
    const auto kernel = kernelize_depth3(inst);
    std::vector<std::string> comments;
    for (const auto& r : kernel.trace) comments.push_back(to_string(r));
    if (kernel.verdict_shortcut)
        comments.push_back(std::string("decided: ") + to_string(*kernel.verdict_shortcut));
    emit(output, format_instance(kernel.instance, comments), out);
    return exit_yes;
}

int cmd_reduce_sat(const std::string& file, const std::string& output, const std::string& roles,
                   std::ostream& out) {
    const auto phi = parse_dimacs(read_file(file));
    const auto red = reduce_3sat(phi);
    emit(output, format_instance(red.instance, {"3-SAT reduction of " + file}), out);
    if (!roles.empty()) {
        std::ostringstream ss;
        write_roles(ss, red.roles);
        write_text_file(roles, ss.str());
    }
    return exit_yes;
}

int cmd_reduce_is(const std::string& file, std::size_t k, const std::string& output,
                  const std::string& roles, std::ostream& out) {
    const auto g = parse_gr(read_file(file));
    const auto red = reduce_independent_set(g, k);
    emit(output,
         format_instance(red.instance,
                         {"independent set reduction of " + file + " with k=" + std::to_string(k)}),
         out);
    if (!roles.empty()) {
        std::ostringstream ss;
        write_roles(ss, red.roles);
        write_text_file(roles, ss.str());
    }
    return exit_yes;
}

struct GenerateArgs {
    std::string kind;
    std::size_t n = 10;
    std::size_t k = 2;
    double p = 0.3;
    std::uint64_t seed = 1;
    std::string output;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    std::mt19937_64 rng(a.seed);
    GalacticDigraph g;
    int declared_depth = 0;
    if (a.kind == "dag-depth2" || a.kind == "dag-depth3") {
        declared_depth = a.kind == "dag-depth2" ? 2 : 3;
        g = random_layered_dag(a.n, declared_depth, a.p, rng);
    } else if (a.kind == "dag-random") {
        g = random_dag(a.n, a.p, rng);
    } else if (a.kind == "undirected") {
        g = random_undirected(a.n, a.p, rng);
    } else {
        throw usage_error("unknown generator '" + a.kind + "'");
    }
    if (declared_depth > 0 && depth(g) > declared_depth)
        throw invariant_violation("generated graph is deeper than declared");
    const auto inst = random_instance(std::move(g), a.k, rng);
    std::ostringstream header;
    header << "generated " << a.kind << " n=" << a.n << " k=" << a.k << " p=" << a.p
           << " seed=" << a.seed;
    emit(a.output, format_instance(inst, {header.str()}), out);
    return exit_yes;
}

GalacticDigraph read_any_graph(const std::string& path) {
    const auto text = read_file(path);
    if (path.size() >= 3 && path.compare(path.size() - 3, 3, ".gr") == 0) return parse_gr(text);
    return parse_instance(text).graph;
}

int cmd_decompose(const std::string& input, const std::string& output, std::ostream& out,
                  std::ostream& err) {
    const auto g = read_any_graph(input);
    const auto td = heuristic_decomposition(g);
    validate(td, g);
    emit(output, format_td(td), out);
    (output.empty() || output == "-" ? err : out) << "width: " << td.width() << '\n';
    return exit_yes;
}

int cmd_convert(const std::string& input, const std::string& output, std::ostream& out) {
    const auto g = read_any_graph(input);
    std::ostringstream ss;
    write_gr(ss, g);
    emit(output, ss.str(), out);
    return exit_yes;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Independent set reconfiguration under directed token sliding"};
    app.name("isr");
    app.require_subcommand(1);

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Decide an instance");
    s->add_option("instance", solve.instance, "Instance file")->required();
    s->add_option("--algo", solve.algo, "auto, bfs, depth2, kernel, tw or tw-iota")
        ->check(CLI::IsMember({"auto", "bfs", "depth2", "kernel", "tw", "tw-iota"}));
    s->add_option("--td", solve.td, "Tree decomposition (.td) for the tw algorithms");
    s->add_option("--iota", solve.iota, "Iteration bound for tw-iota");
    s->add_option("--budget", solve.budget, "State budget");
    s->add_option("--seed", solve.seed, "Random seed");
    s->add_option("--witness", solve.witness, "Write the witness sequence here");
    s->add_flag("--json", solve.json, "Print the report as JSON");
    s->add_flag("--timings", solve.timings, "Include wall-clock timings");

    std::string v_instance, v_sequence;
    bool v_json = false;
    auto* v = app.add_subcommand("verify", "Check a sequence against an instance");
    v->add_option("instance", v_instance, "Instance file")->required();
    v->add_option("sequence", v_sequence, "Sequence file")->required();
    v->add_flag("--json", v_json, "Print the report as JSON");

    std::string k_instance, k_output;
    auto* k = app.add_subcommand("kernelize", "Kernelize a depth-3 instance");
    k->add_option("instance", k_instance, "Instance file")->required();
    k->add_option("-o,--output", k_output, "Write the kernel here");

    std::string r_file, r_output, r_roles;
    std::size_t r_k = 0;
    auto* r = app.add_subcommand("reduce", "Build hardness-reduction instances");
    r->require_subcommand(1);
    auto* rs = r->add_subcommand("sat", "From a DIMACS 3-CNF formula");
    rs->add_option("cnf", r_file, "DIMACS CNF file")->required();
    rs->add_option("-o,--output", r_output, "Write the instance here");
    rs->add_option("--roles", r_roles, "Write the vertex role map here");
    auto* ri = r->add_subcommand("is", "From a .gr graph and a size k");
    ri->add_option("graph", r_file, ".gr graph file")->required();
    ri->add_option("k", r_k, "Independent set size")->required()->check(CLI::PositiveNumber);
    ri->add_option("-o,--output", r_output, "Write the instance here");
    ri->add_option("--roles", r_roles, "Write the vertex role map here");

    GenerateArgs gen;
    auto* gcmd = app.add_subcommand("generate", "Random instance");
    gcmd->add_option("kind", gen.kind, "dag-depth2, dag-depth3, dag-random or undirected")
        ->required()
        ->check(CLI::IsMember({"dag-depth2", "dag-depth3", "dag-random", "undirected"}));
    gcmd->add_option("--n", gen.n, "Number of vertices");
    gcmd->add_option("--k", gen.k, "Number of tokens");
    gcmd->add_option("--p", gen.p, "Arc probability")->check(CLI::Range(0.0, 1.0));
    gcmd->add_option("--seed", gen.seed, "Random seed");
    gcmd->add_option("-o,--output", gen.output, "Write the instance here");

    std::string d_input, d_output;
    auto* d = app.add_subcommand("decompose", "Heuristic tree decomposition (.td)");
    d->add_option("input", d_input, "Instance or .gr file")->required();
    d->add_option("-o,--output", d_output, "Write the decomposition here");

    std::string c_input, c_output;
    auto* c = app.add_subcommand("convert", "Underlying undirected graph as .gr");
    c->add_option("input", c_input, "Instance file")->required();
    c->add_option("-o,--output", c_output, "Write the graph here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (s->parsed()) return cmd_solve(solve, out);
        if (v->parsed()) return cmd_verify(v_instance, v_sequence, v_json, out);
        if (k->parsed()) return cmd_kernelize(k_instance, k_output, out);
        if (rs->parsed()) return cmd_reduce_sat(r_file, r_output, r_roles, out);
        if (ri->parsed()) return cmd_reduce_is(r_file, r_k, r_output, r_roles, out);
        if (gcmd->parsed()) return cmd_generate(gen, out);
        if (d->parsed()) return cmd_decompose(d_input, d_output, out, err);
        if (c->parsed()) return cmd_convert(c_input, c_output, out);
    } catch (const usage_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const parse_error& e) {
        err << "error: malformed input: " << e.what() << '\n';
        return exit_usage;
    } catch (const resource_exhausted& e) {
        err << "error: " << e.what() << '\n';
        return exit_budget;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    }
    return exit_usage;
}

}  // namespace isr
