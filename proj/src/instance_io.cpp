#include "isr/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "isr/errors.hpp"

namespace isr {

namespace {

// Splits into whitespace-separated fields, skipping blank lines.
struct Line {
    std::size_t number;
    std::vector<std::string> fields;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++number;
        std::istringstream ss{std::string(text.substr(pos, end - pos))};
        Line line{number, {}};
        for (std::string f; ss >> f;) line.fields.push_back(f);
        if (!line.fields.empty()) lines.push_back(std::move(line));
        pos = end + 1;
    }
    return lines;
}

std::size_t to_count(const Line& line, std::size_t i) {
    if (i >= line.fields.size()) throw parse_error(line.number, "missing field");
    const auto& s = line.fields[i];
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        throw parse_error(line.number, "expected a number, got '" + s + "'");
    }
    if (used != s.size() || s.front() == '-')
        throw parse_error(line.number, "expected a number, got '" + s + "'");
    return static_cast<std::size_t>(v);
}

VertexId to_vertex(const Line& line, std::size_t i, std::size_t n) {
    const auto v = to_count(line, i);
    if (v < 1 || v > n)
        throw parse_error(line.number, "vertex " + std::to_string(v) + " outside 1.." +
                                           std::to_string(n));
    return static_cast<VertexId>(v - 1);
}

void expect_fields(const Line& line, std::size_t count) {
    if (line.fields.size() != count)
        throw parse_error(line.number, "expected " + std::to_string(count) + " fields, got " +
                                           std::to_string(line.fields.size()));
}

}  // namespace

Instance parse_instance(std::string_view text) {
    bool have_header = false;
    bool undirected = false;
    std::size_t n = 0, m = 0, k = 0;
    std::vector<Arc> arcs;
    std::vector<VertexId> start, target;

    for (const auto& line : tokenize(text)) {
        const auto& tag = line.fields[0];
        if (tag == "c") continue;
        if (tag == "p") {
            if (have_header) throw parse_error(line.number, "duplicate header");
            expect_fields(line, 5);
            if (line.fields[1] != "isr") throw parse_error(line.number, "expected 'p isr'");
            n = to_count(line, 2);
            m = to_count(line, 3);
            k = to_count(line, 4);
            have_header = true;
            continue;
        }
        if (!have_header) throw parse_error(line.number, "content before the 'p isr' header");
        if (tag == "u") {
            expect_fields(line, 1);
            undirected = true;
        } else if (tag == "a") {
            expect_fields(line, 3);
            arcs.emplace_back(to_vertex(line, 1, n), to_vertex(line, 2, n));
            if (arcs.back().first == arcs.back().second)
                throw parse_error(line.number, "self-loop");
        } else if (tag == "s") {
            expect_fields(line, 2);
            start.push_back(to_vertex(line, 1, n));
        } else if (tag == "d") {
            expect_fields(line, 2);
            target.push_back(to_vertex(line, 1, n));
        } else {
            throw parse_error(line.number, "unknown line type '" + tag + "'");
        }
    }
    if (!have_header) throw parse_error(0, "missing 'p isr' header");
    if (arcs.size() != m)
        throw parse_error(0, "header declares " + std::to_string(m) + " arcs, found " +
                                 std::to_string(arcs.size()));
    if (start.size() != k || target.size() != k)
        throw parse_error(0, "header declares k=" + std::to_string(k) + " but found " +
                                 std::to_string(start.size()) + " starts and " +
                                 std::to_string(target.size()) + " destinations");

    Instance inst;
    inst.graph = GalacticDigraph(n, std::move(arcs),
                                 undirected ? Directedness::undirected : Directedness::directed);
    inst.start = make_set(start);
    inst.target = make_set(target);
    if (inst.start.size() != k || inst.target.size() != k)
        throw parse_error(0, "repeated start or destination vertex");
    try {
        check_instance(inst);
    } catch (const std::invalid_argument& e) {
        throw parse_error(0, e.what());
    }
    return inst;
}

Instance read_instance(std::istream& in) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_instance(text);
}

void write_instance(std::ostream& out, const Instance& inst,
                    const std::vector<std::string>& comments) {
    if (inst.graph.num_black_holes() != 0)
        throw std::invalid_argument("instance format cannot represent black holes");
    for (const auto& c : comments) out << "c " << c << '\n';
    const auto edges = inst.graph.edges();
    out << "p isr " << inst.graph.size() << ' ' << edges.size() << ' ' << inst.k() << '\n';
    if (!inst.graph.directed()) out << "u\n";
    for (const auto& [u, v] : edges) out << "a " << u + 1 << ' ' << v + 1 << '\n';
    for (VertexId v : inst.start) out << "s " << v + 1 << '\n';
    for (VertexId v : inst.target) out << "d " << v + 1 << '\n';
}

std::string format_instance(const Instance& inst, const std::vector<std::string>& comments) {
    std::ostringstream ss;
    write_instance(ss, inst, comments);
    return ss.str();
}

ReconfigSequence parse_sequence(std::string_view text) {
    const auto lines = tokenize(text);
    std::size_t i = 0;
    while (i < lines.size() && lines[i].fields[0] == "c") ++i;
    if (i == lines.size()) throw parse_error(0, "missing 'q isr-seq' header");
    const auto& header = lines[i];
    if (header.fields[0] != "q" || header.fields.size() != 4 || header.fields[1] != "isr-seq")
        throw parse_error(header.number, "expected 'q isr-seq <k> <len>'");
    const auto k = to_count(header, 2);
    const auto len = to_count(header, 3);

    // Token-free configurations are blank lines, which tokenize() drops.
    if (k == 0) return ReconfigSequence(len);
    ReconfigSequence seq;
    for (++i; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.fields[0] == "c") continue;
        expect_fields(line, k);
        Configuration c(k);
        for (std::size_t t = 0; t < k; ++t) {
            const auto v = to_count(line, t);
            if (v < 1) throw parse_error(line.number, "vertex ids are 1-indexed");
            c[t] = static_cast<VertexId>(v - 1);
        }
        seq.push_back(std::move(c));
    }
    if (seq.size() != len)
        throw parse_error(0, "header declares " + std::to_string(len) + " configurations, found " +
                                 std::to_string(seq.size()));
    return seq;
}

ReconfigSequence read_sequence(std::istream& in) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_sequence(text);
}

void write_sequence(std::ostream& out, const ReconfigSequence& seq) {
    const auto k = seq.empty() ? 0 : seq.front().size();
    out << "q isr-seq " << k << ' ' << seq.size() << '\n';
    for (const auto& c : seq) {
        for (std::size_t t = 0; t < c.size(); ++t) out << (t ? " " : "") << c[t] + 1;
        out << '\n';
    }
}

GalacticDigraph parse_gr(std::string_view text) {
    bool have_header = false;
    std::size_t n = 0, m = 0;
    std::vector<Arc> edges;
    for (const auto& line : tokenize(text)) {
        if (line.fields[0] == "c") continue;
        if (line.fields[0] == "p") {
            expect_fields(line, 4);
            if (line.fields[1] != "tw") throw parse_error(line.number, "expected 'p tw'");
            n = to_count(line, 2);
            m = to_count(line, 3);
            have_header = true;
            continue;
        }
        if (!have_header) throw parse_error(line.number, "edge before the 'p tw' header");
        expect_fields(line, 2);
        edges.emplace_back(to_vertex(line, 0, n), to_vertex(line, 1, n));
        if (edges.back().first == edges.back().second) throw parse_error(line.number, "self-loop");
    }
    if (!have_header) throw parse_error(0, "missing 'p tw' header");
    if (edges.size() != m)
        throw parse_error(0, "header declares " + std::to_string(m) + " edges, found " +
                                 std::to_string(edges.size()));
    return GalacticDigraph(n, std::move(edges), Directedness::undirected);
}

void write_gr(std::ostream& out, const GalacticDigraph& g) {
    std::vector<Arc> edges;
    for (const auto& [u, v] : g.arcs()) edges.emplace_back(std::min(u, v), std::max(u, v));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    out << "p tw " << g.size() << ' ' << edges.size() << '\n';
    for (const auto& [u, v] : edges) out << u + 1 << ' ' << v + 1 << '\n';
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace isr
