#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "isr/galactic_graph.hpp"
#include "isr/reconfiguration.hpp"

namespace isr {

// All text formats use 1-indexed vertex ids; in memory ids are 0-indexed.
//
// Instance:
//   c <comment>
//   p isr <n> <m> <k>
//   u                  (optional: arcs are undirected edges)
//   a <u> <v>          (m lines)
//   s <v>              (k lines)
//   d <v>              (k lines)
//
// Sequence:
//   q isr-seq <k> <len>
//   <v_1> ... <v_k>    (len lines, token order)

Instance parse_instance(std::string_view text);
Instance read_instance(std::istream& in);
/// Writes header, u-flag, arcs, starts, destinations in that order.
/// `comments` are emitted as leading `c` lines.
void write_instance(std::ostream& out, const Instance& inst,
                    const std::vector<std::string>& comments = {});
std::string format_instance(const Instance& inst, const std::vector<std::string>& comments = {});

ReconfigSequence parse_sequence(std::string_view text);
ReconfigSequence read_sequence(std::istream& in);
void write_sequence(std::ostream& out, const ReconfigSequence& seq);

/// PACE `.gr`: `p tw <n> <m>` then `u v` edge lines. Returns an undirected graph.
GalacticDigraph parse_gr(std::string_view text);
void write_gr(std::ostream& out, const GalacticDigraph& g);

/// Reads a whole file; throws std::runtime_error if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace isr
