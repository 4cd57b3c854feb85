#pragma once

#include <istream>
#include <string>

#include "sandpile/checker.hpp"
#include "sandpile/engine.hpp"
#include "sandpile/graph.hpp"

namespace sandpile {

// Graph text format. First directive line "n <vertex_count> <sink_index>",
// then one "e <tail> <head> <multiplicity>" line per merged edge; '#' starts
// a comment anywhere. Serialization is canonical (edges sorted by tail then
// head, duplicates merged), so parse(serialize(g)) == g exactly.
MultiDigraph parse_graph(std::istream& in);
MultiDigraph parse_graph_text(const std::string& text);
MultiDigraph load_graph(const std::string& path);
std::string serialize_graph(const MultiDigraph& g);

// Configuration text format: whitespace-separated grain counts in vertex
// order with the sink omitted. Comments as in the graph format.
Config parse_config_text(const std::string& text, int site_count);
Config load_config(const std::string& path, int site_count);
std::string serialize_config(const Config& c);

// Cayley table text format: "m <order> <identity_index>" and then order rows
// of order element indices.
MonoidTable parse_table(std::istream& in);
MonoidTable parse_table_text(const std::string& text);
MonoidTable load_table(const std::string& path);
std::string serialize_table(const MonoidTable& t);

}  // namespace sandpile
