// Command-line front end: identity / idempotents / monoid / check-monoid /
// stabilize / generate. Exit codes: 0 success, 1 analysis-level failure
// (obstruction found, size cap exceeded, disagreement), 2 invalid input.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sandpile/checker.hpp"
#include "sandpile/engine.hpp"
#include "sandpile/errors.hpp"
#include "sandpile/families.hpp"
#include "sandpile/graph.hpp"
#include "sandpile/io.hpp"
#include "sandpile/monoid.hpp"
#include "sandpile/sdr.hpp"

namespace {

using nlohmann::json;
using namespace sandpile;

struct GlobalOptions {
  std::string format = "human";
  std::uint64_t cap_elements = 1'000'000;
  std::uint64_t cap_table = 1'000;

  bool records() const { return format == "records"; }
};

json config_json(const Config& c) {
  json out = json::array();
  for (auto v : c) out.push_back(v);
  return out;
}

std::string config_line(const Config& c) {
  std::string out = serialize_config(c);
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

void emit(const GlobalOptions& opts, const json& record) {
  if (opts.records()) std::cout << record.dump() << '\n';
}

int cmd_identity(const GlobalOptions& opts, const std::string& graph_file, bool with_sdr) {
  const MultiDigraph g = load_graph(graph_file);
  const Config e = group_identity(g);

  json record{{"command", "identity"}, {"identity", config_json(e)}};
  if (!opts.records()) std::cout << "identity: " << config_line(e) << '\n';

  int exit_code = 0;
  if (with_sdr) {
    const MultiDigraph stripped = sink_strip(g);
    const SdrCheck check = check_sdr(stripped);
    if (!check.profile) {
      record["sdr"] = {{"regular", false}, {"witness", check.witness}};
      if (!opts.records())
        std::cout << "sdr: not sink-distance-regular (" << check.witness << ")\n";
      exit_code = 1;
    } else {
      const SdrProfile& p = *check.profile;
      const Config closed = sdr_identity(stripped, p);
      const bool agrees = closed == e;
      record["sdr"] = {{"regular", true},
                       {"depth", p.depth},
                       {"a", std::vector<std::int64_t>(p.a.begin() + 1, p.a.end())},
                       {"b", std::vector<std::int64_t>(p.b.begin() + 1, p.b.end())},
                       {"c", std::vector<std::int64_t>(p.c.begin() + 1, p.c.end())},
                       {"n", std::vector<std::int64_t>(p.n.begin() + 1, p.n.end() - 1)},
                       {"closed_form", config_json(closed)},
                       {"agrees", agrees}};
      if (!opts.records()) {
        std::cout << "sdr: depth " << p.depth;
        for (int i = 1; i <= p.depth; ++i) {
          std::cout << " | layer " << i << ": a=" << p.a[i] << " b=" << p.b[i]
                    << " c=" << p.c[i] << " n=" << p.n[i];
        }
        std::cout << '\n';
        std::cout << "closed form: " << config_line(closed) << '\n';
        std::cout << "agreement: " << (agrees ? "yes" : "NO") << '\n';
      }
      if (!agrees) exit_code = 1;
    }
  }
  emit(opts, record);
  return exit_code;
}

int cmd_idempotents(const GlobalOptions& opts, const std::string& graph_file) {
  const MultiDigraph g = load_graph(graph_file);

  std::vector<IdempotentRecord> records;
  std::string order_note;
  try {
    records = idempotents(g, {.with_subgroup_orders = true, .cap_elements = opts.cap_elements});
  } catch (const SizeError& err) {
    order_note = err.what();
    records = idempotents(g, {.with_subgroup_orders = false});
  }

  json out{{"command", "idempotents"}, {"count", records.size()}};
  json list = json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const IdempotentRecord& r = records[i];
    std::vector<int> subgraph_vertices;
    if (r.subgroup_graph) {
      for (int v : r.subgroup_graph->parent_vertex) {
        if (v != g.sink()) subgraph_vertices.push_back(v);
      }
    }
    json rec{{"index", i},
             {"filter", r.filter.members},
             {"config", config_json(r.config)},
             {"closure", r.closure_vertices},
             {"free_acyclic", r.free_acyclic},
             {"subgroup_vertices", subgraph_vertices}};
    if (order_note.empty()) rec["subgroup_order"] = r.subgroup_order;
    list.push_back(std::move(rec));

    if (!opts.records()) {
      std::cout << "idempotent " << i << ":\n";
      std::cout << "  config: " << config_line(r.config) << '\n';
      auto print_set = [](const char* name, const std::vector<int>& xs) {
        std::cout << "  " << name << ":";
        for (int x : xs) std::cout << ' ' << x;
        std::cout << '\n';
      };
      print_set("filter components", r.filter.members);
      print_set("closure vertices", r.closure_vertices);
      print_set("free acyclic vertices", r.free_acyclic);
      print_set("subgroup vertices", subgraph_vertices);
      if (order_note.empty()) std::cout << "  subgroup order: " << r.subgroup_order << '\n';
    }
  }
  out["idempotents"] = std::move(list);
  if (!order_note.empty()) {
    out["subgroup_order_note"] = order_note;
    if (!opts.records()) std::cout << "subgroup orders skipped: " << order_note << '\n';
  }
  if (!opts.records()) std::cout << records.size() << " idempotents\n";
  emit(opts, out);
  return 0;
}

int cmd_monoid(const GlobalOptions& opts, const std::string& graph_file,
               const std::string& export_path) {
  const MultiDigraph g = load_graph(graph_file);
  const MonoidEnumeration m =
      enumerate_monoid(g, {.cap_elements = opts.cap_elements, .cap_table = opts.cap_table});

  const std::uint64_t monoid_size = m.size();
  const std::uint64_t group_size = static_cast<std::uint64_t>(
      std::count(m.recurrent_mask.begin(), m.recurrent_mask.end(), true));
  const std::vector<std::uint64_t> factors = invariant_factors(g, m);

  json record{{"command", "monoid"},
              {"monoid_size", monoid_size},
              {"group_size", group_size},
              {"identity", config_json(m.identity)},
              {"invariant_factors", factors},
              {"has_table", m.has_table()}};
  if (!opts.records()) {
    std::cout << "monoid size: " << monoid_size << '\n';
    std::cout << "group size: " << group_size << '\n';
    std::cout << "recurrent fraction: " << group_size << '/' << monoid_size << '\n';
    std::cout << "identity: " << config_line(m.identity) << '\n';
    std::cout << "invariant factors:";
    if (factors.empty()) std::cout << " (trivial group)";
    for (auto f : factors) std::cout << ' ' << f;
    std::cout << '\n';
  }

  int exit_code = 0;
  if (!export_path.empty()) {
    if (!m.has_table()) {
      std::cerr << "error: Cayley table not built: " << monoid_size
                << " elements exceed --cap-table " << opts.cap_table << '\n';
      exit_code = 1;
    } else {
      MonoidTable t;
      t.order = static_cast<int>(monoid_size);
      t.identity = static_cast<int>(m.index_of(m.identity));
      t.table.reserve(monoid_size * monoid_size);
      for (std::uint32_t v : *m.op_table) t.table.push_back(static_cast<int>(v));
      std::ofstream out(export_path);
      if (!out) throw std::invalid_argument("cannot write '" + export_path + "'");
      out << serialize_table(t);
      record["table_file"] = export_path;
      if (!opts.records()) std::cout << "table written to " << export_path << '\n';
    }
  }
  emit(opts, record);
  return exit_code;
}

int cmd_check_monoid(const GlobalOptions& opts, const std::string& table_file) {
  const MonoidTable t = load_table(table_file);
  const RealizabilityReport report = realizability_report(t);

  const char* lattice = report.lattice == LatticeVerdict::Distributive ? "distributive"
                        : report.lattice == LatticeVerdict::NotDistributive
                            ? "not distributive"
                            : "not a lattice";
  json record{{"command", "check_monoid"},
              {"order", t.order},
              {"lattice", lattice},
              {"fully_idempotent", report.fully_idempotent},
              {"idempotent_size_feasible", report.idempotent_size_feasible},
              {"obstructed", report.obstructed()},
              {"reasons", report.reasons()}};
  if (report.violation) record["violation"] = report.violation->description;
  if (report.fixed_point) {
    record["fixed_point"] = {
        {"u", report.fixed_point->u}, {"a", report.fixed_point->a}, {"k", report.fixed_point->k}};
  }

  if (!opts.records()) {
    if (!report.obstructed()) {
      std::cout << "no known obstruction\n";
    } else {
      std::cout << "obstructed:\n";
      for (const auto& reason : report.reasons()) std::cout << "  - " << reason << '\n';
    }
  }
  emit(opts, record);
  if (report.violation) return 2;
  return report.obstructed() ? 1 : 0;
}

int cmd_stabilize(const GlobalOptions& opts, const std::string& graph_file,
                  const std::string& config_file, const std::string& policy_name) {
  const MultiDigraph g = load_graph(graph_file);
  const Config c = load_config(config_file, g.site_count());

  TopplePolicy policy = TopplePolicy::FifoBatch;
  if (policy_name == "min-index") policy = TopplePolicy::MinIndexSingle;
  else if (policy_name == "lifo") policy = TopplePolicy::LifoSingle;
  else if (policy_name != "fifo")
    throw std::invalid_argument("unknown policy '" + policy_name + "'");

  const StabilizeResult result = stabilize(g, c, policy);
  const std::int64_t total =
      std::accumulate(result.topple_counts.begin(), result.topple_counts.end(), std::int64_t{0});

  if (!opts.records()) {
    std::cout << "stable: " << config_line(result.config) << '\n';
    std::cout << "topples: " << config_line(result.topple_counts) << '\n';
    std::cout << "total topples: " << total << '\n';
  }
  emit(opts, json{{"command", "stabilize"},
                  {"stable", config_json(result.config)},
                  {"topples", config_json(result.topple_counts)},
                  {"total_topples", total}});
  return 0;
}

int cmd_generate(const GlobalOptions& opts, const std::string& family,
                 const std::vector<std::int64_t>& params, int seed, const std::string& out_path) {
  MultiDigraph g = [&]() -> MultiDigraph {
    if (family == "star") {
      if (params.empty()) throw std::invalid_argument("star needs at least one edge count");
      return star_graph(params);
    }
    auto int_param = [&](std::size_t i) { return static_cast<int>(params.at(i)); };
    if (family == "wheel") {
      if (params.size() != 2) throw std::invalid_argument("wheel needs <n> <d>");
      return iterated_wheel(int_param(0), int_param(1));
    }
    if (family == "tree") {
      if (params.size() != 2) throw std::invalid_argument("tree needs <n> <d>");
      return regular_tree(int_param(0), int_param(1));
    }
    if (family == "tournament") {
      if (params.size() != 2) throw std::invalid_argument("tournament needs <k> <r>");
      return regular_tournament(int_param(0), int_param(1), seed);
    }
    if (family == "example") {
      if (!params.empty()) throw std::invalid_argument("example takes no parameters");
      return example_graph();
    }
    if (family == "sdr-example") {
      if (!params.empty()) throw std::invalid_argument("sdr-example takes no parameters");
      return sdr_example_graph();
    }
    throw std::invalid_argument("unknown family '" + family +
                                "' (star, wheel, tree, tournament, example, sdr-example)");
  }();

  const std::string text = serialize_graph(g);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot write '" + out_path + "'");
    out << text;
    if (!opts.records()) std::cout << "graph written to " << out_path << '\n';
  }
  emit(opts, json{{"command", "generate"},
                  {"family", family},
                  {"vertex_count", g.vertex_count()},
                  {"sink", g.sink()}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sandpile monoid and group analysis on directed multigraphs"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"human", "records"}))
      ->capture_default_str();
  app.add_option("--cap-elements", opts.cap_elements,
                 "largest state space any enumeration may visit")
      ->capture_default_str();
  app.add_option("--cap-table", opts.cap_table, "largest monoid to build a Cayley table for")
      ->capture_default_str();

  std::string graph_file, config_file, table_file, export_path, out_path, family;
  std::string policy = "fifo";
  std::vector<std::int64_t> params;
  bool with_sdr = false;
  int seed = 0;

  // Parent-level flags remain usable after a subcommand name.
  app.fallthrough();

  auto* identity = app.add_subcommand("identity", "group identity of a graph");
  identity->add_option("graph", graph_file, "graph file")->required();
  identity->add_flag("--sdr", with_sdr,
                     "check sink-distance-regularity and compare the closed-form identity");

  auto* idem = app.add_subcommand("idempotents", "all idempotents with their structure");
  idem->add_option("graph", graph_file, "graph file")->required();

  auto* monoid = app.add_subcommand("monoid", "enumerate the monoid and group");
  monoid->add_option("graph", graph_file, "graph file")->required();
  monoid->add_option("--export-table", export_path, "write the Cayley table to this file");

  auto* check = app.add_subcommand("check-monoid", "test a Cayley table for obstructions");
  check->add_option("table", table_file, "table file")->required();

  auto* stab = app.add_subcommand("stabilize", "stabilize a configuration");
  stab->add_option("graph", graph_file, "graph file")->required();
  stab->add_option("config", config_file, "configuration file")->required();
  stab->add_option("--policy", policy, "toppling order: fifo, min-index, lifo")
      ->capture_default_str();

  auto* gen = app.add_subcommand("generate", "emit a generated graph in the text format");
  gen->add_option("family", family, "star, wheel, tree, tournament, example, sdr-example")
      ->required();
  gen->add_option("params", params, "family parameters");
  gen->add_option("--seed", seed, "reserved for alternative tournaments")->capture_default_str();
  gen->add_option("--out", out_path, "write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(identity)) return cmd_identity(opts, graph_file, with_sdr);
    if (app.got_subcommand(idem)) return cmd_idempotents(opts, graph_file);
    if (app.got_subcommand(monoid)) return cmd_monoid(opts, graph_file, export_path);
    if (app.got_subcommand(check)) return cmd_check_monoid(opts, table_file);
    if (app.got_subcommand(stab)) return cmd_stabilize(opts, graph_file, config_file, policy);
    if (app.got_subcommand(gen)) return cmd_generate(opts, family, params, seed, out_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
