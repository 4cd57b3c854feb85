#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace sandpile {

struct Edge {
  int tail = 0;
  int head = 0;
  std::int64_t multiplicity = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Finite directed multigraph with a designated sink reachable from every
// vertex. Loops and parallel edges are allowed; parallel edges are merged
// into one entry carrying a multiplicity. Instances are immutable: the
// constructor validates all structural invariants once (sink in range, at
// least one non-sink vertex, every non-sink vertex has an outgoing edge,
// the sink is reachable from everywhere, which also forces weak
// connectivity) and every operation relies on them afterwards.
class MultiDigraph {
 public:
  MultiDigraph(int vertex_count, int sink, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  int sink() const { return sink_; }

  // Non-sink vertices ("sites") are the ones that hold sand. Site indices
  // follow vertex order with the sink skipped.
  int site_count() const { return vertex_count_ - 1; }
  int site_of(int vertex) const {
    return vertex == sink_ ? -1 : (vertex < sink_ ? vertex : vertex - 1);
  }
  int vertex_of_site(int site) const { return site < sink_ ? site : site + 1; }

  std::int64_t out_degree(int vertex) const { return out_degree_[vertex]; }
  bool has_loop(int vertex) const { return loop_[vertex]; }

  // Merged edge list, sorted by (tail, head).
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Edge>& out_edges(int vertex) const { return out_[vertex]; }

  // Per-site adjacency for the toppling engine: (target site, multiplicity)
  // with edges into the sink dropped, since the sink swallows what it gets.
  // Out-edges of the sink never appear here, so the engine is indifferent to
  // them by construction.
  struct SiteArc {
    int target = 0;
    std::int64_t multiplicity = 0;
  };
  const std::vector<SiteArc>& site_arcs(int site) const { return site_arcs_[site]; }
  std::int64_t site_degree(int site) const { return out_degree_[vertex_of_site(site)]; }

  friend bool operator==(const MultiDigraph& a, const MultiDigraph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.sink_ == b.sink_ && a.edges_ == b.edges_;
  }

 private:
  int vertex_count_ = 0;
  int sink_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Edge>> out_;
  std::vector<std::int64_t> out_degree_;
  std::vector<bool> loop_;
  std::vector<std::vector<SiteArc>> site_arcs_;
};

// Copy of g with the sink's outgoing edges removed. Everything except the
// dynamics-irrelevant sink edges is preserved, including vertex numbering.
MultiDigraph sink_strip(const MultiDigraph& g);

// Cyclic strongly connected components of the sink-free part of the graph
// (a singleton counts as cyclic only if it carries a loop), ordered by
// reachability, plus the leftover acyclic vertices. Components are listed by
// smallest member; leq[i][j] holds when component j is reachable from
// component i (reflexively).
struct ComponentPoset {
  std::vector<std::vector<int>> components;
  std::vector<int> acyclic_vertices;
  std::vector<std::vector<bool>> leq;
  std::vector<int> component_of;  // per vertex; -1 for acyclic vertices and the sink
  int count() const { return static_cast<int>(components.size()); }
};

// Requires a graph without sink out-edges (apply sink_strip first). The SCC
// pass is iterative, so deep graphs cannot overflow the call stack.
ComponentPoset cyclic_strong_components(const MultiDigraph& g);

// Upward-closed set of component indices. The empty set qualifies.
struct Filter {
  std::vector<int> members;  // sorted

  friend bool operator==(const Filter&, const Filter&) = default;
};

// All filters of the component order, sorted by size and then by membership.
std::vector<Filter> enumerate_filters(const ComponentPoset& p);

// Non-sink vertices reachable from the seed set (reflexively), sorted.
// Requires a sink-stripped graph and non-sink seeds.
std::vector<int> closure(const MultiDigraph& g, const std::vector<int>& seeds);

struct InducedSubgraph {
  MultiDigraph graph;
  std::vector<int> parent_vertex;  // subgraph vertex -> parent vertex, increasing

  int subgraph_vertex_of(int parent) const;  // -1 when absent
};

// Sink-augmented subgraph on the closure of a nonempty seed set. Its edges
// are every parent edge leaving a closure vertex; heads stay inside because
// the vertex set is closed.
InducedSubgraph closure_subgraph(const MultiDigraph& g, const std::vector<int>& seeds);

// Acyclic vertices outside cl(support) all of whose reachable cyclic
// components lie inside cl(support). Sand on such vertices drains through
// the closure without waking any further component.
std::vector<int> free_acyclic_vertices(const MultiDigraph& g,
                                       const std::vector<int>& support,
                                       const ComponentPoset& p);

// Subgraph on cl(support), the free acyclic vertices, and the sink; its
// sandpile group realizes the maximal subgroup at the idempotent supported
// on `support`. Returns nullopt when that vertex set is the bare sink,
// which can happen only for empty support.
std::optional<InducedSubgraph> subgroup_subgraph(const MultiDigraph& g,
                                                 const std::vector<int>& support,
                                                 const ComponentPoset& p);

}  // namespace sandpile
