#include "sandpile/graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>

namespace sandpile {
namespace {

std::string vertex_name(int v) { return std::to_string(v); }

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_stripped(const MultiDigraph& g, const char* op) {
  if (g.out_degree(g.sink()) != 0) {
    throw std::invalid_argument(std::string(op) + ": sink has outgoing edges, apply sink_strip first");
  }
}

}  // namespace

MultiDigraph::MultiDigraph(int vertex_count, int sink, std::vector<Edge> edges)
    : vertex_count_(vertex_count), sink_(sink) {
  require(vertex_count_ >= 2, "graph needs at least one non-sink vertex");
  require(sink_ >= 0 && sink_ < vertex_count_, "sink index out of range");

  std::map<std::pair<int, int>, std::int64_t> merged;
  for (const Edge& e : edges) {
    require(e.tail >= 0 && e.tail < vertex_count_,
            "edge tail " + vertex_name(e.tail) + " out of range");
    require(e.head >= 0 && e.head < vertex_count_,
            "edge head " + vertex_name(e.head) + " out of range");
    require(e.multiplicity >= 1, "edge multiplicity must be positive");
    merged[{e.tail, e.head}] += e.multiplicity;
  }

  out_.assign(vertex_count_, {});
  out_degree_.assign(vertex_count_, 0);
  loop_.assign(vertex_count_, false);
  for (const auto& [key, mult] : merged) {
    Edge e{key.first, key.second, mult};
    edges_.push_back(e);
    out_[e.tail].push_back(e);
    out_degree_[e.tail] += mult;
    if (e.tail == e.head) loop_[e.tail] = true;
  }

  for (int v = 0; v < vertex_count_; ++v) {
    if (v != sink_ && out_degree_[v] == 0) {
      throw std::invalid_argument("non-sink vertex " + vertex_name(v) + " has no outgoing edge");
    }
  }

  // Reverse reachability from the sink; failure here also covers weak
  // disconnection, since a vertex weakly separated from the sink cannot
  // reach it.
  std::vector<bool> reaches(vertex_count_, false);
  std::vector<std::vector<int>> rev(vertex_count_);
  for (const Edge& e : edges_) rev[e.head].push_back(e.tail);
  std::queue<int> bfs;
  bfs.push(sink_);
  reaches[sink_] = true;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int u : rev[v]) {
      if (!reaches[u]) {
        reaches[u] = true;
        bfs.push(u);
      }
    }
  }
  for (int v = 0; v < vertex_count_; ++v) {
    if (!reaches[v]) {
      throw std::invalid_argument("vertex " + vertex_name(v) + " cannot reach the sink");
    }
  }

  site_arcs_.assign(vertex_count_ - 1, {});
  for (const Edge& e : edges_) {
    if (e.tail == sink_ || e.head == sink_) continue;
    site_arcs_[site_of(e.tail)].push_back({site_of(e.head), e.multiplicity});
  }
}

MultiDigraph sink_strip(const MultiDigraph& g) {
  std::vector<Edge> kept;
  for (const Edge& e : g.edges()) {
    if (e.tail != g.sink()) kept.push_back(e);
  }
  return MultiDigraph(g.vertex_count(), g.sink(), std::move(kept));
}

ComponentPoset cyclic_strong_components(const MultiDigraph& g) {
  require_stripped(g, "cyclic_strong_components");
  const int n = g.vertex_count();
  const int sink = g.sink();

  // Iterative Tarjan over the non-sink vertices. Explicit frames instead of
  // recursion: deep chain graphs are part of the contract.
  std::vector<int> index(n, -1), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> sccs;
  int next_index = 0;

  struct Frame {
    int v;
    std::size_t arc;
  };
  std::vector<Frame> frames;

  for (int root = 0; root < n; ++root) {
    if (root == sink || index[root] != -1) continue;
    frames.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& arcs = g.out_edges(f.v);
      if (f.arc < arcs.size()) {
        int w = arcs[f.arc].head;
        ++f.arc;
        if (w == sink) continue;
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) {
          lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
        }
        if (lowlink[v] == index[v]) {
          std::vector<int> scc;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            scc.push_back(w);
            if (w == v) break;
          }
          std::sort(scc.begin(), scc.end());
          sccs.push_back(std::move(scc));
        }
      }
    }
  }

  ComponentPoset poset;
  poset.component_of.assign(n, -1);
  for (auto& scc : sccs) {
    bool cyclic = scc.size() >= 2 || g.has_loop(scc.front());
    if (cyclic) {
      poset.components.push_back(std::move(scc));
    } else {
      poset.acyclic_vertices.push_back(scc.front());
    }
  }
  std::sort(poset.components.begin(), poset.components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::sort(poset.acyclic_vertices.begin(), poset.acyclic_vertices.end());
  for (int c = 0; c < poset.count(); ++c) {
    for (int v : poset.components[c]) poset.component_of[v] = c;
  }

  // leq by forward reachability from each component.
  const int k = poset.count();
  poset.leq.assign(k, std::vector<bool>(k, false));
  for (int c = 0; c < k; ++c) {
    std::vector<bool> seen(n, false);
    std::queue<int> bfs;
    for (int v : poset.components[c]) {
      seen[v] = true;
      bfs.push(v);
    }
    while (!bfs.empty()) {
      int v = bfs.front();
      bfs.pop();
      for (const Edge& e : g.out_edges(v)) {
        if (e.head == sink || seen[e.head]) continue;
        seen[e.head] = true;
        bfs.push(e.head);
      }
    }
    for (int d = 0; d < k; ++d) {
      poset.leq[c][d] = seen[poset.components[d].front()];
    }
    poset.leq[c][c] = true;
  }
  return poset;
}

std::vector<Filter> enumerate_filters(const ComponentPoset& p) {
  const int k = p.count();

  // Linear extension, maximal components first: when a component is decided,
  // everything above it already is, so membership is legal exactly when the
  // whole strict up-set is in. The recursion therefore emits filters only.
  std::vector<int> order;
  std::vector<bool> placed(k, false);
  while (static_cast<int>(order.size()) < k) {
    for (int c = 0; c < k; ++c) {
      if (placed[c]) continue;
      bool ready = true;
      for (int d = 0; d < k; ++d) {
        if (d != c && p.leq[c][d] && !placed[d]) ready = false;
      }
      if (ready) {
        placed[c] = true;
        order.push_back(c);
        break;
      }
    }
  }

  std::vector<Filter> result;
  std::vector<bool> in(k, false);
  std::vector<int> chosen;

  struct Walker {
    const ComponentPoset& p;
    const std::vector<int>& order;
    std::vector<bool>& in;
    std::vector<int>& chosen;
    std::vector<Filter>& result;

    void walk(std::size_t at) {
      if (at == order.size()) {
        Filter f;
        f.members = chosen;
        std::sort(f.members.begin(), f.members.end());
        result.push_back(std::move(f));
        return;
      }
      int c = order[at];
      walk(at + 1);
      bool legal = true;
      for (int d = 0; d < p.count(); ++d) {
        if (d != c && p.leq[c][d] && !in[d]) legal = false;
      }
      if (legal) {
        in[c] = true;
        chosen.push_back(c);
        walk(at + 1);
        chosen.pop_back();
        in[c] = false;
      }
    }
  };
  Walker{p, order, in, chosen, result}.walk(0);

  std::sort(result.begin(), result.end(), [](const Filter& a, const Filter& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  return result;
}

std::vector<int> closure(const MultiDigraph& g, const std::vector<int>& seeds) {
  require_stripped(g, "closure");
  std::vector<bool> seen(g.vertex_count(), false);
  std::queue<int> bfs;
  for (int v : seeds) {
    require(v >= 0 && v < g.vertex_count() && v != g.sink(),
            "closure seed " + vertex_name(v) + " is not a non-sink vertex");
    if (!seen[v]) {
      seen[v] = true;
      bfs.push(v);
    }
  }
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (const Edge& e : g.out_edges(v)) {
      if (e.head == g.sink() || seen[e.head]) continue;
      seen[e.head] = true;
      bfs.push(e.head);
    }
  }
  std::vector<int> out;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

int InducedSubgraph::subgraph_vertex_of(int parent) const {
  auto it = std::lower_bound(parent_vertex.begin(), parent_vertex.end(), parent);
  if (it == parent_vertex.end() || *it != parent) return -1;
  return static_cast<int>(it - parent_vertex.begin());
}

namespace {

// Shared builder: vertex set = non_sink + parent sink, edges = every parent
// edge leaving a non-sink member. Callers pass out-closed sets, so heads are
// guaranteed to land inside; a head escaping the set is an internal error.
InducedSubgraph induce_out_closed(const MultiDigraph& g, std::vector<int> non_sink) {
  std::sort(non_sink.begin(), non_sink.end());
  non_sink.erase(std::unique(non_sink.begin(), non_sink.end()), non_sink.end());

  std::vector<int> verts = non_sink;
  verts.push_back(g.sink());
  std::sort(verts.begin(), verts.end());

  std::vector<int> local(g.vertex_count(), -1);
  for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);

  std::vector<Edge> edges;
  for (int v : non_sink) {
    for (const Edge& e : g.out_edges(v)) {
      if (local[e.head] == -1) {
        throw std::logic_error("induced subgraph vertex set is not out-closed");
      }
      edges.push_back({local[v], local[e.head], e.multiplicity});
    }
  }
  MultiDigraph graph(static_cast<int>(verts.size()), local[g.sink()], std::move(edges));
  return InducedSubgraph{std::move(graph), std::move(verts)};
}

}  // namespace

InducedSubgraph closure_subgraph(const MultiDigraph& g, const std::vector<int>& seeds) {
  require(!seeds.empty(), "closure_subgraph needs a nonempty seed set");
  return induce_out_closed(g, closure(g, seeds));
}

std::vector<int> free_acyclic_vertices(const MultiDigraph& g,
                                       const std::vector<int>& support,
                                       const ComponentPoset& p) {
  require_stripped(g, "free_acyclic_vertices");
  std::vector<int> cl = closure(g, support);
  std::vector<bool> in_cl(g.vertex_count(), false);
  for (int v : cl) in_cl[v] = true;

  std::vector<int> out;
  for (int v : p.acyclic_vertices) {
    if (in_cl[v]) continue;
    // BFS from v; every cyclic component touched must lie inside the
    // closure. Components are strongly connected, so testing one member
    // tests them all.
    std::vector<bool> seen(g.vertex_count(), false);
    std::queue<int> bfs;
    seen[v] = true;
    bfs.push(v);
    bool ok = true;
    while (!bfs.empty() && ok) {
      int u = bfs.front();
      bfs.pop();
      if (p.component_of[u] != -1 && !in_cl[u]) ok = false;
      for (const Edge& e : g.out_edges(u)) {
        if (e.head == g.sink() || seen[e.head]) continue;
        seen[e.head] = true;
        bfs.push(e.head);
      }
    }
    if (ok) out.push_back(v);
  }
  return out;
}

std::optional<InducedSubgraph> subgroup_subgraph(const MultiDigraph& g,
                                                 const std::vector<int>& support,
                                                 const ComponentPoset& p) {
  std::vector<int> verts = support.empty() ? std::vector<int>{} : closure(g, support);
  std::vector<int> extra = free_acyclic_vertices(g, support, p);
  verts.insert(verts.end(), extra.begin(), extra.end());
  if (verts.empty()) return std::nullopt;
  return induce_out_closed(g, std::move(verts));
}

}  // namespace sandpile
