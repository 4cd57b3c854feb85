#include "corpus.hpp"

#include <algorithm>
#include <numeric>

#include "sandpile/families.hpp"

namespace sandpile::testing {

namespace {

std::uint64_t degree_product(int vertex_count, int sink, const std::vector<Edge>& edges) {
  std::vector<std::uint64_t> deg(vertex_count, 0);
  for (const Edge& e : edges) deg[e.tail] += static_cast<std::uint64_t>(e.multiplicity);
  std::uint64_t product = 1;
  for (int v = 0; v < vertex_count; ++v) {
    if (v != sink) product *= std::max<std::uint64_t>(deg[v], 1);
  }
  return product;
}

// Random valid graph: a forward skeleton guarantees that the sink (the last
// vertex) is reachable from everywhere, then extra edges are piled on top —
// forward-only for the acyclic flavor, arbitrary (loops included) otherwise.
// Extras are dropped from the back until the state space fits the budget.
MultiDigraph random_graph(std::mt19937_64& rng, bool allow_cycles) {
  const int sites = 1 + static_cast<int>(rng() % 5);
  const int sink = sites;
  std::vector<Edge> edges;
  for (int v = 0; v < sites; ++v) {
    const int target = v + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(sink - v));
    edges.push_back({v, target, 1 + static_cast<std::int64_t>(rng() % 2)});
  }
  const std::size_t skeleton = edges.size();

  const int extras = static_cast<int>(rng() % (static_cast<std::uint64_t>(sites) + 3));
  for (int i = 0; i < extras; ++i) {
    const int tail = static_cast<int>(rng() % static_cast<std::uint64_t>(sites));
    int head;
    if (allow_cycles) {
      head = static_cast<int>(rng() % static_cast<std::uint64_t>(sites + 1));
    } else {
      head = tail + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(sink - tail));
    }
    edges.push_back({tail, head, 1 + static_cast<std::int64_t>(rng() % 3)});
  }

  while (edges.size() > skeleton && degree_product(sites + 1, sink, edges) > 10'000) {
    edges.pop_back();
  }
  return MultiDigraph(sites + 1, sink, std::move(edges));
}

}  // namespace

MultiDigraph undirected_cycle(int n) {
  if (n < 3) throw std::invalid_argument("undirected_cycle: n must be at least 3");
  const int sink = n - 1;
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v) {
    const int w = (v + 1) % n;
    edges.push_back({v, w, 1});
    edges.push_back({w, v, 1});
  }
  return MultiDigraph(n, sink, std::move(edges));
}

std::vector<CorpusEntry> analysis_corpus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusEntry> corpus;

  for (int i = 0; i < 30; ++i) {
    corpus.push_back({"random_cyclic_" + std::to_string(i), random_graph(rng, true)});
  }
  for (int i = 0; i < 20; ++i) {
    corpus.push_back({"random_acyclic_" + std::to_string(i), random_graph(rng, false)});
  }

  const std::vector<std::vector<std::int64_t>> stars = {{1}, {4}, {5}, {2, 3}, {2, 4}, {2, 2, 2}};
  for (const auto& ks : stars) {
    std::string name = "star";
    for (auto k : ks) name += "_" + std::to_string(k);
    corpus.push_back({std::move(name), star_graph(ks)});
  }

  const std::vector<std::pair<int, int>> wheels = {{2, 1}, {3, 1}, {4, 1}, {5, 1}, {2, 2}, {3, 2}, {2, 3}};
  for (auto [n, d] : wheels) {
    corpus.push_back(
        {"wheel_" + std::to_string(n) + "_" + std::to_string(d), iterated_wheel(n, d)});
  }

  corpus.push_back({"tree_3_2", regular_tree(3, 2)});
  corpus.push_back({"tree_4_2", regular_tree(4, 2)});

  const std::vector<std::pair<int, int>> tournaments = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {2, 3}};
  for (auto [k, r] : tournaments) {
    corpus.push_back(
        {"tournament_" + std::to_string(k) + "_" + std::to_string(r), regular_tournament(k, r)});
  }

  for (int n = 3; n <= 8; ++n) {
    corpus.push_back({"cycle_" + std::to_string(n), undirected_cycle(n)});
  }

  corpus.push_back({"sdr_example", sdr_example_graph()});
  return corpus;
}

MonoidTable to_table(const MonoidEnumeration& m) {
  if (!m.has_table()) throw std::logic_error("to_table: enumeration has no op table");
  MonoidTable t;
  t.order = static_cast<int>(m.size());
  // the monoid's neutral element is the all-zero config, not the group identity
  t.identity = static_cast<int>(m.index_of(Config(m.elements.front().size(), 0)));
  t.table.reserve(m.size() * m.size());
  for (std::uint32_t v : *m.op_table) t.table.push_back(static_cast<int>(v));
  return t;
}

Config random_unstable_config(std::mt19937_64& rng, const MultiDigraph& g, std::int64_t factor) {
  Config c(static_cast<std::size_t>(g.site_count()), 0);
  for (int s = 0; s < g.site_count(); ++s) {
    c[s] = static_cast<std::int64_t>(rng() %
                                     static_cast<std::uint64_t>(factor * g.site_degree(s)));
  }
  const int bump = static_cast<int>(rng() % static_cast<std::uint64_t>(g.site_count()));
  c[bump] += g.site_degree(bump);
  return c;
}

}  // namespace sandpile::testing
