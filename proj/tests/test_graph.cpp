#include <algorithm>
#include <stdexcept>
#include <vector>

#include "corpus.hpp"
#include "doctest.h"
#include "sandpile/families.hpp"
#include "sandpile/graph.hpp"

using namespace sandpile;

namespace {

// Independent vertex-level reachability oracle (Floyd-Warshall), sink edges
// included as they are in the graph.
std::vector<std::vector<bool>> reach_oracle(const MultiDigraph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (int v = 0; v < n; ++v) r[v][v] = true;
  for (const Edge& e : g.edges()) r[e.tail][e.head] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

}  // namespace

TEST_CASE("constructor validates structure") {
  CHECK_THROWS_AS(MultiDigraph(1, 0, {}), std::invalid_argument);
  CHECK_THROWS_AS(MultiDigraph(2, 2, {{0, 1, 1}}), std::invalid_argument);   // sink out of range
  CHECK_THROWS_AS(MultiDigraph(2, 1, {{0, 2, 1}}), std::invalid_argument);   // head out of range
  CHECK_THROWS_AS(MultiDigraph(2, 1, {{-1, 1, 1}}), std::invalid_argument);  // tail out of range
  CHECK_THROWS_AS(MultiDigraph(2, 1, {{0, 1, 0}}), std::invalid_argument);   // zero multiplicity
  CHECK_THROWS_AS(MultiDigraph(3, 2, {{0, 2, 1}}), std::invalid_argument);   // vertex 1 has no out-edge
  // sink unreachable from vertex 0 (0 only loops onto itself)
  CHECK_THROWS_AS(MultiDigraph(3, 2, {{0, 0, 1}, {1, 2, 1}}), std::invalid_argument);
  // the same shapes become valid once repaired
  CHECK_NOTHROW(MultiDigraph(2, 1, {{0, 1, 1}}));
  CHECK_NOTHROW(MultiDigraph(3, 2, {{0, 0, 1}, {0, 2, 1}, {1, 2, 1}}));
}

TEST_CASE("parallel edges merge and sort") {
  MultiDigraph g(3, 2, {{1, 2, 1}, {0, 1, 2}, {0, 1, 3}, {0, 2, 1}});
  const std::vector<Edge> expected = {{0, 1, 5}, {0, 2, 1}, {1, 2, 1}};
  CHECK(g.edges() == expected);
  CHECK(g.out_degree(0) == 6);
  CHECK(g.out_degree(1) == 1);
  CHECK(g == MultiDigraph(3, 2, {{0, 1, 5}, {0, 2, 1}, {1, 2, 1}}));
}

TEST_CASE("site numbering skips the sink") {
  MultiDigraph g(4, 1, {{0, 1, 1}, {2, 1, 1}, {3, 1, 1}});
  CHECK(g.site_count() == 3);
  CHECK(g.site_of(0) == 0);
  CHECK(g.site_of(1) == -1);
  CHECK(g.site_of(2) == 1);
  CHECK(g.site_of(3) == 2);
  for (int s = 0; s < g.site_count(); ++s) CHECK(g.site_of(g.vertex_of_site(s)) == s);
}

TEST_CASE("site arcs drop sink targets") {
  MultiDigraph g(3, 2, {{0, 1, 2}, {0, 2, 3}, {1, 2, 1}});
  CHECK(g.site_arcs(0).size() == 1);
  CHECK(g.site_arcs(0)[0].target == 1);
  CHECK(g.site_arcs(0)[0].multiplicity == 2);
  CHECK(g.site_arcs(1).empty());
  CHECK(g.site_degree(0) == 5);  // sink edges still count toward the degree
}

TEST_CASE("sink_strip removes exactly the sink's out-edges") {
  MultiDigraph g(3, 1, {{0, 1, 1}, {1, 0, 2}, {1, 2, 1}, {2, 1, 1}});
  MultiDigraph s = sink_strip(g);
  CHECK(s.vertex_count() == 3);
  CHECK(s.sink() == 1);
  CHECK(s.out_degree(1) == 0);
  CHECK(s.out_degree(0) == g.out_degree(0));
  CHECK(s.out_degree(2) == g.out_degree(2));
  CHECK(sink_strip(s) == s);
}

TEST_CASE("cyclic components: loops count, lone vertices do not") {
  // 0 -> 1 -> sink, loop at 0
  MultiDigraph g(3, 2, {{0, 0, 1}, {0, 1, 1}, {1, 2, 1}});
  ComponentPoset p = cyclic_strong_components(sink_strip(g));
  REQUIRE(p.count() == 1);
  CHECK(p.components[0] == std::vector<int>{0});
  CHECK(p.acyclic_vertices == std::vector<int>{1});
  CHECK(p.component_of[0] == 0);
  CHECK(p.component_of[1] == -1);
  CHECK(p.component_of[2] == -1);

  MultiDigraph dag(3, 2, {{0, 1, 1}, {1, 2, 1}});
  ComponentPoset q = cyclic_strong_components(sink_strip(dag));
  CHECK(q.count() == 0);
  CHECK(q.acyclic_vertices == std::vector<int>{0, 1});
}

TEST_CASE("component order on the bundled example") {
  MultiDigraph g = sink_strip(example_graph());
  ComponentPoset p = cyclic_strong_components(g);
  REQUIRE(p.count() == 3);
  CHECK(p.components[0] == std::vector<int>{3, 4, 5});
  CHECK(p.components[1] == std::vector<int>{6, 7, 8, 9});
  CHECK(p.components[2] == std::vector<int>{12});
  CHECK(p.acyclic_vertices == std::vector<int>{0, 1, 2, 10, 11, 13});
  // reflexive, plus the one strict relation: the 4-ring reaches the loop
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(p.leq[i][j] == (i == j || (i == 1 && j == 2)));
}

TEST_CASE("component order matches a reachability oracle on the corpus") {
  for (const auto& entry : sandpile::testing::analysis_corpus(20260816)) {
    const MultiDigraph g = sink_strip(entry.graph);
    const ComponentPoset p = cyclic_strong_components(g);
    const auto reach = reach_oracle(g);

    // every component really is strongly connected and cyclic
    for (const auto& comp : p.components) {
      for (int v : comp)
        for (int w : comp) CHECK(reach[v][w]);
      if (comp.size() == 1) CHECK(g.has_loop(comp[0]));
    }
    // acyclic vertices lie on no cycle
    for (int v : p.acyclic_vertices) {
      bool on_cycle = g.has_loop(v);
      for (const Edge& e : g.out_edges(v)) {
        if (e.head != v && e.head != g.sink() && reach[e.head][v]) on_cycle = true;
      }
      CHECK_FALSE(on_cycle);
    }
    // leq agrees with vertex-level reachability
    for (int i = 0; i < p.count(); ++i) {
      for (int j = 0; j < p.count(); ++j) {
        CHECK(p.leq[i][j] == reach[p.components[i][0]][p.components[j][0]]);
      }
    }
  }
}

TEST_CASE("filters of tiny orders") {
  // chain: 0 -> 1 means component(0) <= component(1); filters are {}, {top}, all
  MultiDigraph chain(3, 2, {{0, 0, 1}, {0, 1, 1}, {1, 1, 1}, {1, 2, 1}});
  ComponentPoset pc = cyclic_strong_components(sink_strip(chain));
  REQUIRE(pc.count() == 2);
  auto fc = enumerate_filters(pc);
  REQUIRE(fc.size() == 3);
  CHECK(fc[0].members.empty());
  CHECK(fc[1].members == std::vector<int>{1});
  CHECK(fc[2].members == std::vector<int>{0, 1});

  // antichain: two unrelated loops -> all four subsets
  MultiDigraph anti(3, 2, {{0, 0, 1}, {0, 2, 1}, {1, 1, 1}, {1, 2, 1}});
  auto fa = enumerate_filters(cyclic_strong_components(sink_strip(anti)));
  CHECK(fa.size() == 4);
}

TEST_CASE("filters are upward closed and complete on the corpus") {
  for (const auto& entry : sandpile::testing::analysis_corpus(7)) {
    const ComponentPoset p = cyclic_strong_components(sink_strip(entry.graph));
    const auto filters = enumerate_filters(p);

    // brute-force count over all subsets
    REQUIRE(p.count() <= 12);
    std::size_t expected = 0;
    for (std::uint32_t mask = 0; mask < (1u << p.count()); ++mask) {
      bool closed = true;
      for (int i = 0; i < p.count() && closed; ++i) {
        if (!(mask >> i & 1)) continue;
        for (int j = 0; j < p.count(); ++j) {
          if (p.leq[i][j] && !(mask >> j & 1)) closed = false;
        }
      }
      if (closed) ++expected;
    }
    CHECK(filters.size() == expected);

    for (const Filter& f : filters) {
      CHECK(std::is_sorted(f.members.begin(), f.members.end()));
      for (int i : f.members) {
        for (int j = 0; j < p.count(); ++j) {
          if (p.leq[i][j]) {
            CHECK(std::binary_search(f.members.begin(), f.members.end(), j));
          }
        }
      }
    }
  }
}

TEST_CASE("closure and free acyclic sets on the bundled example") {
  MultiDigraph g = sink_strip(example_graph());
  ComponentPoset p = cyclic_strong_components(g);

  CHECK(closure(g, {3}) == std::vector<int>{3, 4, 5});
  CHECK(closure(g, {12}) == std::vector<int>{10, 11, 12});
  CHECK(closure(g, {6}) == std::vector<int>{6, 7, 8, 9, 10, 11, 12, 13});
  CHECK(closure(g, {0}) == std::vector<int>{0, 3, 4, 5});

  using V = std::vector<int>;
  CHECK(free_acyclic_vertices(g, {}, p) == V{1, 10, 11, 13});
  CHECK(free_acyclic_vertices(g, {3, 4, 5}, p) == V{0, 1, 10, 11, 13});
  CHECK(free_acyclic_vertices(g, {10, 12}, p) == V{1, 13});
  CHECK(free_acyclic_vertices(g, {6, 7, 8, 9, 10, 12}, p) == V{1, 2});
  CHECK(free_acyclic_vertices(g, {3, 4, 5, 6, 7, 8, 9, 10, 12}, p) == V{0, 1, 2});
}

TEST_CASE("closure subgraph keeps all out-edges and the parent map") {
  MultiDigraph g = sink_strip(example_graph());
  InducedSubgraph sub = closure_subgraph(g, {12});
  CHECK(sub.parent_vertex == std::vector<int>{10, 11, 12, 14});
  CHECK(sub.graph.vertex_count() == 4);
  CHECK(sub.graph.sink() == 3);
  for (int v : {10, 11, 12}) {
    const int lv = sub.subgraph_vertex_of(v);
    REQUIRE(lv >= 0);
    CHECK(sub.graph.out_degree(lv) == g.out_degree(v));
  }
  CHECK(sub.subgraph_vertex_of(6) == -1);
  CHECK(sub.graph.has_loop(sub.subgraph_vertex_of(12)));
}

TEST_CASE("subgroup subgraph covers closure plus free riders; bare sink is empty") {
  MultiDigraph g = sink_strip(example_graph());
  ComponentPoset p = cyclic_strong_components(g);

  auto s2 = subgroup_subgraph(g, {10, 12}, p);
  REQUIRE(s2.has_value());
  CHECK(s2->parent_vertex == std::vector<int>{1, 10, 11, 12, 13, 14});

  auto s0 = subgroup_subgraph(g, {}, p);
  REQUIRE(s0.has_value());
  CHECK(s0->parent_vertex == std::vector<int>{1, 10, 11, 13, 14});

  // a two-vertex graph whose lone site reaches a cycle: S(empty) is the bare sink
  MultiDigraph tiny(2, 1, {{0, 0, 1}, {0, 1, 1}});
  ComponentPoset tp = cyclic_strong_components(sink_strip(tiny));
  CHECK_FALSE(subgroup_subgraph(sink_strip(tiny), {}, tp).has_value());
}

TEST_CASE("deep chains do not overflow the component pass") {
  const int n = 100'000;
  std::vector<Edge> edges;
  edges.reserve(2 * n);
  // long two-way chain: every adjacent pair is mutually connected, so the
  // whole chain is one big cyclic component ending at the sink
  for (int v = 0; v + 1 < n - 1; ++v) {
    edges.push_back({v, v + 1, 1});
    edges.push_back({v + 1, v, 1});
  }
  edges.push_back({n - 2, n - 1, 1});
  MultiDigraph g(n, n - 1, std::move(edges));
  ComponentPoset p = cyclic_strong_components(g);
  REQUIRE(p.count() == 1);
  CHECK(p.components[0].size() == static_cast<std::size_t>(n - 1));
}
