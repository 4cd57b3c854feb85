#include "sandpile/families.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sandpile/io.hpp"

#ifndef SANDPILE_FIXTURE_DIR
#define SANDPILE_FIXTURE_DIR ""
#endif

namespace sandpile {

MultiDigraph star_graph(const std::vector<std::int64_t>& edge_counts) {
  if (edge_counts.empty()) {
    throw std::invalid_argument("star_graph: need at least one vertex");
  }
  const int n = static_cast<int>(edge_counts.size());
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v) {
    if (edge_counts[v] < 1) {
      throw std::invalid_argument("star_graph: edge counts must be positive");
    }
    edges.push_back({v, n, edge_counts[v]});
  }
  return MultiDigraph(n + 1, n, std::move(edges));
}

MultiDigraph iterated_wheel(int n, int d) {
  if (n < 2 || d < 1) throw std::invalid_argument("iterated_wheel: need n >= 2 and d >= 1");
  auto ring_vertex = [n](int ring, int pos) { return (ring - 1) * n + 1 + pos; };
  std::vector<Edge> edges;
  for (int ring = 1; ring <= d; ++ring) {
    for (int pos = 0; pos < n; ++pos) {
      int v = ring_vertex(ring, pos);
      int w = ring_vertex(ring, (pos + 1) % n);
      edges.push_back({v, w, 1});
      edges.push_back({w, v, 1});
      if (ring == 1) {
        edges.push_back({v, 0, 1});
      }
      if (ring < d) {
        int u = ring_vertex(ring + 1, pos);
        edges.push_back({v, u, 1});
        edges.push_back({u, v, 1});
      }
    }
  }
  return MultiDigraph(n * d + 1, 0, std::move(edges));
}

MultiDigraph regular_tree(int n, int d) {
  if (n < 3 || d < 2) throw std::invalid_argument("regular_tree: need n >= 3 and d >= 2");
  // Levels 0..d-1; the root has n children, every other internal vertex
  // n-1, so undirected degree is n everywhere except at the leaves.
  std::vector<std::int64_t> level_size(d, 1);
  for (int level = 1; level < d; ++level) {
    level_size[level] = level == 1 ? n : level_size[level - 1] * (n - 1);
  }
  std::vector<std::int64_t> level_start(d, 0);
  for (int level = 1; level < d; ++level) {
    level_start[level] = level_start[level - 1] + level_size[level - 1];
  }
  const std::int64_t total = level_start[d - 1] + level_size[d - 1];
  if (total > 1'000'000) throw std::invalid_argument("regular_tree: too many vertices");
  const int sink = static_cast<int>(total);

  std::vector<Edge> edges;
  for (int level = 1; level < d; ++level) {
    const int fanout = level == 1 ? n : n - 1;
    for (std::int64_t i = 0; i < level_size[level]; ++i) {
      int child = static_cast<int>(level_start[level] + i);
      int parent = static_cast<int>(level_start[level - 1] + i / fanout);
      edges.push_back({child, parent, 1});
      edges.push_back({parent, child, 1});
    }
  }
  for (std::int64_t i = 0; i < level_size[d - 1]; ++i) {
    int leaf = static_cast<int>(level_start[d - 1] + i);
    edges.push_back({leaf, sink, n - 1});
  }
  return MultiDigraph(sink + 1, sink, std::move(edges));
}

MultiDigraph regular_tournament(int k, int r, std::uint64_t /*seed*/) {
  if (k < 1 || r < 1) throw std::invalid_argument("regular_tournament: need k >= 1 and r >= 1");
  const int players = 2 * k + 1;
  std::vector<Edge> edges;
  for (int i = 0; i < players; ++i) {
    for (int step = 1; step <= k; ++step) {
      edges.push_back({i, (i + step) % players, 1});
    }
    edges.push_back({i, players, r});
  }
  return MultiDigraph(players + 1, players, std::move(edges));
}

namespace {

MultiDigraph load_fixture(const std::string& name) {
  std::string dir = SANDPILE_FIXTURE_DIR;
  if (const char* env = std::getenv("SANDPILE_FIXTURE_DIR")) dir = env;
  if (dir.empty()) {
    throw std::runtime_error("fixture directory unknown; set SANDPILE_FIXTURE_DIR");
  }
  return load_graph(dir + "/" + name);
}

}  // namespace

MultiDigraph example_graph() { return load_fixture("example.graph"); }

MultiDigraph sdr_example_graph() { return load_fixture("sdr_example.graph"); }

}  // namespace sandpile
