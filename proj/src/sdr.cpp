#include "sandpile/sdr.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace sandpile {
namespace {

void require_stripped(const MultiDigraph& g, const char* op) {
  if (g.out_degree(g.sink()) != 0) {
    throw std::invalid_argument(std::string(op) + ": sink has outgoing edges, apply sink_strip first");
  }
}

std::string vertex_layer(int v, int i) {
  return "vertex " + std::to_string(v) + " (layer " + std::to_string(i) + ")";
}

}  // namespace

std::vector<std::vector<int>> distance_partition(const MultiDigraph& g) {
  require_stripped(g, "distance_partition");
  std::vector<std::vector<int>> rev(g.vertex_count());
  for (const Edge& e : g.edges()) rev[e.head].push_back(e.tail);

  std::vector<int> dist(g.vertex_count(), -1);
  std::queue<int> bfs;
  dist[g.sink()] = 0;
  bfs.push(g.sink());
  int depth = 0;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int u : rev[v]) {
      if (dist[u] == -1) {
        dist[u] = dist[v] + 1;
        depth = std::max(depth, dist[u]);
        bfs.push(u);
      }
    }
  }

  std::vector<std::vector<int>> layers(depth + 1);
  for (int v = 0; v < g.vertex_count(); ++v) layers[dist[v]].push_back(v);
  return layers;
}

SdrCheck check_sdr(const MultiDigraph& g) {
  require_stripped(g, "check_sdr");
  SdrProfile p;
  p.layers = distance_partition(g);
  p.depth = static_cast<int>(p.layers.size()) - 1;
  p.layer_of.assign(g.vertex_count(), 0);
  for (int i = 0; i <= p.depth; ++i) {
    for (int v : p.layers[i]) p.layer_of[v] = i;
  }

  // Condition 1: an edge may not skip a layer. Heads can never be more than
  // one layer below their tail by the BFS property, so only upward skips can
  // actually occur; the check is still written symmetrically.
  for (const Edge& e : g.edges()) {
    int i = p.layer_of[e.tail], j = p.layer_of[e.head];
    if (j < i - 1 || j > i + 1) {
      return {std::nullopt, "edge " + std::to_string(e.tail) + "->" + std::to_string(e.head) +
                                " spans layers " + std::to_string(i) + " to " + std::to_string(j)};
    }
  }

  // Per-vertex tallies. For v in layer i: tail counts split its out-edges by
  // target layer; head counts tally edges arriving at v by source layer.
  const int n = g.vertex_count();
  std::vector<std::int64_t> tail_down(n, 0), tail_same(n, 0), tail_up(n, 0);
  std::vector<std::int64_t> head_down(n, 0), head_up(n, 0);
  for (const Edge& e : g.edges()) {
    int i = p.layer_of[e.tail], j = p.layer_of[e.head];
    if (j == i - 1) tail_down[e.tail] += e.multiplicity;
    if (j == i) tail_same[e.tail] += e.multiplicity;
    if (j == i + 1) {
      tail_up[e.tail] += e.multiplicity;
      head_down[e.head] += e.multiplicity;  // v is head, tail one layer in
    }
    if (i == j + 1) head_up[e.head] += e.multiplicity;  // v is head, tail one layer out
  }
  std::vector<std::int64_t> same_in(n, 0);
  for (const Edge& e : g.edges()) {
    if (p.layer_of[e.tail] == p.layer_of[e.head]) same_in[e.head] += e.multiplicity;
  }

  p.a.assign(p.depth + 1, 0);
  p.b.assign(p.depth + 1, 0);
  p.c.assign(p.depth + 1, 0);

  for (int i = 1; i <= p.depth; ++i) {
    const std::vector<int>& layer = p.layers[i];
    const int v0 = layer.front();
    p.c[i] = tail_down[v0];
    p.a[i] = tail_same[v0];
    p.b[i] = i == p.depth ? 0 : tail_up[v0];

    for (int v : layer) {
      if (tail_down[v] != p.c[i]) {
        return {std::nullopt, vertex_layer(v, i) + " sends " + std::to_string(tail_down[v]) +
                                  " edges inward, expected " + std::to_string(p.c[i])};
      }
      // Head-side inward regularity applies beyond the innermost layer; the
      // sink's intake is deliberately unconstrained.
      if (i > 1 && head_down[v] != p.c[i]) {
        return {std::nullopt, vertex_layer(v, i) + " receives " + std::to_string(head_down[v]) +
                                  " edges from the inner layer, expected " + std::to_string(p.c[i])};
      }
      if (tail_same[v] != p.a[i]) {
        return {std::nullopt, vertex_layer(v, i) + " sends " + std::to_string(tail_same[v]) +
                                  " edges within its layer, expected " + std::to_string(p.a[i])};
      }
      if (same_in[v] != p.a[i]) {
        return {std::nullopt, vertex_layer(v, i) + " receives " + std::to_string(same_in[v]) +
                                  " edges within its layer, expected " + std::to_string(p.a[i])};
      }
      if (tail_up[v] != p.b[i]) {
        return {std::nullopt, vertex_layer(v, i) + " sends " + std::to_string(tail_up[v]) +
                                  " edges outward, expected " + std::to_string(p.b[i])};
      }
      if (head_up[v] != p.b[i]) {
        return {std::nullopt, vertex_layer(v, i) + " receives " + std::to_string(head_up[v]) +
                                  " edges from the outer layer, expected " + std::to_string(p.b[i])};
      }
    }
    if (p.c[i] < 1) {
      return {std::nullopt, "layer " + std::to_string(i) + " has no inward edges"};
    }
    if (i < p.depth && p.b[i] < 1) {
      return {std::nullopt, "layer " + std::to_string(i) + " has no outward edges"};
    }
  }

  // Toppling multiplicities, outermost first, then their stability bounds.
  p.n.assign(p.depth + 2, 0);
  for (int i = p.depth; i >= 1; --i) {
    std::int64_t numerator = p.layer_out_degree(i) - 1 + p.n[i + 1] * p.b[i];
    p.n[i] = numerator / p.c[i];
  }
  for (int i = 1; i <= p.depth; ++i) {
    std::int64_t grains = p.n[i] * p.c[i] - p.n[i + 1] * p.b[i];
    if (grains < 0 || grains > p.layer_out_degree(i) - 1) {
      throw std::logic_error("check_sdr: closed-form grain count out of the stable range");
    }
  }
  return {std::move(p), ""};
}

Config sdr_identity(const MultiDigraph& g, const SdrProfile& profile) {
  Config e = zero_config(g);
  for (int i = 1; i <= profile.depth; ++i) {
    std::int64_t grains = profile.n[i] * profile.c[i] - profile.n[i + 1] * profile.b[i];
    for (int v : profile.layers[i]) e[g.site_of(v)] = grains;
  }
  if (!is_stable(g, e)) {
    throw std::logic_error("sdr_identity: closed form is not stable");
  }
  if (monoid_add(g, e, e) != e) {
    throw std::logic_error("sdr_identity: closed form is not idempotent");
  }
  return e;
}

Config wave_topple(const MultiDigraph& g, const SdrProfile& profile, const Config& x, int layer) {
  if (layer < 1 || layer > profile.depth) {
    throw std::invalid_argument("wave_topple: layer out of range");
  }
  if (static_cast<int>(x.size()) != g.site_count()) {
    throw std::invalid_argument("wave_topple: configuration size mismatch");
  }
  for (int v : profile.layers[layer]) {
    if (x[g.site_of(v)] < profile.layer_out_degree(layer)) {
      throw std::invalid_argument("wave_topple: " + vertex_layer(v, layer) +
                                  " is not ready to topple");
    }
  }
  for (int j = layer + 1; j <= profile.depth; ++j) {
    for (int v : profile.layers[j]) {
      if (x[g.site_of(v)] < profile.layer_out_degree(j) - profile.c[j]) {
        throw std::invalid_argument("wave_topple: " + vertex_layer(v, j) +
                                    " is too low for the incoming wave");
      }
    }
  }

  Config out = x;
  for (int j = layer; j <= profile.depth; ++j) {
    // Each vertex of the wave layer must be ready when its turn comes; the
    // preconditions above guarantee it, so a shortfall is an internal error.
    for (int v : profile.layers[j]) {
      if (out[g.site_of(v)] < profile.layer_out_degree(j)) {
        throw std::logic_error("wave_topple: wave reached an unready vertex");
      }
    }
    for (int v : profile.layers[j]) {
      const int site = g.site_of(v);
      out[site] -= g.site_degree(site);
      for (const MultiDigraph::SiteArc& arc : g.site_arcs(site)) {
        out[arc.target] = checked_add(out[arc.target], arc.multiplicity);
      }
    }
  }

  // Closed form: the wave drains c_layer per vertex from its own layer and
  // deposits b_{layer-1} per vertex one layer in; everything further out is
  // untouched.
  Config expected = x;
  for (int v : profile.layers[layer]) {
    expected[g.site_of(v)] -= profile.c[layer];
  }
  if (layer > 1) {
    for (int v : profile.layers[layer - 1]) {
      expected[g.site_of(v)] = checked_add(expected[g.site_of(v)], profile.b[layer - 1]);
    }
  }
  if (out != expected) {
    throw std::logic_error("wave_topple: literal toppling disagrees with the closed form");
  }
  return out;
}

}  // namespace sandpile
