#include "sandpile/engine.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace sandpile {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("grain arithmetic overflow in addition");
  }
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("grain arithmetic overflow in multiplication");
  }
  return r;
}

namespace {

void check_config_shape(const MultiDigraph& g, const Config& c, const char* op) {
  if (static_cast<int>(c.size()) != g.site_count()) {
    throw std::invalid_argument(std::string(op) + ": configuration has " +
                                std::to_string(c.size()) + " entries, graph has " +
                                std::to_string(g.site_count()) + " sites");
  }
  for (std::int64_t v : c) {
    if (v < 0) throw std::invalid_argument(std::string(op) + ": negative grain count");
  }
}

void require_stable(const MultiDigraph& g, const Config& c, const char* op) {
  if (!is_stable(g, c)) {
    throw std::invalid_argument(std::string(op) + ": configuration is not stable");
  }
}

// Topple site s exactly `times` times: remove times*degree grains, push
// times*multiplicity along every outgoing arc. Grains leaving toward the
// sink vanish with the removal.
void topple(const MultiDigraph& g, Config& c, std::vector<std::int64_t>& counts, int s,
            std::int64_t times) {
  c[s] -= checked_mul(times, g.site_degree(s));
  counts[s] = checked_add(counts[s], times);
  for (const MultiDigraph::SiteArc& arc : g.site_arcs(s)) {
    c[arc.target] = checked_add(c[arc.target], checked_mul(times, arc.multiplicity));
  }
}

}  // namespace

Config zero_config(const MultiDigraph& g) { return Config(g.site_count(), 0); }

bool is_stable(const MultiDigraph& g, const Config& c) {
  check_config_shape(g, c, "is_stable");
  for (int s = 0; s < g.site_count(); ++s) {
    if (c[s] >= g.site_degree(s)) return false;
  }
  return true;
}

StabilizeResult stabilize(const MultiDigraph& g, Config c, TopplePolicy policy) {
  check_config_shape(g, c, "stabilize");
  const int sites = g.site_count();
  std::vector<std::int64_t> counts(sites, 0);

  switch (policy) {
    case TopplePolicy::FifoBatch: {
      std::deque<int> queue;
      std::vector<bool> queued(sites, false);
      for (int s = 0; s < sites; ++s) {
        if (c[s] >= g.site_degree(s)) {
          queue.push_back(s);
          queued[s] = true;
        }
      }
      while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        queued[s] = false;
        std::int64_t t = c[s] / g.site_degree(s);
        if (t == 0) continue;
        topple(g, c, counts, s, t);
        for (const MultiDigraph::SiteArc& arc : g.site_arcs(s)) {
          if (!queued[arc.target] && c[arc.target] >= g.site_degree(arc.target)) {
            queue.push_back(arc.target);
            queued[arc.target] = true;
          }
        }
        // A loop can keep the site itself unstable after the batch.
        if (!queued[s] && c[s] >= g.site_degree(s)) {
          queue.push_back(s);
          queued[s] = true;
        }
      }
      break;
    }
    case TopplePolicy::MinIndexSingle: {
      std::set<int> active;
      for (int s = 0; s < sites; ++s) {
        if (c[s] >= g.site_degree(s)) active.insert(s);
      }
      while (!active.empty()) {
        int s = *active.begin();
        topple(g, c, counts, s, 1);
        if (c[s] < g.site_degree(s)) active.erase(active.begin());
        for (const MultiDigraph::SiteArc& arc : g.site_arcs(s)) {
          if (c[arc.target] >= g.site_degree(arc.target)) active.insert(arc.target);
        }
      }
      break;
    }
    case TopplePolicy::LifoSingle: {
      std::vector<int> stack;
      for (int s = 0; s < sites; ++s) {
        if (c[s] >= g.site_degree(s)) stack.push_back(s);
      }
      while (!stack.empty()) {
        int s = stack.back();
        if (c[s] < g.site_degree(s)) {
          stack.pop_back();
          continue;
        }
        topple(g, c, counts, s, 1);
        for (const MultiDigraph::SiteArc& arc : g.site_arcs(s)) {
          if (c[arc.target] >= g.site_degree(arc.target)) stack.push_back(arc.target);
        }
      }
      break;
    }
  }
  return {std::move(c), std::move(counts)};
}

Config monoid_add(const MultiDigraph& g, const Config& a, const Config& b) {
  require_stable(g, a, "monoid_add");
  require_stable(g, b, "monoid_add");
  Config sum(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) sum[i] = checked_add(a[i], b[i]);
  return stabilize(g, std::move(sum)).config;
}

Config max_stable(const MultiDigraph& g) {
  Config c(g.site_count());
  for (int s = 0; s < g.site_count(); ++s) c[s] = g.site_degree(s) - 1;
  return c;
}

Config group_identity(const MultiDigraph& g) {
  const Config m = max_stable(g);
  const Config twice = monoid_add(g, m, m);
  Config diff(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    diff[i] = m[i] - twice[i];
    if (diff[i] < 0) {
      throw std::logic_error("group_identity: stabilized double exceeded the maximal stable configuration");
    }
  }
  return monoid_add(g, diff, m);
}

bool is_recurrent(const MultiDigraph& g, const Config& a, const Config& identity) {
  return monoid_add(g, a, identity) == a;
}

Config idempotent_of(const MultiDigraph& g, const Config& a) {
  require_stable(g, a, "idempotent_of");
  // Walk a, a+a, a+a+a, ... The sequence enters a cycle containing exactly
  // one idempotent within (transient + period) steps, and that total is at
  // most the number of stable configurations. The cap below is a loud guard
  // against an engine defect, not a tuning knob.
  std::uint64_t bound = 2;
  for (int s = 0; s < g.site_count(); ++s) {
    std::uint64_t deg = static_cast<std::uint64_t>(g.site_degree(s));
    if (bound > (std::uint64_t{1} << 62) / deg) {
      bound = std::uint64_t{1} << 62;
      break;
    }
    bound *= deg;
  }
  Config b = a;
  for (std::uint64_t step = 0; step <= 2 * bound + 2; ++step) {
    if (monoid_add(g, b, b) == b) return b;
    b = monoid_add(g, b, a);
  }
  throw std::logic_error("idempotent_of: no idempotent within the state-space bound");
}

Config embed_config(const MultiDigraph& parent, const InducedSubgraph& sub, const Config& c) {
  check_config_shape(sub.graph, c, "embed_config");
  Config full = zero_config(parent);
  for (int s = 0; s < sub.graph.site_count(); ++s) {
    int parent_site = parent.site_of(sub.parent_vertex[sub.graph.vertex_of_site(s)]);
    full[parent_site] = c[s];
  }
  return full;
}

Config restrict_config(const MultiDigraph& parent, const InducedSubgraph& sub, const Config& c) {
  check_config_shape(parent, c, "restrict_config");
  Config out(sub.graph.site_count());
  for (int s = 0; s < sub.graph.site_count(); ++s) {
    int parent_site = parent.site_of(sub.parent_vertex[sub.graph.vertex_of_site(s)]);
    out[s] = c[parent_site];
  }
  return out;
}

bool can_access_zero(const MultiDigraph& g, const Config& a, const ComponentPoset& p) {
  check_config_shape(g, a, "can_access_zero");
  // Reverse reachability from all cyclic-component vertices; a site holding
  // sand must not appear there.
  std::vector<bool> reaches_cycle(g.vertex_count(), false);
  std::vector<std::vector<int>> rev(g.vertex_count());
  for (const Edge& e : g.edges()) {
    if (e.tail != g.sink() && e.head != g.sink()) rev[e.head].push_back(e.tail);
  }
  std::queue<int> bfs;
  for (const auto& comp : p.components) {
    for (int v : comp) {
      reaches_cycle[v] = true;
      bfs.push(v);
    }
  }
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int u : rev[v]) {
      if (!reaches_cycle[u]) {
        reaches_cycle[u] = true;
        bfs.push(u);
      }
    }
  }
  for (int s = 0; s < g.site_count(); ++s) {
    if (a[s] > 0 && reaches_cycle[g.vertex_of_site(s)]) return false;
  }
  return true;
}

}  // namespace sandpile
