#pragma once

#include <cstdint>
#include <vector>

#include "sandpile/graph.hpp"

namespace sandpile {

// Grains per site (non-sink vertex), in site order. Arithmetic on grain
// counts is checked: overflowing 64 bits raises std::overflow_error instead
// of wrapping.
using Config = std::vector<std::int64_t>;

// Stabilization is order-independent; the policies exist so tests can prove
// that on live runs. FifoBatch is the production default.
enum class TopplePolicy {
  FifoBatch,       // FIFO queue; each dequeue topples floor(grains/degree) times at once
  MinIndexSingle,  // always topple the smallest unstable site, once
  LifoSingle,      // stack discipline, single topplings
};

struct StabilizeResult {
  Config config;
  std::vector<std::int64_t> topple_counts;  // per site
};

Config zero_config(const MultiDigraph& g);
bool is_stable(const MultiDigraph& g, const Config& c);

// Topples until every site is below its out-degree. Terminates for every
// nonnegative input because the sink is reachable from everywhere. Avalanche
// sizes are unbounded in the input magnitude, hence the per-site counts in
// the result.
StabilizeResult stabilize(const MultiDigraph& g, Config c,
                          TopplePolicy policy = TopplePolicy::FifoBatch);

// The monoid operation: pointwise sum of two stable configurations, then
// stabilization.
Config monoid_add(const MultiDigraph& g, const Config& a, const Config& b);

// Every site at out-degree minus one: the largest stable configuration.
Config max_stable(const MultiDigraph& g);

// Identity of the group of recurrent configurations, built from max_stable
// by the standard double-add construction.
Config group_identity(const MultiDigraph& g);

bool is_recurrent(const MultiDigraph& g, const Config& a, const Config& identity);

// The unique idempotent reached from `a` by repeatedly adding `a`.
// Requires a stable.
Config idempotent_of(const MultiDigraph& g, const Config& a);

// True iff the empty configuration is accessible from `a`, decided
// combinatorially: no site of supp(a) may reach a cycle.
bool can_access_zero(const MultiDigraph& g, const Config& a, const ComponentPoset& p);

// Zero-extension of a subgraph configuration to the parent graph, and its
// one-sided inverse. Cross-graph comparisons in this project are always made
// through these.
Config embed_config(const MultiDigraph& parent, const InducedSubgraph& sub, const Config& c);
Config restrict_config(const MultiDigraph& parent, const InducedSubgraph& sub, const Config& c);

// Checked helpers, shared by the engine and the layered-toppling code.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

}  // namespace sandpile
