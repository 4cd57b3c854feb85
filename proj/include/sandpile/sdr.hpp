#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sandpile/engine.hpp"
#include "sandpile/graph.hpp"

namespace sandpile {

// Layered regularity data around the sink. Layer arrays are 1-indexed by
// distance (index 0 unused except layers[0] = {sink}); b[depth] = 0 and
// n[depth+1] = 0 by convention.
struct SdrProfile {
  int depth = 0;                         // number of nonempty layers
  std::vector<std::vector<int>> layers;  // layers[i] = vertices at distance i
  std::vector<int> layer_of;             // per vertex
  std::vector<std::int64_t> a;           // within-layer edge count per vertex
  std::vector<std::int64_t> b;           // outward (to layer i+1)
  std::vector<std::int64_t> c;           // inward (to layer i-1)
  std::vector<std::int64_t> n;           // toppling multiplicities, size depth+2

  std::int64_t layer_out_degree(int i) const { return a[i] + b[i] + c[i]; }
};

// BFS layers by distance to the sink. Requires a sink without out-edges;
// every layer up to the maximum distance is nonempty because the sink is
// reachable from everywhere.
std::vector<std::vector<int>> distance_partition(const MultiDigraph& g);

struct SdrCheck {
  std::optional<SdrProfile> profile;
  std::string witness;  // first violated condition when not regular

  explicit operator bool() const { return profile.has_value(); }
};

// Decides layered regularity: edges may span at most one layer, and within
// each layer every vertex must show the same within/outward/inward edge
// counts on both the tail side and the head side (inward tail counts only,
// for the innermost layer). On success the toppling multiplicities n are
// computed and their stability bounds verified.
SdrCheck check_sdr(const MultiDigraph& g);

// The group identity in closed form: layer i holds n_i*c_i - n_{i+1}*b_i
// grains per vertex. Verifies stability and idempotency before returning.
Config sdr_identity(const MultiDigraph& g, const SdrProfile& profile);

// Topples every vertex of layers `layer`..depth exactly once, innermost
// wave first, by literal edge pushes. Demands the usual preconditions (the
// wave layer ready to topple, everything further out short by at most its
// inward count) and checks the closed-form effect: the wave moves c_layer
// grains per vertex off its layer and drops b_{layer-1} per vertex onto the
// next layer in.
Config wave_topple(const MultiDigraph& g, const SdrProfile& profile, const Config& x, int layer);

}  // namespace sandpile
