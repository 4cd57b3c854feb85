#pragma once

#include <cstdint>
#include <vector>

#include "sandpile/graph.hpp"

namespace sandpile {

// Deterministic generators: equal parameters always produce byte-identical
// serializations.

// One vertex per entry, each with that many parallel edges to a shared sink
// (the last vertex). The monoid is the product of cyclic groups of the given
// orders.
MultiDigraph star_graph(const std::vector<std::int64_t>& edge_counts);

// d concentric n-rings (paired directed edges along each ring and between
// consecutive rings), innermost ring wired to a central sink by one directed
// edge per vertex. Vertex 0 is the sink; ring i occupies indices
// (i-1)*n+1 .. i*n, innermost first. n >= 2, d >= 1; the n = 2 ring is the
// double edge, keeping two within-ring edges per vertex.
MultiDigraph iterated_wheel(int n, int d);

// Undirected tree (as paired directed edges) with root degree n, inner
// degree n, and leaves at depth d-1, each leaf tied to a fresh sink by n-1
// directed edges. Vertices are numbered level by level from the root; the
// sink is last. n >= 3, d >= 2.
MultiDigraph regular_tree(int n, int d);

// Rotational tournament on 2k+1 vertices (i beats the next k vertices mod
// 2k+1) with r parallel edges from every vertex to the sink (the last
// vertex). The seed is reserved for alternative tournaments and unused by
// the default construction. k >= 1, r >= 1.
MultiDigraph regular_tournament(int k, int r, std::uint64_t seed = 0);

// Bundled fixtures, loaded from the fixtures directory (compiled-in default,
// overridable through the SANDPILE_FIXTURE_DIR environment variable).
MultiDigraph example_graph();      // three cyclic components, see fixtures/example.graph
MultiDigraph sdr_example_graph();  // two-layer regular graph, see fixtures/sdr_example.graph

}  // namespace sandpile
