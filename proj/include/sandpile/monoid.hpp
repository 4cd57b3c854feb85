#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sandpile/engine.hpp"
#include "sandpile/graph.hpp"

namespace sandpile {

struct EnumerationOptions {
  std::uint64_t cap_elements = 1'000'000;  // refuse larger state spaces
  std::uint64_t cap_table = 1'000;         // Cayley table only at or below this
};

// The full monoid of stable configurations, in lexicographic order with
// site 0 most significant. Element k has exactly the mixed-radix digits of k
// over the site out-degrees, so index_of needs no lookup structure.
struct MonoidEnumeration {
  std::vector<Config> elements;
  std::vector<bool> recurrent_mask;
  Config identity;  // identity of the recurrent group
  std::vector<std::uint64_t> strides;
  std::optional<std::vector<std::uint32_t>> op_table;  // row-major size*size

  std::size_t size() const { return elements.size(); }
  bool has_table() const { return op_table.has_value(); }
  std::uint32_t index_of(const Config& c) const;
  std::uint32_t op(std::uint32_t i, std::uint32_t j) const {
    return (*op_table)[static_cast<std::size_t>(i) * elements.size() + j];
  }
};

// Enumerates every stable configuration. Raises SizeError naming the exact
// stable-configuration count when it exceeds opts.cap_elements.
MonoidEnumeration enumerate_monoid(const MultiDigraph& g, const EnumerationOptions& opts = {});

// One idempotent per filter of the component order.
struct IdempotentRecord {
  Config config;
  Filter filter;
  std::vector<int> closure_vertices;              // reachable set of supp(config)
  std::vector<int> free_acyclic;                  // acyclic vertices riding along
  std::optional<InducedSubgraph> subgroup_graph;  // nullopt: bare sink
  std::uint64_t subgroup_order = 1;
};

struct IdempotentOptions {
  bool with_subgroup_orders = true;
  std::uint64_t cap_elements = 1'000'000;  // for the subgroup-order enumerations
};

// All idempotents of the monoid, sorted by their filters (size, then
// membership). Does not enumerate the monoid itself: each idempotent is the
// group identity of the closure subgraph of its filter, zero-extended.
std::vector<IdempotentRecord> idempotents(const MultiDigraph& g,
                                          const IdempotentOptions& opts = {});

// The maximal subgroup at rec: {config} for the zero idempotent over a bare
// sink, the whole monoid of the subgroup graph for zero otherwise, and the
// recurrent elements of the subgroup graph in general. Elements are
// zero-extended to the full graph and sorted lexicographically.
std::vector<Config> maximal_subgroup(const MultiDigraph& g, const IdempotentRecord& rec,
                                     std::uint64_t cap_elements = 1'000'000);

// Independent construction of the same subgroup: sums g + j with g recurrent
// on the closure subgraph of supp(rec.config) and j stable with support in
// rec.free_acyclic. For the zero idempotent the closure part degenerates to
// the empty configuration. Must agree with maximal_subgroup element for
// element; tests enforce that.
std::vector<Config> alternate_subgroup_build(const MultiDigraph& g, const IdempotentRecord& rec,
                                             std::uint64_t cap_elements = 1'000'000);

// Idempotent count for the classical case: an undirected graph (every edge
// between non-sink vertices paired with its reverse at equal multiplicity)
// whose non-sink part is connected. Returns 1 when that part is a single
// loopless vertex and 2 otherwise. Violated preconditions raise
// std::invalid_argument.
int classical_idempotent_count(const MultiDigraph& g);

// For monoids with exactly two idempotents: checks, element by element, that
// having a nonzero fixing summand (some a != 0 with u + a = u) is equivalent
// to being recurrent. Requires the Cayley table, hence |M| within
// opts.cap_table.
bool two_idempotent_recurrence_check(const MultiDigraph& g, const EnumerationOptions& opts = {});

// Combinatorial test for whether repeated addition of a stable `a` reaches a
// recurrent configuration: every cyclic component must lie in the reachable
// set of supp(a). Cross-checks the answer against the dynamic truth
// (idempotent_of + recurrence) and raises std::logic_error on mismatch.
bool eventually_recurrent(const MultiDigraph& g, const Config& a, const ComponentPoset& p);

// Invariant factors d1 | d2 | ... of the recurrent group, from element
// orders and annihilator counts of the enumerated group; [] for the trivial
// group. No linear algebra involved.
std::vector<std::uint64_t> invariant_factors(const MultiDigraph& g, const MonoidEnumeration& m);

}  // namespace sandpile
