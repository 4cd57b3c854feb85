#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sandpile {

// A finite commutative monoid given by its Cayley table. Generated tables
// use element 0 as the identity; imported tables declare theirs.
struct MonoidTable {
  int order = 0;
  int identity = 0;
  std::vector<int> table;  // row-major order*order

  int at(int i, int j) const { return table[static_cast<std::size_t>(i) * order + j]; }
};

struct TableViolation {
  std::string description;
};

// Complete validation: dimensions, entry ranges, the declared identity,
// commutativity, and associativity. Associativity runs Light's test over a
// generating set, which proves or refutes it for every triple without the
// cubic scan on well-generated tables. Returns the first violation found.
std::optional<TableViolation> validate_table(const MonoidTable& t);

// u + a = u with a != identity while a + k = identity: sand that fixes an
// element can never be cancelled, so such a witness rules the table out as a
// sandpile monoid. The search is lexicographic in (u, a, k).
struct FixedPointWitness {
  int u = 0;
  int a = 0;
  int k = 0;

  friend bool operator==(const FixedPointWitness&, const FixedPointWitness&) = default;
};

std::optional<FixedPointWitness> unit_fixed_point_obstruction(const MonoidTable& t);

enum class LatticeVerdict {
  Distributive,
  NotDistributive,
  NotALattice,  // joins missing; distinct from a failed distributivity check
};

// The idempotents under e <= f iff e + f = e form a meet-semilattice with
// the monoid identity on top. Checks that all joins exist and that meet
// distributes over join.
LatticeVerdict idempotent_lattice_distributive(const MonoidTable& t);

// Chain of p elements under min, identity p-1. Every element is idempotent.
MonoidTable make_chain_monoid(int p);

// The cyclic group of order n-1 plus an absorbing element (index n-1).
// Exactly two idempotents. Requires n > 2.
MonoidTable make_cyclic_with_absorber(int n);

// Necessary conditions for being a sandpile monoid, collected in one pass.
// The verdict is only ever "obstructed" (with reasons) or "no known
// obstruction": passing every test proves nothing.
struct RealizabilityReport {
  std::optional<TableViolation> violation;
  std::optional<FixedPointWitness> fixed_point;
  LatticeVerdict lattice = LatticeVerdict::Distributive;
  bool fully_idempotent = false;
  // A monoid of idempotents forces every out-degree to be 1 or 2, so its
  // order has to be a power of two.
  bool idempotent_size_feasible = true;

  bool obstructed() const;
  std::vector<std::string> reasons() const;
};

RealizabilityReport realizability_report(const MonoidTable& t);

}  // namespace sandpile
