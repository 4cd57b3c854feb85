#include "sandpile/checker.hpp"

#include <algorithm>
#include <stdexcept>

namespace sandpile {
namespace {

std::string triple(int a, int b, int c) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
}

std::vector<int> idempotent_indices(const MonoidTable& t) {
  std::vector<int> out;
  for (int e = 0; e < t.order; ++e) {
    if (t.at(e, e) == e) out.push_back(e);
  }
  return out;
}

}  // namespace

std::optional<TableViolation> validate_table(const MonoidTable& t) {
  if (t.order <= 0) return TableViolation{"order must be positive"};
  if (t.identity < 0 || t.identity >= t.order) return TableViolation{"identity index out of range"};
  if (t.table.size() != static_cast<std::size_t>(t.order) * t.order) {
    return TableViolation{"table has " + std::to_string(t.table.size()) + " entries, expected " +
                          std::to_string(static_cast<std::size_t>(t.order) * t.order)};
  }
  for (int i = 0; i < t.order; ++i) {
    for (int j = 0; j < t.order; ++j) {
      int v = t.at(i, j);
      if (v < 0 || v >= t.order) {
        return TableViolation{"entry " + triple(i, j, v) + " out of range"};
      }
    }
  }
  for (int i = 0; i < t.order; ++i) {
    if (t.at(t.identity, i) != i) {
      return TableViolation{"identity fails at " + std::to_string(i) + ": e+" + std::to_string(i) +
                            " = " + std::to_string(t.at(t.identity, i))};
    }
  }
  for (int i = 0; i < t.order; ++i) {
    for (int j = i + 1; j < t.order; ++j) {
      if (t.at(i, j) != t.at(j, i)) {
        return TableViolation{"commutativity fails at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")"};
      }
    }
  }

  // Light's associativity test: pick a generating set S under the given
  // operation; if a+(x+b) = (a+x)+b for every x in S and all a, b, the
  // operation is associative everywhere. Greedy generator selection keeps S
  // near log-size for group-like tables and degrades to the full cubic scan
  // only for badly generated ones.
  std::vector<bool> generated(t.order, false);
  generated[t.identity] = true;
  int covered = 1;
  std::vector<int> generators;
  while (covered < t.order) {
    int fresh = -1;
    for (int x = 0; x < t.order; ++x) {
      if (!generated[x]) {
        fresh = x;
        break;
      }
    }
    generators.push_back(fresh);
    // Close under the operation with the new generator.
    std::vector<int> frontier;
    generated[fresh] = true;
    ++covered;
    frontier.push_back(fresh);
    while (!frontier.empty()) {
      int x = frontier.back();
      frontier.pop_back();
      for (int y = 0; y < t.order; ++y) {
        if (!generated[y]) continue;
        for (int z : {t.at(x, y), t.at(y, x)}) {
          if (z >= 0 && z < t.order && !generated[z]) {
            generated[z] = true;
            ++covered;
            frontier.push_back(z);
          }
        }
      }
    }
  }
  for (int x : generators) {
    for (int a = 0; a < t.order; ++a) {
      for (int b = 0; b < t.order; ++b) {
        if (t.at(a, t.at(x, b)) != t.at(t.at(a, x), b)) {
          return TableViolation{"associativity fails at " + triple(a, x, b)};
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<FixedPointWitness> unit_fixed_point_obstruction(const MonoidTable& t) {
  // a must be a non-identity unit that fixes some u. Precomputing the unit
  // and fixability flags keeps the scan quadratic; the returned witness is
  // still the lexicographic-first (u, a, k).
  std::vector<int> inverse(t.order, -1);
  for (int a = 0; a < t.order; ++a) {
    for (int k = 0; k < t.order; ++k) {
      if (t.at(a, k) == t.identity) {
        inverse[a] = k;
        break;
      }
    }
  }
  std::vector<bool> candidate(t.order, false);
  bool any = false;
  for (int a = 0; a < t.order; ++a) {
    if (a == t.identity || inverse[a] < 0) continue;
    for (int u = 0; u < t.order; ++u) {
      if (t.at(u, a) == u) {
        candidate[a] = true;
        any = true;
        break;
      }
    }
  }
  if (!any) return std::nullopt;
  for (int u = 0; u < t.order; ++u) {
    for (int a = 0; a < t.order; ++a) {
      if (candidate[a] && t.at(u, a) == u) {
        return FixedPointWitness{u, a, inverse[a]};
      }
    }
  }
  return std::nullopt;
}

LatticeVerdict idempotent_lattice_distributive(const MonoidTable& t) {
  const std::vector<int> idem = idempotent_indices(t);
  const int k = static_cast<int>(idem.size());
  std::vector<int> pos(t.order, -1);
  for (int i = 0; i < k; ++i) pos[idem[i]] = i;

  // Meets come free: e + f is again idempotent and is the greatest lower
  // bound. Joins are folded meets over the common upper bounds; the identity
  // is always up there, so the bound set is never empty.
  auto leq = [&](int e, int f) { return t.at(e, f) == e; };

  std::vector<std::vector<int>> join(k, std::vector<int>(k, -1));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      std::vector<int> uppers;
      for (int u = 0; u < k; ++u) {
        if (leq(idem[i], idem[u]) && leq(idem[j], idem[u])) uppers.push_back(idem[u]);
      }
      if (uppers.empty()) return LatticeVerdict::NotALattice;
      int m = uppers.front();
      for (std::size_t u = 1; u < uppers.size(); ++u) m = t.at(m, uppers[u]);
      // The fold is a lower bound of the uppers; it is the join only if it
      // is itself an upper bound.
      if (!leq(idem[i], m) || !leq(idem[j], m)) return LatticeVerdict::NotALattice;
      join[i][j] = m;
    }
  }

  for (int e = 0; e < k; ++e) {
    for (int f = 0; f < k; ++f) {
      // Meets must stay inside the idempotents for the order to be a
      // meet-semilattice at all.
      if (pos[t.at(idem[e], idem[f])] < 0) return LatticeVerdict::NotALattice;
    }
  }
  for (int e = 0; e < k; ++e) {
    for (int f = 0; f < k; ++f) {
      for (int h = 0; h < k; ++h) {
        int lhs = t.at(idem[e], join[f][h]);
        int rhs = join[pos[t.at(idem[e], idem[f])]][pos[t.at(idem[e], idem[h])]];
        if (lhs != rhs) return LatticeVerdict::NotDistributive;
      }
    }
  }
  return LatticeVerdict::Distributive;
}

MonoidTable make_chain_monoid(int p) {
  if (p < 1) throw std::invalid_argument("make_chain_monoid: need at least one element");
  MonoidTable t;
  t.order = p;
  t.identity = p - 1;
  t.table.resize(static_cast<std::size_t>(p) * p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      t.table[static_cast<std::size_t>(i) * p + j] = std::min(i, j);
    }
  }
  return t;
}

MonoidTable make_cyclic_with_absorber(int n) {
  if (n <= 2) throw std::invalid_argument("make_cyclic_with_absorber: need n > 2");
  MonoidTable t;
  t.order = n;
  t.identity = 0;
  const int inf = n - 1;   // absorbing element
  const int mod = n - 1;   // group part is the cyclic group of this order
  t.table.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      t.table[static_cast<std::size_t>(i) * n + j] =
          (i == inf || j == inf) ? inf : (i + j) % mod;
    }
  }
  return t;
}

bool RealizabilityReport::obstructed() const {
  return violation.has_value() || fixed_point.has_value() ||
         lattice != LatticeVerdict::Distributive || !idempotent_size_feasible;
}

std::vector<std::string> RealizabilityReport::reasons() const {
  std::vector<std::string> out;
  if (violation) out.push_back("invalid table: " + violation->description);
  if (fixed_point) {
    out.push_back("unit fixed point: u=" + std::to_string(fixed_point->u) +
                  " a=" + std::to_string(fixed_point->a) + " k=" + std::to_string(fixed_point->k));
  }
  if (lattice == LatticeVerdict::NotDistributive) out.push_back("idempotent lattice is not distributive");
  if (lattice == LatticeVerdict::NotALattice) out.push_back("idempotents do not form a lattice");
  if (!idempotent_size_feasible) {
    out.push_back("fully idempotent monoid whose order is not a power of two");
  }
  return out;
}

RealizabilityReport realizability_report(const MonoidTable& t) {
  RealizabilityReport r;
  r.violation = validate_table(t);
  if (r.violation) return r;

  r.fixed_point = unit_fixed_point_obstruction(t);
  r.lattice = idempotent_lattice_distributive(t);

  r.fully_idempotent = static_cast<int>(idempotent_indices(t).size()) == t.order;
  if (r.fully_idempotent) {
    // All out-degrees would be 1 or 2, so the stable-count product over the
    // sites could only be a power of two.
    std::uint64_t n = static_cast<std::uint64_t>(t.order);
    r.idempotent_size_feasible = (n & (n - 1)) == 0;
  }
  return r;
}

}  // namespace sandpile
