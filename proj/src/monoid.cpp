#include "sandpile/monoid.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>

#include "sandpile/errors.hpp"

namespace sandpile {
namespace {

constexpr std::uint64_t kSaturated = ~std::uint64_t{0};

std::uint64_t stable_count_saturated(const MultiDigraph& g) {
  std::uint64_t product = 1;
  for (int s = 0; s < g.site_count(); ++s) {
    std::uint64_t deg = static_cast<std::uint64_t>(g.site_degree(s));
    if (product > kSaturated / deg) return kSaturated;
    product *= deg;
  }
  return product;
}

void require_count_within(const MultiDigraph& g, std::uint64_t cap, const char* op,
                          std::uint64_t* count_out) {
  std::uint64_t count = stable_count_saturated(g);
  if (count_out) *count_out = count;
  if (count > cap) {
    std::string shown = count == kSaturated ? "more than 2^64" : std::to_string(count);
    throw SizeError(std::string(op) + ": stable configuration count " + shown +
                        " exceeds the cap " + std::to_string(cap),
                    count);
  }
}

// Visits every stable configuration in lexicographic order (site 0 most
// significant) by mixed-radix counting over the site out-degrees.
template <typename F>
void for_each_stable(const MultiDigraph& g, F&& visit) {
  Config c = zero_config(g);
  const int sites = g.site_count();
  while (true) {
    visit(const_cast<const Config&>(c));
    int s = sites - 1;
    while (s >= 0) {
      if (c[s] + 1 < g.site_degree(s)) {
        ++c[s];
        break;
      }
      c[s] = 0;
      --s;
    }
    if (s < 0) return;
  }
}

std::vector<int> support_vertices(const MultiDigraph& g, const Config& c) {
  std::vector<int> out;
  for (int s = 0; s < g.site_count(); ++s) {
    if (c[s] > 0) out.push_back(g.vertex_of_site(s));
  }
  return out;
}

// Recurrent-element count of a subgroup graph: straight degree product when
// the graph is acyclic (everything is recurrent there), streaming
// enumeration with a recurrence test otherwise.
std::uint64_t count_subgroup_order(const MultiDigraph& g, std::uint64_t cap) {
  ComponentPoset p = cyclic_strong_components(sink_strip(g));
  if (p.count() == 0) {
    std::uint64_t count = stable_count_saturated(g);
    if (count == kSaturated) {
      throw SizeError("subgroup order exceeds 2^64", count);
    }
    return count;
  }
  require_count_within(g, cap, "subgroup order", nullptr);
  const Config e = group_identity(g);
  std::uint64_t order = 0;
  for_each_stable(g, [&](const Config& c) {
    if (is_recurrent(g, c, e)) ++order;
  });
  return order;
}

}  // namespace

std::uint32_t MonoidEnumeration::index_of(const Config& c) const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    index += static_cast<std::uint64_t>(c[i]) * strides[i];
  }
  return static_cast<std::uint32_t>(index);
}

MonoidEnumeration enumerate_monoid(const MultiDigraph& g, const EnumerationOptions& opts) {
  std::uint64_t count = 0;
  require_count_within(g, opts.cap_elements, "enumerate_monoid", &count);

  MonoidEnumeration m;
  m.strides.assign(g.site_count(), 1);
  for (int s = g.site_count() - 2; s >= 0; --s) {
    m.strides[s] = m.strides[s + 1] * static_cast<std::uint64_t>(g.site_degree(s + 1));
  }

  m.elements.reserve(count);
  for_each_stable(g, [&](const Config& c) { m.elements.push_back(c); });

  m.identity = group_identity(g);
  m.recurrent_mask.resize(m.elements.size());
  for (std::size_t i = 0; i < m.elements.size(); ++i) {
    m.recurrent_mask[i] = is_recurrent(g, m.elements[i], m.identity);
  }

  if (count <= opts.cap_table && opts.cap_table > 0) {
    const std::size_t n = m.elements.size();
    std::vector<std::uint32_t> table(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        std::uint32_t k = m.index_of(monoid_add(g, m.elements[i], m.elements[j]));
        table[i * n + j] = k;
        table[j * n + i] = k;
      }
    }
    m.op_table = std::move(table);
  }
  return m;
}

std::vector<IdempotentRecord> idempotents(const MultiDigraph& g, const IdempotentOptions& opts) {
  const MultiDigraph gs = sink_strip(g);
  const ComponentPoset poset = cyclic_strong_components(gs);

  std::vector<IdempotentRecord> records;
  for (const Filter& f : enumerate_filters(poset)) {
    IdempotentRecord rec;
    rec.filter = f;
    if (f.members.empty()) {
      rec.config = zero_config(gs);
    } else {
      std::vector<int> seeds;
      for (int c : f.members) {
        seeds.insert(seeds.end(), poset.components[c].begin(), poset.components[c].end());
      }
      InducedSubgraph y = closure_subgraph(gs, seeds);
      rec.config = embed_config(gs, y, group_identity(y.graph));
    }

    const std::vector<int> supp = support_vertices(gs, rec.config);
    rec.closure_vertices = closure(gs, supp);

    // The filter/idempotent bijection: the support must meet exactly the
    // chosen components. Anything else is an internal error.
    std::vector<bool> touched(std::max(poset.count(), 1), false);
    for (int v : supp) {
      if (poset.component_of[v] != -1) touched[poset.component_of[v]] = true;
    }
    for (int c = 0; c < poset.count(); ++c) {
      bool wanted = std::binary_search(f.members.begin(), f.members.end(), c);
      if (touched[c] != wanted) {
        throw std::logic_error("idempotents: support does not match its filter");
      }
    }

    rec.free_acyclic = free_acyclic_vertices(gs, supp, poset);
    rec.subgroup_graph = subgroup_subgraph(gs, supp, poset);
    if (opts.with_subgroup_orders) {
      rec.subgroup_order =
          rec.subgroup_graph ? count_subgroup_order(rec.subgroup_graph->graph, opts.cap_elements)
                             : 1;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<Config> maximal_subgroup(const MultiDigraph& g, const IdempotentRecord& rec,
                                     std::uint64_t cap_elements) {
  const bool zero = support_vertices(g, rec.config).empty();
  std::vector<Config> out;
  if (!rec.subgroup_graph) {
    out.push_back(zero_config(g));
    return out;
  }
  const MultiDigraph& sub = rec.subgroup_graph->graph;
  require_count_within(sub, cap_elements, "maximal_subgroup", nullptr);
  if (zero) {
    // Acyclic subgroup graph: its whole monoid is the group.
    for_each_stable(sub, [&](const Config& c) {
      out.push_back(embed_config(g, *rec.subgroup_graph, c));
    });
  } else {
    const Config e = group_identity(sub);
    if (embed_config(g, *rec.subgroup_graph, e) != rec.config) {
      throw std::logic_error("maximal_subgroup: subgroup-graph identity disagrees with the idempotent");
    }
    for_each_stable(sub, [&](const Config& c) {
      if (is_recurrent(sub, c, e)) out.push_back(embed_config(g, *rec.subgroup_graph, c));
    });
  }
  // Zero-extension keeps relative lexicographic order, so the enumeration
  // order is already sorted.
  return out;
}

std::vector<Config> alternate_subgroup_build(const MultiDigraph& g, const IdempotentRecord& rec,
                                             std::uint64_t cap_elements) {
  const MultiDigraph gs = sink_strip(g);
  const std::vector<int> supp = support_vertices(gs, rec.config);

  std::vector<Config> base;
  if (supp.empty()) {
    base.push_back(zero_config(gs));
  } else {
    InducedSubgraph y = closure_subgraph(gs, supp);
    require_count_within(y.graph, cap_elements, "alternate_subgroup_build", nullptr);
    const Config e = group_identity(y.graph);
    for_each_stable(y.graph, [&](const Config& c) {
      if (is_recurrent(y.graph, c, e)) base.push_back(embed_config(gs, y, c));
    });
  }

  std::vector<Config> riders;
  riders.push_back(zero_config(gs));
  for (int v : rec.free_acyclic) {
    const int site = gs.site_of(v);
    const std::int64_t deg = gs.site_degree(site);
    std::vector<Config> next;
    next.reserve(riders.size() * static_cast<std::size_t>(deg));
    for (const Config& r : riders) {
      for (std::int64_t grains = 0; grains < deg; ++grains) {
        Config c = r;
        c[site] = grains;
        next.push_back(std::move(c));
      }
    }
    riders = std::move(next);
    if (riders.size() > cap_elements) {
      throw SizeError("alternate_subgroup_build: rider count exceeds the cap", riders.size());
    }
  }

  if (base.size() > cap_elements / std::max<std::size_t>(riders.size(), 1)) {
    throw SizeError("alternate_subgroup_build: combined size exceeds the cap",
                    base.size() * riders.size());
  }
  std::vector<Config> out;
  out.reserve(base.size() * riders.size());
  for (const Config& b : base) {
    for (const Config& r : riders) {
      out.push_back(monoid_add(gs, b, r));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int classical_idempotent_count(const MultiDigraph& g) {
  // Pairing of non-sink edges, at equal multiplicity, is what "undirected"
  // means once the sink's own edges have been stripped.
  std::map<std::pair<int, int>, std::int64_t> mult;
  for (const Edge& e : g.edges()) {
    if (e.tail == g.sink() || e.head == g.sink() || e.tail == e.head) continue;
    mult[{e.tail, e.head}] = e.multiplicity;
  }
  for (const auto& [key, m] : mult) {
    auto rev = mult.find({key.second, key.first});
    if (rev == mult.end() || rev->second != m) {
      throw std::invalid_argument(
          "classical_idempotent_count: edge " + std::to_string(key.first) + "->" +
          std::to_string(key.second) + " has no matching reverse edge");
    }
  }

  // The non-sink part must be connected.
  std::vector<bool> seen(g.vertex_count(), false);
  int start = g.sink() == 0 ? 1 : 0;
  std::queue<int> bfs;
  bfs.push(start);
  seen[start] = true;
  std::vector<std::vector<int>> und(g.vertex_count());
  for (const Edge& e : g.edges()) {
    if (e.tail == g.sink() || e.head == g.sink()) continue;
    und[e.tail].push_back(e.head);
    und[e.head].push_back(e.tail);
  }
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int w : und[v]) {
      if (!seen[w]) {
        seen[w] = true;
        bfs.push(w);
      }
    }
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (v != g.sink() && !seen[v]) {
      throw std::invalid_argument("classical_idempotent_count: non-sink part is not connected");
    }
  }

  const bool single_loopless = g.site_count() == 1 && !g.has_loop(g.vertex_of_site(0));
  return single_loopless ? 1 : 2;
}

bool two_idempotent_recurrence_check(const MultiDigraph& g, const EnumerationOptions& opts) {
  IdempotentOptions lite;
  lite.with_subgroup_orders = false;
  if (idempotents(g, lite).size() != 2) {
    throw std::invalid_argument("two_idempotent_recurrence_check: monoid does not have exactly two idempotents");
  }
  MonoidEnumeration m = enumerate_monoid(g, opts);
  if (!m.has_table()) {
    throw SizeError("two_idempotent_recurrence_check: needs the Cayley table; raise cap_table",
                    m.size());
  }
  const std::uint32_t n = static_cast<std::uint32_t>(m.size());
  for (std::uint32_t u = 0; u < n; ++u) {
    bool has_fixing_summand = false;
    for (std::uint32_t a = 1; a < n && !has_fixing_summand; ++a) {
      if (m.op(u, a) == u) has_fixing_summand = true;
    }
    if (has_fixing_summand != m.recurrent_mask[u]) return false;
  }
  return true;
}

bool eventually_recurrent(const MultiDigraph& g, const Config& a, const ComponentPoset& p) {
  const MultiDigraph gs = sink_strip(g);
  const std::vector<int> cl = closure(gs, support_vertices(gs, a));

  bool predicted = true;
  for (const auto& comp : p.components) {
    if (!std::binary_search(cl.begin(), cl.end(), comp.front())) {
      predicted = false;
      break;
    }
  }

  const bool dynamic = is_recurrent(g, idempotent_of(g, a), group_identity(g));
  if (predicted != dynamic) {
    throw std::logic_error("eventually_recurrent: combinatorial prediction disagrees with the dynamics");
  }
  return predicted;
}

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) primes.push_back(n);
  return primes;
}

}  // namespace

std::vector<std::uint64_t> invariant_factors(const MultiDigraph& g, const MonoidEnumeration& m) {
  std::vector<std::uint32_t> group;
  for (std::uint32_t i = 0; i < m.size(); ++i) {
    if (m.recurrent_mask[i]) group.push_back(i);
  }
  const std::uint64_t order = group.size();
  if (order == 1) return {};

  const std::uint32_t e_index = m.index_of(m.identity);

  // x added to itself k times, by binary decomposition. With a Cayley table
  // this is pure lookups; otherwise it runs on configurations.
  auto power = [&](std::uint32_t x, std::uint64_t k) -> std::uint32_t {
    if (m.has_table()) {
      std::uint32_t acc = e_index, base = x;
      while (k > 0) {
        if (k & 1) acc = m.op(acc, base);
        base = m.op(base, base);
        k >>= 1;
      }
      return acc;
    }
    Config acc = m.identity, base = m.elements[x];
    while (k > 0) {
      if (k & 1) acc = monoid_add(g, acc, base);
      base = monoid_add(g, base, base);
      k >>= 1;
    }
    return m.index_of(acc);
  };

  const std::vector<std::uint64_t> primes = prime_factors(order);
  auto element_order = [&](std::uint32_t x) -> std::uint64_t {
    std::uint64_t o = order;
    for (std::uint64_t p : primes) {
      while (o % p == 0 && power(x, o / p) == e_index) o /= p;
    }
    return o;
  };

  // Pure p-power element orders determine, via annihilator counts, the
  // partition of p-exponents of the abelian group.
  std::map<std::uint64_t, std::map<int, std::uint64_t>> pure_counts;  // prime -> exponent -> count
  for (std::uint32_t x : group) {
    std::uint64_t o = element_order(x);
    for (std::uint64_t p : primes) {
      int t = 0;
      std::uint64_t rest = o;
      while (rest % p == 0) {
        rest /= p;
        ++t;
      }
      if (rest == 1) pure_counts[p][t] += 1;  // o is exactly p^t (incl. t = 0)
    }
  }

  std::map<std::uint64_t, std::vector<int>> parts_by_prime;
  for (std::uint64_t p : primes) {
    int a = 0;
    std::uint64_t rest = order;
    while (rest % p == 0) {
      rest /= p;
      ++a;
    }
    std::vector<std::uint64_t> m_j(a + 1, 0);  // log_p of annihilator counts
    std::uint64_t cumulative = 0;
    for (int j = 0; j <= a; ++j) {
      cumulative += pure_counts[p][j];
      std::uint64_t c = cumulative, log = 0;
      while (c % p == 0) {
        c /= p;
        ++log;
      }
      if (c != 1) throw std::logic_error("invariant_factors: annihilator count is not a prime power");
      m_j[j] = log;
    }
    if (m_j[a] != static_cast<std::uint64_t>(a)) {
      throw std::logic_error("invariant_factors: p-part does not exhaust the group order");
    }
    std::vector<int> parts;
    for (int j = 1; j <= a; ++j) {
      std::uint64_t ge_j = m_j[j] - m_j[j - 1];
      std::uint64_t ge_next = j < a ? m_j[j + 1] - m_j[j] : 0;
      for (std::uint64_t i = 0; i < ge_j - ge_next; ++i) parts.push_back(j);
    }
    std::sort(parts.rbegin(), parts.rend());
    parts_by_prime[p] = std::move(parts);
  }

  std::size_t rows = 0;
  for (const auto& [p, parts] : parts_by_prime) rows = std::max(rows, parts.size());
  std::vector<std::uint64_t> factors;
  for (std::size_t i = 0; i < rows; ++i) {
    std::uint64_t d = 1;
    for (const auto& [p, parts] : parts_by_prime) {
      if (i < parts.size()) {
        for (int j = 0; j < parts[i]; ++j) d *= p;
      }
    }
    factors.push_back(d);
  }
  std::reverse(factors.begin(), factors.end());  // ascending, d1 | d2 | ...

  std::uint64_t product = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i + 1 < factors.size() && factors[i + 1] % factors[i] != 0) {
      throw std::logic_error("invariant_factors: divisibility chain broken");
    }
    product *= factors[i];
  }
  if (product != order) {
    throw std::logic_error("invariant_factors: factor product differs from the group order");
  }
  return factors;
}

}  // namespace sandpile
