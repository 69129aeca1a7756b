#include "sc/canonical.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>

#include "sc/error.hpp"

namespace sc {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t CanonicalForm::hash() const { return fnv1a(text); }

namespace {

struct Arc {
  int code;  // edge label rank * 4 + direction
  std::size_t to;
};

// Labelled graph in rank form: colours and edge labels are ranks of sorted
// key strings, so the encoding is invariant under part relabelling.
struct RankedGraph {
  std::size_t n = 0;
  bool oriented = false;
  std::vector<std::string> node_keys;
  std::vector<std::string> edge_keys;  // distinct, sorted
  std::vector<int> node_rank;
  std::vector<std::vector<Arc>> arcs;
  struct Edge {
    std::size_t u, v;
    int label;
  };
  std::vector<Edge> edges;
};

std::string part_key(const Part& p, const CompareOptions& opts) {
  std::string key = content_key(p);
  if (opts.physical && !p.payload.empty()) {
    key += '\x1d';
    key += opts.catalog ? opts.catalog->content_key(p.payload) : p.payload;
  }
  return key;
}

RankedGraph rank_graph(const Structure& s, const CompareOptions& opts) {
  RankedGraph g;
  g.n = s.size();
  g.oriented = s.oriented();
  g.node_keys.reserve(g.n);
  for (const auto& p : s.parts()) g.node_keys.push_back(part_key(p, opts));
  std::vector<std::string> distinct = g.node_keys;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  g.node_rank.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    g.node_rank[i] = static_cast<int>(
        std::lower_bound(distinct.begin(), distinct.end(), g.node_keys[i]) - distinct.begin());
  }
  std::vector<std::string> rkeys;
  for (const auto& r : s.relations()) rkeys.push_back(relation_key(r));
  g.edge_keys = rkeys;
  std::sort(g.edge_keys.begin(), g.edge_keys.end());
  g.edge_keys.erase(std::unique(g.edge_keys.begin(), g.edge_keys.end()), g.edge_keys.end());
  g.arcs.resize(g.n);
  for (std::size_t i = 0; i < s.relations().size(); ++i) {
    const auto& r = s.relations()[i];
    int label = static_cast<int>(std::lower_bound(g.edge_keys.begin(), g.edge_keys.end(), rkeys[i]) -
                                 g.edge_keys.begin());
    g.edges.push_back({r.from, r.to, label});
    if (r.from == r.to) {
      g.arcs[r.from].push_back({label * 4 + 3, r.to});
    } else if (g.oriented) {
      g.arcs[r.from].push_back({label * 4 + 1, r.to});
      g.arcs[r.to].push_back({label * 4 + 2, r.from});
    } else {
      g.arcs[r.from].push_back({label * 4, r.to});
      g.arcs[r.to].push_back({label * 4, r.from});
    }
  }
  return g;
}

std::size_t count_cells(const std::vector<int>& color) {
  std::vector<int> c = color;
  std::sort(c.begin(), c.end());
  return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
}

// Iterated colour refinement. Colours stay ordered consistently with the
// input colouring, so individualization order is canonical.
void refine(const RankedGraph& g, std::vector<int>& color) {
  const std::size_t n = g.n;
  std::size_t cells = count_cells(color);
  std::vector<std::vector<long long>> sig(n);
  std::vector<std::size_t> idx(n);
  while (true) {
    for (std::size_t u = 0; u < n; ++u) {
      auto& s = sig[u];
      s.clear();
      s.push_back(color[u]);
      for (const auto& a : g.arcs[u]) {
        s.push_back(static_cast<long long>(a.code) * static_cast<long long>(n + 1) + color[a.to]);
      }
      std::sort(s.begin() + 1, s.end());
    }
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sig[a] < sig[b]; });
    int rank = -1;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == 0 || sig[idx[k]] != sig[idx[k - 1]]) ++rank;
      color[idx[k]] = rank;
    }
    const auto next = static_cast<std::size_t>(rank + 1);
    if (next == cells) break;
    cells = next;
  }
}

std::vector<long long> certificate(const RankedGraph& g, const std::vector<int>& pos) {
  std::vector<long long> cert(g.n);
  for (std::size_t u = 0; u < g.n; ++u) cert[static_cast<std::size_t>(pos[u])] = g.node_rank[u];
  std::vector<std::array<long long, 3>> es;
  es.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    long long a = pos[e.u], b = pos[e.v];
    if (!g.oriented && b < a) std::swap(a, b);
    es.push_back({a, b, e.label});
  }
  std::sort(es.begin(), es.end());
  for (const auto& e : es) cert.insert(cert.end(), e.begin(), e.end());
  return cert;
}

class CanonicalSearch {
 public:
  explicit CanonicalSearch(const RankedGraph& g) : g_(g) {}

  std::vector<int> run() {
    std::vector<int> color = g_.node_rank;
    std::vector<std::size_t> prefix;
    dfs(color, prefix);
    return best_pos_;
  }

 private:
  struct Leaf {
    std::vector<long long> cert;
    std::vector<int> pos;
  };

  void record_automorphism(const std::vector<int>& pos_a, const std::vector<int>& pos_b) {
    std::vector<std::size_t> inv_b(g_.n);
    for (std::size_t u = 0; u < g_.n; ++u) inv_b[static_cast<std::size_t>(pos_b[u])] = u;
    std::vector<std::size_t> perm(g_.n);
    bool identity = true;
    for (std::size_t u = 0; u < g_.n; ++u) {
      perm[u] = inv_b[static_cast<std::size_t>(pos_a[u])];
      identity = identity && perm[u] == u;
    }
    if (!identity) autos_.push_back(std::move(perm));
  }

  std::size_t find(std::vector<std::size_t>& uf, std::size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  }

  void dfs(std::vector<int> color, std::vector<std::size_t>& prefix) {
    refine(g_, color);
    const std::size_t cells = count_cells(color);
    if (cells == g_.n) {
      auto cert = certificate(g_, color);
      if (!first_) {
        first_ = Leaf{cert, color};
        best_cert_ = std::move(cert);
        best_pos_ = color;
        return;
      }
      if (cert == first_->cert) {
        record_automorphism(first_->pos, color);
        return;
      }
      if (cert == best_cert_) {
        record_automorphism(best_pos_, color);
      } else if (cert < best_cert_) {
        best_cert_ = std::move(cert);
        best_pos_ = color;
      }
      return;
    }
    // target cell: smallest non-singleton, lowest colour among equals
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t u = 0; u < g_.n; ++u) members[color[u]].push_back(u);
    const std::vector<std::size_t>* target = nullptr;
    for (const auto& [c, m] : members) {
      if (m.size() > 1 && (!target || m.size() < target->size())) target = &m;
    }
    const std::vector<std::size_t> cell = *target;
    std::vector<std::size_t> explored;
    for (std::size_t v : cell) {
      if (!explored.empty() && in_explored_orbit(v, explored, prefix)) continue;
      std::vector<int> child(g_.n);
      for (std::size_t u = 0; u < g_.n; ++u) child[u] = 2 * color[u] + 1;
      child[v] = 2 * color[v];
      prefix.push_back(v);
      dfs(std::move(child), prefix);
      prefix.pop_back();
      explored.push_back(v);
    }
  }

  bool in_explored_orbit(std::size_t v, const std::vector<std::size_t>& explored,
                         const std::vector<std::size_t>& prefix) {
    if (autos_.empty()) return false;
    std::vector<std::size_t> uf(g_.n);
    std::iota(uf.begin(), uf.end(), 0);
    bool any = false;
    for (const auto& a : autos_) {
      bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](std::size_t p) { return a[p] == p; });
      if (!fixes) continue;
      any = true;
      for (std::size_t u = 0; u < g_.n; ++u) {
        auto x = find(uf, u), y = find(uf, a[u]);
        if (x != y) uf[x] = y;
      }
    }
    if (!any) return false;
    auto rv = find(uf, v);
    return std::any_of(explored.begin(), explored.end(),
                       [&](std::size_t e) { return find(uf, e) == rv; });
  }

  const RankedGraph& g_;
  std::optional<Leaf> first_;
  std::vector<long long> best_cert_;
  std::vector<int> best_pos_;
  std::vector<std::vector<std::size_t>> autos_;
};

void quick_multiset(std::vector<std::string>& v) { std::sort(v.begin(), v.end()); }

}  // namespace

CanonicalForm canonical_form(const Structure& s, const CompareOptions& opts) {
  const RankedGraph g = rank_graph(s, opts);
  CanonicalForm out;
  std::vector<int> pos;
  if (g.n > 0) pos = CanonicalSearch(g).run();
  out.order.resize(g.n);
  for (std::size_t u = 0; u < g.n; ++u) out.order[static_cast<std::size_t>(pos[u])] = u;

  std::string text = g.oriented ? "o" : "u";
  text += std::to_string(g.n);
  for (std::size_t k = 0; k < g.n; ++k) {
    text += '\x1f';
    text += g.node_keys[out.order[k]];
  }
  std::vector<std::string> es;
  for (const auto& e : g.edges) {
    long long a = pos[e.u], b = pos[e.v];
    if (!g.oriented && b < a) std::swap(a, b);
    std::string t = std::to_string(a) + ',' + std::to_string(b) + ',' + g.edge_keys[static_cast<std::size_t>(e.label)];
    es.push_back(std::move(t));
  }
  std::sort(es.begin(), es.end());
  for (const auto& e : es) {
    text += '\x1e';
    text += e;
  }
  out.text = std::move(text);
  return out;
}

IsoResult isomorphic_unchecked(const Structure& a, const Structure& b, const CompareOptions& opts) {
  IsoResult res;
  if (a.oriented() != b.oriented() || a.size() != b.size() ||
      a.relations().size() != b.relations().size()) {
    return res;
  }
  {
    std::vector<std::string> ka, kb;
    for (const auto& p : a.parts()) ka.push_back(part_key(p, opts));
    for (const auto& p : b.parts()) kb.push_back(part_key(p, opts));
    quick_multiset(ka);
    quick_multiset(kb);
    if (ka != kb) return res;
    ka.clear();
    kb.clear();
    for (const auto& r : a.relations()) ka.push_back(relation_key(r));
    for (const auto& r : b.relations()) kb.push_back(relation_key(r));
    quick_multiset(ka);
    quick_multiset(kb);
    if (ka != kb) return res;
  }
  const auto ca = canonical_form(a, opts);
  const auto cb = canonical_form(b, opts);
  if (ca.text != cb.text) return res;
  res.isomorphic = true;
  res.witness.resize(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) res.witness[ca.order[k]] = cb.order[k];
  return res;
}

IsoResult isomorphic(const Structure& a, const Structure& b, const CompareOptions& opts) {
  require_valid(a, opts.catalog);
  require_valid(b, opts.catalog);
  return isomorphic_unchecked(a, b, opts);
}

std::vector<std::vector<std::size_t>> internal_classes(const Structure& s,
                                                       const CompareOptions& opts) {
  std::vector<std::vector<std::size_t>> classes;
  std::map<std::string, std::size_t> by_key;
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto key = part_key(s.part(i), opts);
    auto [it, fresh] = by_key.try_emplace(key, classes.size());
    if (fresh) classes.emplace_back();
    classes[it->second].push_back(i);
  }
  return classes;
}

std::size_t internal_class_count(const Structure& s, const CompareOptions& opts) {
  return internal_classes(s, opts).size();
}

bool swap_indistinguishable(const Structure& a, const Structure& b, const TypeCatalog* catalog) {
  const auto iso = isomorphic(a, b, {false, catalog});
  if (!iso) throw PreconditionError("swap test requires isomorphic structures");
  Structure a2 = a, b2 = b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t j = iso.witness[i];
    a2.set_payload(i, b.part(j).payload);
    b2.set_payload(j, a.part(i).payload);
  }
  const CompareOptions physical{true, catalog};
  return isomorphic_unchecked(a2, a, physical) && isomorphic_unchecked(b2, b, physical);
}

}  // namespace sc
