#include "sc/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>

#include "sc/canonical.hpp"
#include "sc/error.hpp"
#include "sc/properties.hpp"
#include "sc/raster.hpp"

namespace sc {

const char* to_string(RegularityCase c) {
  switch (c) {
    case RegularityCase::IdenticalPortions: return "identical-portions";
    case RegularityCase::NearIdentical: return "near-identical";
    case RegularityCase::DerivedCoincidence: return "derived-coincidence";
    case RegularityCase::OperatorCoincidence: return "operator-coincidence";
  }
  return "?";
}

std::vector<std::vector<std::size_t>> connected_subsets(const Structure& s, std::size_t k) {
  std::set<std::vector<std::size_t>> all;
  if (k == 0) return {};
  const auto adj = s.adjacency();
  std::set<std::vector<std::size_t>> frontier;
  for (std::size_t i = 0; i < s.size(); ++i) frontier.insert({i});
  for (std::size_t size = 1; !frontier.empty(); ++size) {
    all.insert(frontier.begin(), frontier.end());
    if (size == k) break;
    std::set<std::vector<std::size_t>> next;
    for (const auto& set : frontier) {
      for (auto m : set) {
        for (auto n : adj[m]) {
          if (std::binary_search(set.begin(), set.end(), n)) continue;
          auto grown = set;
          grown.insert(std::upper_bound(grown.begin(), grown.end(), n), n);
          next.insert(std::move(grown));
        }
      }
    }
    frontier = std::move(next);
  }
  return {all.begin(), all.end()};
}

std::vector<RegularityReport> detect_regularity_case1(const std::vector<Structure>& pop, std::size_t k_max,
                                                      std::size_t k_cap) {
  if (k_max == 0) throw PreconditionError("motif size must be at least 1");
  if (k_max > k_cap) {
    throw LimitError("motif size " + std::to_string(k_max) + " exceeds cap " + std::to_string(k_cap));
  }
  struct Motif {
    Structure s;
    std::vector<Occurrence> occ;
    std::set<std::size_t> members;
  };
  std::map<std::pair<std::size_t, std::string>, Motif> motifs;
  for (std::size_t m = 0; m < pop.size(); ++m) {
    for (auto& set : connected_subsets(pop[m], k_max)) {
      Structure sub = pop[m].induced(set);
      std::string key = canonical_form(sub).text;
      auto& entry = motifs[{set.size(), key}];
      if (entry.occ.empty()) entry.s = std::move(sub);
      entry.members.insert(m);
      entry.occ.push_back({m, std::move(set)});
    }
  }
  std::vector<RegularityReport> out;
  for (auto& [key, motif] : motifs) {
    if (motif.members.size() < 2) continue;
    RegularityReport r;
    r.kind = RegularityCase::IdenticalPortions;
    r.motif = std::move(motif.s);
    r.motif_key = key.second;
    r.witnesses = std::move(motif.occ);
    r.members.assign(motif.members.begin(), motif.members.end());
    out.push_back(std::move(r));
  }
  return out;
}

std::size_t definitional_elements(const Structure& s) {
  std::size_t n = s.size() + s.relations().size();
  for (const auto& p : s.parts()) n += p.attrs.size();
  for (const auto& r : s.relations()) n += r.attrs.size();
  return n;
}

namespace {

using Keys = std::vector<std::string>;

// Relation keys per part pair; unordered pairs unless oriented.
struct PairTable {
  std::size_t n = 0;
  std::vector<Keys> cells;

  PairTable(const Structure& s) : n(s.size()), cells(n * n) {
    for (const auto& r : s.relations()) {
      auto a = r.from, b = r.to;
      if (!s.oriented() && a > b) std::swap(a, b);
      cells[a * n + b].push_back(relation_key(r));
    }
    for (auto& c : cells) std::sort(c.begin(), c.end());
  }
  const Keys& at(std::size_t a, std::size_t b) const { return cells[a * n + b]; }
};

std::size_t common_count(const Keys& a, const Keys& b) {
  std::size_t i = 0, j = 0, c = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++c, ++i, ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return c;
}

std::size_t pair_cost(const Keys& a, const Keys& b) { return std::max(a.size(), b.size()) - common_count(a, b); }

struct EditSearch {
  const Structure& a;
  const Structure& b;
  bool oriented;
  PairTable ta, tb;
  std::vector<std::string> ka, kb;
  std::vector<std::size_t> order;  // a parts in assignment order
  std::vector<std::size_t> map, best_map;
  std::vector<char> used;
  std::size_t best;

  EditSearch(const Structure& a_, const Structure& b_, std::size_t bound)
      : a(a_), b(b_), oriented(a_.oriented()), ta(a_), tb(b_), best(bound + 1) {
    for (const auto& p : a.parts()) ka.push_back(content_key(p));
    for (const auto& p : b.parts()) kb.push_back(content_key(p));
    // BFS order so relation costs show up early.
    const auto adj = a.adjacency();
    std::vector<char> seen(a.size(), 0);
    for (std::size_t s = 0; s < a.size(); ++s) {
      if (seen[s]) continue;
      seen[s] = 1;
      std::size_t h = order.size();
      order.push_back(s);
      for (; h < order.size(); ++h) {
        for (auto n : adj[order[h]]) {
          if (!seen[n]) seen[n] = 1, order.push_back(n);
        }
      }
    }
    map.assign(a.size(), 0);
    used.assign(b.size(), 0);
  }

  std::size_t keys_cost(std::size_t i, std::size_t j, std::size_t h, std::size_t k) const {
    if (!oriented) {
      return pair_cost(ta.at(std::min(i, h), std::max(i, h)), tb.at(std::min(j, k), std::max(j, k)));
    }
    return pair_cost(ta.at(i, h), tb.at(j, k)) + pair_cost(ta.at(h, i), tb.at(k, j));
  }

  // Content mismatches that remain unavoidable among unassigned parts.
  std::size_t content_bound(std::size_t depth) const {
    std::map<std::string, long> diff;
    for (std::size_t d = depth; d < order.size(); ++d) ++diff[ka[order[d]]];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j]) --diff[kb[j]];
    }
    long surplus = 0;
    for (const auto& [k, v] : diff) {
      if (v > 0) surplus += v;
    }
    return static_cast<std::size_t>(surplus);
  }

  void run(std::size_t depth, std::size_t cost) {
    if (cost >= best) return;
    if (depth == order.size()) {
      best = cost;
      best_map = map;
      return;
    }
    if (cost + content_bound(depth) >= best) return;
    const std::size_t i = order[depth];
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      std::size_t c = cost + (ka[i] != kb[j] ? 1 : 0);
      for (std::size_t d = 0; d < depth && c < best; ++d) {
        c += keys_cost(i, j, order[d], map[order[d]]);
      }
      if (c >= best) continue;
      used[j] = 1;
      map[i] = j;
      run(depth + 1, c);
      used[j] = 0;
    }
  }
};

void describe_pair(const Structure& a, const Keys& ka, const Keys& kb, std::size_t x, std::size_t y,
                   std::vector<std::string>& edits) {
  std::vector<std::string> only_a, only_b;
  std::set_difference(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(only_a));
  std::set_difference(kb.begin(), kb.end(), ka.begin(), ka.end(), std::back_inserter(only_b));
  const std::string where = a.part(x).id + " " + a.part(y).id;
  const std::size_t relabel = std::min(only_a.size(), only_b.size());
  for (std::size_t k = 0; k < relabel; ++k) {
    edits.push_back("relabel " + where + " " + only_a[k] + " -> " + only_b[k]);
  }
  for (std::size_t k = relabel; k < only_a.size(); ++k) edits.push_back("delete " + where + " " + only_a[k]);
  for (std::size_t k = relabel; k < only_b.size(); ++k) edits.push_back("insert " + where + " " + only_b[k]);
}

}  // namespace

std::optional<EditResult> edit_distance(const Structure& a, const Structure& b, std::size_t bound) {
  if (a.size() > 12 || b.size() > 12) throw LimitError("edit distance is limited to 12 parts");
  if (a.size() != b.size() || a.oriented() != b.oriented()) return std::nullopt;
  EditSearch search(a, b, bound);
  search.run(0, 0);
  if (search.best > bound) return std::nullopt;
  EditResult res;
  res.distance = search.best;
  res.mapping = search.best_map;
  const auto& m = res.mapping;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (search.ka[i] != search.kb[m[i]]) {
      res.edits.push_back("substitute " + a.part(i).id + " " + search.ka[i] + " -> " + search.kb[m[i]]);
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t h = a.oriented() ? 0 : i; h < a.size(); ++h) {
      std::size_t x = i, y = h, bx = m[i], by = m[h];
      if (!a.oriented() && bx > by) std::swap(bx, by);
      describe_pair(a, search.ta.at(x, y), search.tb.at(bx, by), x, y, res.edits);
    }
  }
  return res;
}

std::optional<RegularityReport> detect_regularity_case2(const Structure& a, const Structure& b, double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw PreconditionError("eps must lie in (0, 0.5]");
  const std::size_t count = std::max(definitional_elements(a), definitional_elements(b));
  // Tiny slack so that e.g. 0.1 * 30 is not floored to 2.
  const auto bound = static_cast<std::size_t>(std::floor(eps * static_cast<double>(count) + 1e-9));
  auto res = edit_distance(a, b, bound);
  if (!res) return std::nullopt;
  RegularityReport r;
  r.kind = RegularityCase::NearIdentical;
  r.mapping = std::move(res->mapping);
  r.edits = std::move(res->edits);
  r.distance = res->distance;
  r.element_count = count;
  r.members = {0, 1};
  return r;
}

Grammar default_grammar(const Config& cfg) {
  Grammar g;
  g.mask_cap = cfg.regularity.mask_cap;
  g.budget = cfg.regularity.recipe_budget;
  g.derivers.push_back({"", [](const Structure& s) { return std::optional<Structure>(s); }});
  const std::size_t maxp = cfg.derivation.max_partitions;
  for (std::size_t k = 0; k < maxp; ++k) {
    g.derivers.push_back({"partition:" + std::to_string(k), [k, maxp](const Structure& s) -> std::optional<Structure> {
                            if (s.empty()) return std::nullopt;
                            auto parts = canonical_partitions(std::make_shared<const Structure>(s), maxp);
                            if (k >= parts.size()) return std::nullopt;
                            return quotient(parts[k]);
                          }});
  }
  const PixelConfig pixel = cfg.pixel;
  g.derivers.push_back({"stroke-quotient", [pixel](const Structure& s) -> std::optional<Structure> {
                          auto r = raster_from_base(s);
                          if (!r) return std::nullopt;
                          auto q = polygon_quotient(*r, pixel).quotient;
                          if (q.empty()) return std::nullopt;
                          return q;
                        }});
  return g;
}

namespace {

std::string family_of(const std::string& attr) { return attr.substr(0, attr.find('.')); }

std::set<std::string> families(const Structure& s) {
  std::set<std::string> out;
  for (const auto& p : s.parts()) {
    for (const auto& [k, v] : p.attrs) out.insert(family_of(k));
  }
  for (const auto& r : s.relations()) {
    for (const auto& [k, v] : r.attrs) out.insert(family_of(k));
  }
  return out;
}

// Subsets of `items` of size 1..cap, smaller first, then lexicographic.
std::vector<std::vector<std::string>> subsets_upto(const std::vector<std::string>& items, std::size_t cap) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> cur;
  for (std::size_t size = 1; size <= std::min(cap, items.size()); ++size) {
    auto rec = [&](auto& self, std::size_t start) -> void {
      if (cur.size() == size) {
        out.push_back(cur);
        return;
      }
      for (std::size_t i = start; i < items.size(); ++i) {
        cur.push_back(items[i]);
        self(self, i + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
  }
  return out;
}

}  // namespace

Case3Result detect_regularity_case3(const std::vector<Structure>& pop, const Grammar& grammar) {
  Case3Result result;
  std::set<std::vector<std::size_t>> seen;
  std::size_t spent = 0;
  for (const auto& deriver : grammar.derivers) {
    std::vector<std::optional<Structure>> derived;
    std::set<std::string> fam;
    for (const auto& s : pop) {
      derived.push_back(deriver.apply(s));
      if (derived.back()) {
        auto f = families(*derived.back());
        fam.insert(f.begin(), f.end());
      }
    }
    std::vector<std::vector<std::string>> masks{{}};
    auto more = subsets_upto({fam.begin(), fam.end()}, grammar.mask_cap);
    masks.insert(masks.end(), more.begin(), more.end());
    for (const auto& mask : masks) {
      std::map<std::string, std::vector<std::size_t>> groups;
      std::map<std::string, Structure> shape;
      for (std::size_t m = 0; m < pop.size(); ++m) {
        if (!derived[m]) continue;
        if (++spent > grammar.budget) {
          result.partial = true;
          for (auto& r : result.reports) r.partial = true;
          return result;
        }
        MorphismMask mm;
        const auto present = families(*derived[m]);
        for (const auto& f : mask) {
          if (present.count(f)) mm.drop_attrs.insert(f);
        }
        Structure view = mm.empty() ? *derived[m] : apply_morphism(*derived[m], mm);
        auto key = canonical_form(view).text;
        groups[key].push_back(m);
        shape.emplace(key, std::move(view));
      }
      for (auto& [key, members] : groups) {
        if (members.size() < 2 || !seen.insert(members).second) continue;
        RegularityReport r;
        r.kind = RegularityCase::DerivedCoincidence;
        r.recipe = deriver.name;
        if (!mask.empty()) {
          r.recipe += r.recipe.empty() ? "drop " : " | drop ";
          for (std::size_t i = 0; i < mask.size(); ++i) r.recipe += (i ? "," : "") + mask[i];
        }
        r.members = members;
        r.motif = shape.at(key);
        r.motif_key = key;
        result.reports.push_back(std::move(r));
      }
    }
  }
  return result;
}

bool verify_regularity_case4(const std::vector<Structure>& seq, const SchemaLibrary& lib, const std::string& op,
                             std::uint64_t fuel) {
  if (seq.size() < 2) throw PreconditionError("an operator regularity needs at least two structures");
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    auto res = execute(lib, op, seq[i], fuel);
    if (res.status == ExecStatus::OutOfFuel) {
      throw LimitError("operator " + op + " ran out of fuel on element " + std::to_string(i));
    }
    if (!isomorphic_unchecked(res.output, seq[i + 1])) return false;
  }
  return true;
}

}  // namespace sc
