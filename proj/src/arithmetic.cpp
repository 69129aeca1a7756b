#include "sc/arithmetic.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sc/error.hpp"

namespace sc {

Structure compose(const Structure& a, const Structure& b, const std::vector<Glue>& gluing) {
  if (a.empty() || b.empty()) {
    if (!gluing.empty()) throw ValidationError("gluing references parts of an empty operand");
    return a.empty() ? b : a;
  }
  if (a.oriented() != b.oriented()) throw PreconditionError("compose: orientation mismatch");
  if (gluing.empty()) throw PreconditionError("compose: gluing must connect the operands");

  Structure out = a;
  std::vector<std::size_t> b_index(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& p = b.part(i);
    std::string id = p.id;
    while (out.index_of(id)) id += '\'';
    b_index[i] = out.add_part(id, p.type, p.attrs, p.payload);
  }
  for (const auto& r : b.relations()) out.add_relation(b_index[r.from], b_index[r.to], r.label, r.attrs);
  for (const auto& g : gluing) {
    auto ai = a.index_of(g.a_part);
    auto bi = b.index_of(g.b_part);
    if (!ai || !bi) {
      throw ValidationError("gluing references unknown part '" + (ai ? g.b_part : g.a_part) + "'");
    }
    out.add_relation(*ai, b_index[*bi], g.label, g.attrs);
  }
  return out;
}

namespace {

// Relations between two parts, as sorted keys with a direction marker.
class PairIndex {
 public:
  explicit PairIndex(const Structure& s) : oriented_(s.oriented()) {
    for (const auto& r : s.relations()) {
      auto u = r.from, v = r.to;
      std::string key = relation_key(r);
      if (!oriented_ && v < u) std::swap(u, v);
      map_[{u, v}].push_back(key);
    }
    for (auto& [k, v] : map_) std::sort(v.begin(), v.end());
  }

  // Relation keys from u to v; for unoriented structures direction is ignored.
  const std::vector<std::string>& between(std::size_t u, std::size_t v) const {
    if (!oriented_ && v < u) std::swap(u, v);
    auto it = map_.find({u, v});
    return it == map_.end() ? empty_ : it->second;
  }

 private:
  bool oriented_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> map_;
  std::vector<std::string> empty_;
};

class InducedMatcher {
 public:
  InducedMatcher(const Structure& host, const Structure& pattern)
      : host_(host), pat_(pattern), hidx_(host), pidx_(pattern) {
    // pattern order: BFS from the first part so each step touches the mapped set
    const auto adj = pattern.adjacency();
    std::vector<char> seen(pattern.size(), 0);
    for (std::size_t s = 0; s < pattern.size(); ++s) {
      if (seen[s]) continue;
      std::vector<std::size_t> queue{s};
      seen[s] = 1;
      for (std::size_t q = 0; q < queue.size(); ++q) {
        order_.push_back(queue[q]);
        for (auto v : adj[queue[q]]) {
          if (!seen[v]) {
            seen[v] = 1;
            queue.push_back(v);
          }
        }
      }
    }
    for (std::size_t i = 0; i < host.size(); ++i) host_keys_.push_back(content_key(host.part(i)));
    for (std::size_t i = 0; i < pattern.size(); ++i) pat_keys_.push_back(content_key(pattern.part(i)));
  }

  std::set<std::vector<std::size_t>> run() {
    map_.assign(pat_.size(), 0);
    used_.assign(host_.size(), 0);
    extend(0);
    return found_;
  }

 private:
  void extend(std::size_t depth) {
    if (depth == order_.size()) {
      std::vector<std::size_t> set(map_.begin(), map_.end());
      std::sort(set.begin(), set.end());
      found_.insert(std::move(set));
      return;
    }
    const std::size_t p = order_[depth];
    for (std::size_t h = 0; h < host_.size(); ++h) {
      if (used_[h] || host_keys_[h] != pat_keys_[p]) continue;
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        const std::size_t q = order_[d];
        ok = pidx_.between(p, q) == hidx_.between(h, map_[q]) &&
             pidx_.between(q, p) == hidx_.between(map_[q], h);
      }
      if (!ok) continue;
      map_[p] = h;
      used_[h] = 1;
      extend(depth + 1);
      used_[h] = 0;
    }
  }

  const Structure& host_;
  const Structure& pat_;
  PairIndex hidx_, pidx_;
  std::vector<std::string> host_keys_, pat_keys_;
  std::vector<std::size_t> order_, map_;
  std::vector<char> used_;
  std::set<std::vector<std::size_t>> found_;
};

}  // namespace

std::vector<std::vector<std::size_t>> portion_occurrences(const Structure& host,
                                                          const Structure& pattern) {
  if (pattern.empty() || pattern.size() > host.size() || pattern.oriented() != host.oriented()) {
    return {};
  }
  auto found = InducedMatcher(host, pattern).run();
  return {found.begin(), found.end()};
}

std::vector<Structure> difference(const Structure& a, const Structure& b, std::size_t part_cap) {
  if (a.size() > part_cap || b.size() > part_cap) {
    throw LimitError("difference: operand exceeds " + std::to_string(part_cap) + " parts");
  }
  if (b.empty()) return {a};
  std::vector<Structure> out;
  for (const auto& occ : portion_occurrences(a, b)) {
    std::vector<std::size_t> rest;
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (k < occ.size() && occ[k] == i) {
        ++k;
        continue;
      }
      rest.push_back(i);
    }
    out.push_back(a.induced(rest));
  }
  return out;
}

Structure convolution(const Structure& a, const Structure& b, std::size_t part_cap) {
  if (a.size() > part_cap || b.size() > part_cap) {
    throw LimitError("convolution: operand exceeds " + std::to_string(part_cap) + " parts");
  }
  if (a.empty() || b.empty()) throw PreconditionError("convolution: empty operand");
  if (a.oriented() != b.oriented()) {
    throw ValidationError("convolution: incompatible relation structure (orientation differs)");
  }
  Structure out(a.oriented());
  const std::size_t n = a.size();
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = a.part(i);
      out.add_part(b.part(j).id + "/" + p.id, p.type, p.attrs, p.payload);
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (const auto& r : a.relations()) out.add_relation(j * n + r.from, j * n + r.to, r.label, r.attrs);
  }
  for (const auto& r : b.relations()) {
    for (std::size_t i = 0; i < n; ++i) {
      out.add_relation(r.from * n + i, r.to * n + i, r.label, r.attrs);
    }
  }
  return out;
}

}  // namespace sc
