#include "sc/derivation.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <mutex>
#include <numeric>
#include <tuple>

#include "sc/canonical.hpp"
#include "sc/error.hpp"

namespace sc {

Portion portion(std::shared_ptr<const Structure> parent, std::vector<std::size_t> members,
                bool allow_disconnected) {
  if (!parent) throw PreconditionError("portion of a null structure");
  if (members.empty()) throw PreconditionError("portion needs at least one part");
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw PreconditionError("portion lists a part twice");
  }
  if (members.back() >= parent->size()) throw PreconditionError("portion member out of range");
  Structure induced = parent->induced(members);
  if (!allow_disconnected && !induced.connected()) {
    throw PreconditionError("portion is not connected in its parent");
  }
  return Portion{std::move(parent), std::move(members), std::move(induced)};
}

Portion portion(std::shared_ptr<const Structure> parent, const std::vector<std::string>& member_ids,
                bool allow_disconnected) {
  if (!parent) throw PreconditionError("portion of a null structure");
  std::vector<std::size_t> members;
  members.reserve(member_ids.size());
  for (const auto& id : member_ids) members.push_back(parent->require_index(id));
  return portion(std::move(parent), std::move(members), allow_disconnected);
}

std::vector<std::size_t> Partition::block_of() const {
  std::vector<std::size_t> out(parent ? parent->size() : 0, 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (auto m : blocks[b].members) out[m] = b;
  }
  return out;
}

Partition make_partition(std::shared_ptr<const Structure> parent,
                         std::vector<std::vector<std::size_t>> blocks, bool allow_disconnected) {
  if (!parent) throw PreconditionError("partition of a null structure");
  std::vector<int> seen(parent->size(), 0);
  Partition k{parent, {}};
  for (auto& b : blocks) {
    for (auto m : b) {
      if (m >= parent->size()) throw PreconditionError("partition block member out of range");
      if (seen[m]++) throw PreconditionError("partition blocks overlap at part '" + parent->part(m).id + "'");
    }
    k.blocks.push_back(portion(parent, std::move(b), allow_disconnected));
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw PreconditionError("partition does not cover part '" + parent->part(i).id + "'");
  }
  return k;
}

Structure quotient(const Partition& k, TypeCatalog* catalog) {
  const Structure& s = *k.parent;
  Structure q(s.oriented());
  for (std::size_t b = 0; b < k.blocks.size(); ++b) {
    std::string type;
    if (catalog) {
      type = catalog->intern(k.blocks[b].induced);
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "q:%016llx",
                    static_cast<unsigned long long>(canonical_form(k.blocks[b].induced).hash()));
      type = buf;
    }
    q.add_part("b" + std::to_string(b), std::move(type));
  }
  const auto block = k.block_of();
  struct Crossing {
    std::map<std::string, int> per_label;
    int count = 0;
  };
  std::map<std::pair<std::size_t, std::size_t>, Crossing> crossings;
  for (const auto& r : s.relations()) {
    auto x = block[r.from], y = block[r.to];
    if (x == y) continue;
    if (!s.oriented() && x > y) std::swap(x, y);
    auto& c = crossings[{x, y}];
    ++c.count;
    ++c.per_label[r.label];
  }
  for (const auto& [ends, c] : crossings) {
    std::string label;
    AttrMap attrs{{"count", c.count}};
    for (const auto& [l, n] : c.per_label) {
      if (!label.empty()) label += '+';
      label += l;
      attrs["n." + l] = n;
    }
    q.add_relation(ends.first, ends.second, std::move(label), std::move(attrs));
  }
  return q;
}

bool MorphismMask::empty() const {
  return drop_attrs.empty() && drop_part_attrs.empty() && drop_rel_attrs.empty() &&
         merge_types.empty() && merge_labels.empty();
}

namespace {

std::map<std::string, std::string> chain(const std::map<std::string, std::string>& first,
                                         const std::map<std::string, std::string>& second) {
  std::map<std::string, std::string> out;
  for (const auto& [from, to] : first) {
    auto it = second.find(to);
    out[from] = it == second.end() ? to : it->second;
  }
  for (const auto& [from, to] : second) out.emplace(from, to);
  for (auto it = out.begin(); it != out.end();) {
    it = it->first == it->second ? out.erase(it) : std::next(it);
  }
  return out;
}

bool dropped(const std::string& name, const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& f : a) {
    if (in_attribute_family(name, f)) return true;
  }
  for (const auto& f : b) {
    if (in_attribute_family(name, f)) return true;
  }
  return false;
}

std::string mapped(const std::map<std::string, std::string>& m, const std::string& v) {
  auto it = m.find(v);
  return it == m.end() ? v : it->second;
}

}  // namespace

MorphismMask MorphismMask::then(const MorphismMask& next) const {
  MorphismMask out = *this;
  out.drop_attrs.insert(next.drop_attrs.begin(), next.drop_attrs.end());
  out.drop_part_attrs.insert(next.drop_part_attrs.begin(), next.drop_part_attrs.end());
  out.drop_rel_attrs.insert(next.drop_rel_attrs.begin(), next.drop_rel_attrs.end());
  out.merge_types = chain(merge_types, next.merge_types);
  out.merge_labels = chain(merge_labels, next.merge_labels);
  return out;
}

Structure apply_morphism(const Structure& s, const MorphismMask& m, const TypeCatalog* catalog) {
  auto check_known = [&](const std::string& family, bool parts, bool rels) {
    if (catalog && catalog->declares_attribute(family)) return;
    if (parts) {
      for (const auto& p : s.parts())
        for (const auto& [k, v] : p.attrs)
          if (in_attribute_family(k, family)) return;
    }
    if (rels) {
      for (const auto& r : s.relations())
        for (const auto& [k, v] : r.attrs)
          if (in_attribute_family(k, family)) return;
    }
    throw ValidationError("mask names unknown attribute '" + family + "'");
  };
  for (const auto& a : m.drop_attrs) check_known(a, true, true);
  for (const auto& a : m.drop_part_attrs) check_known(a, true, false);
  for (const auto& a : m.drop_rel_attrs) check_known(a, false, true);

  Structure out(s.oriented());
  for (const auto& p : s.parts()) {
    AttrMap attrs;
    for (const auto& [k, v] : p.attrs) {
      if (!dropped(k, m.drop_attrs, m.drop_part_attrs)) attrs.emplace(k, v);
    }
    out.add_part(p.id, mapped(m.merge_types, p.type), std::move(attrs), p.payload);
  }
  std::map<std::tuple<std::size_t, std::size_t, std::string>, AttrMap> merged;
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> order;
  for (const auto& r : s.relations()) {
    auto from = r.from, to = r.to;
    if (!s.oriented() && from > to) std::swap(from, to);
    std::tuple<std::size_t, std::size_t, std::string> key{from, to, mapped(m.merge_labels, r.label)};
    AttrMap attrs;
    for (const auto& [k, v] : r.attrs) {
      if (!dropped(k, m.drop_attrs, m.drop_rel_attrs)) attrs.emplace(k, v);
    }
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(key, std::move(attrs));
      order.push_back(key);
      continue;
    }
    for (const auto& [k, v] : attrs) {
      auto [slot, fresh] = it->second.emplace(k, v);
      if (!fresh) slot->second = std::min(slot->second, v);
    }
  }
  for (const auto& key : order) {
    out.add_relation(std::get<0>(key), std::get<1>(key), std::get<2>(key), merged[key]);
  }
  return out;
}

namespace {

std::vector<std::vector<std::size_t>> equal_content_components(const Structure& s, const std::string* label) {
  std::vector<std::size_t> parent(s.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& r : s.relations()) {
    if (label && r.label != *label) continue;
    if (content_key(s.part(r.from)) != content_key(s.part(r.to))) continue;
    parent[find(r.from)] = find(r.to);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < s.size(); ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> blocks;
  for (auto& [root, members] : groups) blocks.push_back(std::move(members));
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

}  // namespace

std::vector<Partition> canonical_partitions(std::shared_ptr<const Structure> s, std::size_t max_partitions) {
  if (!s) throw PreconditionError("canonical_partitions of a null structure");
  std::vector<std::vector<std::vector<std::size_t>>> candidates;
  auto consider = [&](std::vector<std::vector<std::size_t>> blocks) {
    if (std::find(candidates.begin(), candidates.end(), blocks) != candidates.end()) return;
    candidates.push_back(std::move(blocks));
  };
  consider(equal_content_components(*s, nullptr));
  std::set<std::string> labels;
  for (const auto& r : s->relations()) labels.insert(r.label);
  for (const auto& l : labels) consider(equal_content_components(*s, &l));
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  if (candidates.size() > max_partitions) candidates.resize(max_partitions);
  std::vector<Partition> out;
  for (auto& c : candidates) out.push_back(make_partition(s, std::move(c), false));
  return out;
}

const char* to_string(DerivationKind k) {
  switch (k) {
    case DerivationKind::Base: return "base";
    case DerivationKind::Portion: return "portion";
    case DerivationKind::Quotient: return "quotient";
    case DerivationKind::Morphism: return "morphism";
    case DerivationKind::Compose: return "compose";
    case DerivationKind::Difference: return "difference";
    case DerivationKind::Convolution: return "convolution";
    case DerivationKind::Other: return "other";
  }
  return "?";
}

std::size_t LineageStore::add_base(Structure s) {
  return add(DerivationKind::Base, {}, {}, std::move(s));
}

std::size_t LineageStore::add(DerivationKind kind, std::vector<std::size_t> inputs,
                              std::string parameters, Structure output) {
  std::unique_lock lock(mutex_);
  for (auto in : inputs) {
    if (in >= records_.size()) throw PreconditionError("lineage input " + std::to_string(in) + " is unknown");
  }
  const std::size_t id = records_.size();
  records_.push_back(DerivationRecord{id, kind, std::move(inputs), std::move(parameters), std::move(output)});
  return id;
}

std::optional<std::size_t> LineageStore::find(const Structure& s) const {
  std::shared_lock lock(mutex_);
  for (std::size_t i = records_.size(); i-- > 0;) {
    if (records_[i].output.identical(s)) return i;
  }
  return std::nullopt;
}

DerivationRecord LineageStore::record(std::size_t id) const {
  std::shared_lock lock(mutex_);
  if (id >= records_.size()) throw PreconditionError("no lineage record " + std::to_string(id));
  return records_[id];
}

std::size_t LineageStore::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

std::optional<std::vector<std::size_t>> LineageStore::derives_from(const Structure& descendant,
                                                                   const Structure& ancestor) const {
  std::shared_lock lock(mutex_);
  std::vector<std::size_t> starts, targets;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].output.identical(descendant)) starts.push_back(i);
    if (records_[i].output.identical(ancestor)) targets.push_back(i);
  }
  if (starts.empty()) throw PreconditionError("descendant was never registered");
  if (targets.empty()) throw PreconditionError("ancestor was never registered");
  // Walk inputs backwards; inputs always have smaller ids, so this is a DAG.
  std::vector<std::optional<std::size_t>> via(records_.size());
  std::vector<char> seen(records_.size(), 0);
  std::deque<std::size_t> queue;
  for (auto s : starts) {
    seen[s] = 1;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    if (std::find(targets.begin(), targets.end(), cur) != targets.end()) {
      std::vector<std::size_t> path{cur};
      while (via[path.back()]) path.push_back(*via[path.back()]);
      return path;  // ancestor first, descendant last
    }
    for (auto in : records_[cur].inputs) {
      if (seen[in]) continue;
      seen[in] = 1;
      via[in] = cur;
      queue.push_back(in);
    }
  }
  return std::nullopt;
}

}  // namespace sc
