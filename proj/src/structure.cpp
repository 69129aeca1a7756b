#include "sc/structure.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "sc/canonical.hpp"
#include "sc/error.hpp"

namespace sc {

std::size_t Structure::add_part(std::string id, std::string type, AttrMap attrs,
                                std::string payload) {
  if (index_.count(id) != 0) throw ValidationError("duplicate part id '" + id + "'");
  const std::size_t i = parts_.size();
  index_.emplace(id, i);
  parts_.push_back(Part{std::move(id), std::move(type), std::move(attrs), std::move(payload)});
  return i;
}

std::size_t Structure::add_relation(std::size_t from, std::size_t to, std::string label,
                                    AttrMap attrs) {
  if (from >= parts_.size() || to >= parts_.size()) {
    throw ValidationError("relation endpoint out of range");
  }
  relations_.push_back(Relation{from, to, std::move(label), std::move(attrs)});
  return relations_.size() - 1;
}

std::size_t Structure::add_relation(std::string_view from_id, std::string_view to_id,
                                    std::string label, AttrMap attrs) {
  return add_relation(require_index(from_id), require_index(to_id), std::move(label),
                      std::move(attrs));
}

void Structure::remove_relation(std::size_t index) {
  relations_.erase(relations_.begin() + static_cast<std::ptrdiff_t>(index));
}

void Structure::set_content(std::size_t part, std::string type, AttrMap attrs) {
  parts_.at(part).type = std::move(type);
  parts_.at(part).attrs = std::move(attrs);
}

void Structure::set_payload(std::size_t part, std::string payload) {
  parts_.at(part).payload = std::move(payload);
}

std::optional<std::size_t> Structure::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Structure::require_index(std::string_view id) const {
  auto i = index_of(id);
  if (!i) throw ValidationError("unknown part '" + std::string(id) + "'");
  return *i;
}

std::vector<std::vector<std::size_t>> Structure::incidence() const {
  std::vector<std::vector<std::size_t>> inc(parts_.size());
  for (std::size_t r = 0; r < relations_.size(); ++r) {
    inc[relations_[r].from].push_back(r);
    if (relations_[r].to != relations_[r].from) inc[relations_[r].to].push_back(r);
  }
  return inc;
}

std::vector<std::vector<std::size_t>> Structure::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(parts_.size());
  for (const auto& r : relations_) {
    if (r.from == r.to) continue;
    adj[r.from].push_back(r.to);
    adj[r.to].push_back(r.from);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

bool Structure::connected() const {
  if (parts_.empty()) return true;
  const auto adj = adjacency();
  std::vector<char> seen(parts_.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (auto v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == parts_.size();
}

Structure Structure::induced(const std::vector<std::size_t>& members) const {
  Structure out(oriented_);
  std::vector<std::ptrdiff_t> pos(parts_.size(), -1);
  for (std::size_t k = 0; k < members.size(); ++k) {
    const auto& p = parts_.at(members[k]);
    pos[members[k]] = static_cast<std::ptrdiff_t>(out.add_part(p.id, p.type, p.attrs, p.payload));
  }
  for (const auto& r : relations_) {
    if (pos[r.from] >= 0 && pos[r.to] >= 0) {
      out.add_relation(static_cast<std::size_t>(pos[r.from]), static_cast<std::size_t>(pos[r.to]),
                       r.label, r.attrs);
    }
  }
  return out;
}

namespace {

std::vector<std::string> normalized_relations(const Structure& s) {
  std::vector<std::string> keys;
  keys.reserve(s.relations().size());
  for (const auto& r : s.relations()) {
    auto a = r.from, b = r.to;
    if (!s.oriented() && b < a) std::swap(a, b);
    keys.push_back(std::to_string(a) + ' ' + std::to_string(b) + ' ' + relation_key(r));
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

bool Structure::identical(const Structure& other) const {
  if (oriented_ != other.oriented_ || parts_.size() != other.parts_.size() ||
      relations_.size() != other.relations_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (content_key(parts_[i]) != content_key(other.parts_[i]) ||
        parts_[i].payload != other.parts_[i].payload) {
      return false;
    }
  }
  return normalized_relations(*this) == normalized_relations(other);
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i].message;
  }
  return os.str();
}

ValidationReport validate(const Structure& s, const TypeCatalog* catalog) {
  ValidationReport rep;
  if (s.empty()) {
    rep.issues.push_back({IssueKind::Empty, "structure has no parts"});
    return rep;
  }
  std::set<std::string> seen;
  std::vector<char> touched(s.size(), 0);
  for (const auto& r : s.relations()) {
    if (r.from >= s.size() || r.to >= s.size()) {
      rep.issues.push_back({IssueKind::BadIndex, "relation endpoint out of range"});
      continue;
    }
    const auto& a = s.part(r.from).id;
    const auto& b = s.part(r.to).id;
    if (r.from == r.to) {
      rep.issues.push_back({IssueKind::SelfLoop, "self-loop on '" + a + "'"});
      continue;
    }
    touched[r.from] = touched[r.to] = 1;
    auto x = r.from, y = r.to;
    if (!s.oriented() && y < x) std::swap(x, y);
    std::string key = std::to_string(x) + ' ' + std::to_string(y) + ' ' + r.label;
    if (!seen.insert(key).second) {
      rep.issues.push_back({IssueKind::DuplicateRelation,
                            "duplicate relation " + a + " " + b + " " + r.label});
    }
  }
  if (s.size() > 1) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!touched[i]) {
        rep.issues.push_back({IssueKind::IsolatedPart, "isolated part '" + s.part(i).id + "'"});
      }
    }
  }
  if (catalog) {
    for (const auto& p : s.parts()) {
      if (!p.payload.empty() && !catalog->resolves(p.payload)) {
        rep.issues.push_back(
            {IssueKind::UnresolvedType, "payload '" + p.payload + "' of '" + p.id + "' unresolved"});
      }
    }
  }
  return rep;
}

void require_valid(const Structure& s, const TypeCatalog* catalog) {
  auto rep = validate(s, catalog);
  if (!rep.ok()) throw ValidationError(rep.summary());
}

void TypeCatalog::add_atomic(const std::string& id) {
  entries_.try_emplace(id, Entry{});
}

void TypeCatalog::add_nested(const std::string& id, Structure nested, AttrMap attrs) {
  entries_[id] = Entry{std::move(nested), std::move(attrs)};
  if (!acyclic()) {
    entries_.erase(id);
    throw ValidationError("nested type '" + id + "' forms a reference cycle");
  }
}

std::string TypeCatalog::intern(const Structure& s) {
  const auto canon = canonical_form(s);
  char buf[32];
  std::snprintf(buf, sizeof buf, "q:%016llx", static_cast<unsigned long long>(canon.hash()));
  std::string id(buf);
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    Structure stored = s.induced(canon.order);
    entries_.emplace(id, Entry{std::move(stored), {}});
  } else if (it->second.nested && canonical_form(*it->second.nested).text != canon.text) {
    throw Error("type catalog hash collision on " + id);
  }
  return id;
}

void TypeCatalog::declare_attribute(const std::string& name, AttributeSpec spec) {
  attributes_[name] = std::move(spec);
}

const TypeCatalog::Entry& TypeCatalog::at(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw ValidationError("unresolved type id '" + id + "'");
  return it->second;
}

bool TypeCatalog::declares_attribute(const std::string& name) const {
  for (const auto& [k, v] : attributes_) {
    if (in_attribute_family(k, name)) return true;
  }
  return false;
}

std::string TypeCatalog::content_key(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end() || !it->second.nested) return id;
  std::string key = canonical_form(*it->second.nested, {true, this}).text;
  for (const auto& [k, v] : it->second.attrs) key += ";" + k + "=" + std::to_string(v);
  return key;
}

bool TypeCatalog::acyclic() const {
  // 0 = unvisited, 1 = on stack, 2 = done
  std::map<std::string, int> state;
  std::vector<std::pair<std::string, std::vector<std::string>>> stack;
  auto children = [&](const std::string& id) {
    std::vector<std::string> out;
    auto it = entries_.find(id);
    if (it != entries_.end() && it->second.nested) {
      for (const auto& p : it->second.nested->parts()) {
        if (!p.payload.empty()) out.push_back(p.payload);
      }
    }
    return out;
  };
  for (const auto& [root, entry] : entries_) {
    if (state[root] != 0) continue;
    stack.push_back({root, children(root)});
    state[root] = 1;
    while (!stack.empty()) {
      auto& [id, kids] = stack.back();
      if (kids.empty()) {
        state[id] = 2;
        stack.pop_back();
        continue;
      }
      auto next = kids.back();
      kids.pop_back();
      if (state[next] == 1) return false;
      if (state[next] == 0) {
        state[next] = 1;
        stack.push_back({next, children(next)});
      }
    }
  }
  return true;
}

bool in_attribute_family(std::string_view name, std::string_view family) {
  if (name == family) return true;
  return name.size() > family.size() && name.substr(0, family.size()) == family &&
         name[family.size()] == '.';
}

std::string content_key(const Part& p) {
  std::string key = p.type;
  for (const auto& [k, v] : p.attrs) {
    key += ';';
    key += k;
    key += '=';
    key += std::to_string(v);
  }
  return key;
}

std::string relation_key(const Relation& r) {
  std::string key = r.label;
  for (const auto& [k, v] : r.attrs) {
    key += ';';
    key += k;
    key += '=';
    key += std::to_string(v);
  }
  return key;
}

}  // namespace sc
