#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sc {

// Quantized attributes. Equality is bin equality.
using AttrMap = std::map<std::string, int>;

struct Part {
  std::string id;
  std::string type;
  AttrMap attrs;
  // Catalog id of the part's nested content. Not visible to ordinary
  // comparison; only the physical (swap) comparison looks at it.
  std::string payload;

  bool operator==(const Part&) const = default;
};

struct Relation {
  std::size_t from = 0;
  std::size_t to = 0;
  std::string label;
  AttrMap attrs;

  bool operator==(const Relation&) const = default;
};

// A first-kind structure: a set of parts, the internal type of each part,
// and labeled external relations between pairs of parts.
class Structure {
 public:
  Structure() = default;
  explicit Structure(bool oriented) : oriented_(oriented) {}

  std::size_t add_part(std::string id, std::string type, AttrMap attrs = {},
                       std::string payload = {});
  std::size_t add_relation(std::size_t from, std::size_t to, std::string label,
                           AttrMap attrs = {});
  std::size_t add_relation(std::string_view from_id, std::string_view to_id,
                           std::string label, AttrMap attrs = {});
  void remove_relation(std::size_t index);
  void set_content(std::size_t part, std::string type, AttrMap attrs);
  void set_payload(std::size_t part, std::string payload);
  void set_oriented(bool oriented) { oriented_ = oriented; }

  bool oriented() const noexcept { return oriented_; }
  std::size_t size() const noexcept { return parts_.size(); }
  bool empty() const noexcept { return parts_.empty(); }
  const std::vector<Part>& parts() const noexcept { return parts_; }
  const std::vector<Relation>& relations() const noexcept { return relations_; }
  const Part& part(std::size_t i) const { return parts_.at(i); }
  std::optional<std::size_t> index_of(std::string_view id) const;
  std::size_t require_index(std::string_view id) const;

  // Relations touching each part (indices into relations()).
  std::vector<std::vector<std::size_t>> incidence() const;
  // Distinct neighbours of each part, ignoring direction and label.
  std::vector<std::vector<std::size_t>> adjacency() const;
  bool connected() const;

  // Induced sub-structure on the given members, in the given order.
  Structure induced(const std::vector<std::size_t>& members) const;

  // Positional equality: same parts in the same order with the same
  // relations. Relation order is ignored.
  bool identical(const Structure& other) const;

  bool operator==(const Structure& other) const { return identical(other); }

 private:
  bool oriented_ = false;
  std::vector<Part> parts_;
  std::vector<Relation> relations_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class IssueKind { Empty, SelfLoop, DuplicateRelation, IsolatedPart, UnresolvedType, BadIndex };

struct Issue {
  IssueKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Issue> issues;
  bool ok() const noexcept { return issues.empty(); }
  std::string summary() const;
};

class TypeCatalog;

// Reports every violated invariant; empty iff well-formed. When a catalog is
// given, payload ids must resolve in it.
ValidationReport validate(const Structure& s, const TypeCatalog* catalog = nullptr);
void require_valid(const Structure& s, const TypeCatalog* catalog = nullptr);

struct AttributeSpec {
  int bins = 0;
  std::string unit;
};

// Resolves internal type ids: atomic labels, or nested structures with
// quantized attributes. Nested entries are interned by canonical form so two
// isomorphic nested structures share an id.
class TypeCatalog {
 public:
  struct Entry {
    std::optional<Structure> nested;
    AttrMap attrs;
  };

  void add_atomic(const std::string& id);
  void add_nested(const std::string& id, Structure nested, AttrMap attrs = {});
  // Returns "q:<hash>" for the canonical form of s, adding it when new.
  std::string intern(const Structure& s);
  void declare_attribute(const std::string& name, AttributeSpec spec);

  bool resolves(const std::string& id) const { return entries_.count(id) != 0; }
  const Entry& at(const std::string& id) const;
  bool declares_attribute(const std::string& name) const;
  const std::map<std::string, AttributeSpec>& attributes() const { return attributes_; }
  std::size_t size() const { return entries_.size(); }
  // Canonical text of a nested entry (or the id itself for atomic ones).
  std::string content_key(const std::string& id) const;
  // True iff no nested entry refers (transitively) back to itself.
  bool acyclic() const;

 private:
  std::map<std::string, Entry> entries_;
  std::map<std::string, AttributeSpec> attributes_;
};

// Whether `name` equals `family` or is a dotted member of it ("angle.dir" is
// in family "angle").
bool in_attribute_family(std::string_view name, std::string_view family);

std::string content_key(const Part& p);
std::string relation_key(const Relation& r);

}  // namespace sc
