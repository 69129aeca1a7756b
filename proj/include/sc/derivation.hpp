#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "sc/structure.hpp"

namespace sc {

// Induced sub-structure of a parent. Members are parent part indices in
// ascending order.
struct Portion {
  std::shared_ptr<const Structure> parent;
  std::vector<std::size_t> members;
  Structure induced;
};

Portion portion(std::shared_ptr<const Structure> parent, std::vector<std::size_t> members,
                bool allow_disconnected = false);
Portion portion(std::shared_ptr<const Structure> parent, const std::vector<std::string>& member_ids,
                bool allow_disconnected = false);

struct Partition {
  std::shared_ptr<const Structure> parent;
  std::vector<Portion> blocks;

  // block_of[i] = index of the block holding parent part i.
  std::vector<std::size_t> block_of() const;
};

// Blocks must be non-empty, pairwise disjoint and cover the parent.
Partition make_partition(std::shared_ptr<const Structure> parent,
                         std::vector<std::vector<std::size_t>> blocks,
                         bool allow_disconnected = true);

// One part per block. Part types intern the canonical form of the block, so
// two quotient parts share a type iff their blocks are isomorphic. A relation
// joins two blocks iff some parent relation crosses them; it carries the
// crossing count and a per-label count.
Structure quotient(const Partition& k, TypeCatalog* catalog = nullptr);

// Suppression of distinctions. Attribute names are families: dropping
// "angle" also drops "angle.dir" and "angle.joint".
struct MorphismMask {
  std::set<std::string> drop_attrs;
  std::set<std::string> drop_part_attrs;
  std::set<std::string> drop_rel_attrs;
  std::map<std::string, std::string> merge_types;
  std::map<std::string, std::string> merge_labels;

  bool empty() const;
  // Applying the result equals applying *this and then `next`.
  MorphismMask then(const MorphismMask& next) const;
  bool operator==(const MorphismMask&) const = default;
};

// Same part count; dropped attributes removed, types and labels coarsened.
// Relations that coincide after coarsening are merged, keeping the
// per-attribute minimum.
Structure apply_morphism(const Structure& s, const MorphismMask& m,
                         const TypeCatalog* catalog = nullptr);

// Partitions proposed by internal-information analysis: blocks grown over
// equal-content neighbours (any label, then per label). Largest block count
// first; at most `max_partitions`.
std::vector<Partition> canonical_partitions(std::shared_ptr<const Structure> s,
                                            std::size_t max_partitions = 8);

enum class DerivationKind { Base, Portion, Quotient, Morphism, Compose, Difference, Convolution, Other };

const char* to_string(DerivationKind k);

struct DerivationRecord {
  std::size_t id = 0;
  DerivationKind kind = DerivationKind::Base;
  std::vector<std::size_t> inputs;
  std::string parameters;
  Structure output;
};

// Append-only lineage log. One writer, many readers.
class LineageStore {
 public:
  std::size_t add_base(Structure s);
  std::size_t add(DerivationKind kind, std::vector<std::size_t> inputs, std::string parameters,
                  Structure output);

  std::optional<std::size_t> find(const Structure& s) const;
  DerivationRecord record(std::size_t id) const;
  std::size_t size() const;

  // Chain of record ids from `ancestor` to `descendant` (inclusive), if the
  // descendant was derived from the ancestor. Throws when either structure
  // was never registered.
  std::optional<std::vector<std::size_t>> derives_from(const Structure& descendant,
                                                       const Structure& ancestor) const;

 private:
  mutable std::shared_mutex mutex_;
  std::vector<DerivationRecord> records_;
};

}  // namespace sc
