#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sc/structure.hpp"

namespace sc {

struct CompareOptions {
  // Also compare part payloads (nested content), resolved through `catalog`
  // when given. This is the "all physical effects" comparison.
  bool physical = false;
  const TypeCatalog* catalog = nullptr;
};

struct CanonicalForm {
  // Isomorphism-class certificate. Equal text iff isomorphic.
  std::string text;
  // order[k] = index of the part placed at canonical position k.
  std::vector<std::size_t> order;

  std::uint64_t hash() const;
};

// Colour refinement followed by individualization search with automorphism
// pruning; the lexicographically least leaf certificate wins.
CanonicalForm canonical_form(const Structure& s, const CompareOptions& opts = {});

struct IsoResult {
  bool isomorphic = false;
  // witness[i] = part of b corresponding to part i of a.
  std::vector<std::size_t> witness;
  explicit operator bool() const noexcept { return isomorphic; }
};

// Requires both structures valid (throws ValidationError otherwise).
IsoResult isomorphic(const Structure& a, const Structure& b, const CompareOptions& opts = {});
// Same, without the validity precondition (used on derived intermediates).
IsoResult isomorphic_unchecked(const Structure& a, const Structure& b,
                               const CompareOptions& opts = {});

// Partition of parts into internal-indistinguishability classes: parts with
// equal content (type and attributes, plus payload when physical), so that
// exchanging any two of them leaves the structure unchanged. Class order
// follows first occurrence.
std::vector<std::vector<std::size_t>> internal_classes(const Structure& s,
                                                       const CompareOptions& opts = {});
// M°: the number of internal classes.
std::size_t internal_class_count(const Structure& s, const CompareOptions& opts = {});

// Requires isomorphic(a, b). Exchanges the payloads of corresponding parts
// across the witness and checks both results still match their originals
// physically.
bool swap_indistinguishable(const Structure& a, const Structure& b,
                            const TypeCatalog* catalog = nullptr);

std::uint64_t fnv1a(std::string_view text);

}  // namespace sc
