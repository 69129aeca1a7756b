#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sc/structure.hpp"

namespace sc {

// A relation added between a part of the first and a part of the second
// operand of compose().
struct Glue {
  std::string a_part;
  std::string b_part;
  std::string label;
  AttrMap attrs;
};

// Union of a and b plus the gluing relations. Either operand may be empty
// (the identity); otherwise at least one glue is required. Colliding part
// ids of b are suffixed with '\''.
Structure compose(const Structure& a, const Structure& b, const std::vector<Glue>& gluing);

// Distinct part sets of `host` whose induced sub-structure is isomorphic to
// `pattern`. Sets are sorted and listed in lexicographic order.
std::vector<std::vector<std::size_t>> portion_occurrences(const Structure& host,
                                                          const Structure& pattern);

// a minus each portion isomorphic to b, one result per occurrence.
std::vector<Structure> difference(const Structure& a, const Structure& b,
                                  std::size_t part_cap = 64);

// Every part of b replaced by a copy of a (ids "<b part>/<a part>"); each
// relation of b joins every pair of corresponding parts of the two copies.
Structure convolution(const Structure& a, const Structure& b, std::size_t part_cap = 64);

inline std::size_t morphism_number(const Structure& s) { return s.size(); }

}  // namespace sc
