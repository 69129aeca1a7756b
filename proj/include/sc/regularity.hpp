#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sc/config.hpp"
#include "sc/derivation.hpp"
#include "sc/schema.hpp"
#include "sc/structure.hpp"

namespace sc {

enum class RegularityCase { IdenticalPortions, NearIdentical, DerivedCoincidence, OperatorCoincidence };

const char* to_string(RegularityCase c);

struct Occurrence {
  std::size_t member = 0;
  std::vector<std::size_t> parts;  // ascending part indices of the member
  bool operator==(const Occurrence&) const = default;
};

struct RegularityReport {
  RegularityCase kind = RegularityCase::IdenticalPortions;
  // identical-portions: the motif and every occurrence
  Structure motif;
  std::string motif_key;  // canonical text
  std::vector<Occurrence> witnesses;
  // near-identical: bijection a -> b and the edit script realising it
  std::vector<std::size_t> mapping;
  std::vector<std::string> edits;
  std::size_t distance = 0;
  std::size_t element_count = 0;
  // derived-coincidence: recipe and the members it makes isomorphic
  std::string recipe;
  std::vector<std::size_t> members;
  bool partial = false;
};

// Connected induced motifs of 1..k_max parts found (up to isomorphism) in
// at least two population members. Ordered by motif size, then key.
std::vector<RegularityReport> detect_regularity_case1(const std::vector<Structure>& pop, std::size_t k_max,
                                                      std::size_t k_cap = 5);

// All connected induced part sets of 1..k parts, each sorted, in
// lexicographic order.
std::vector<std::vector<std::size_t>> connected_subsets(const Structure& s, std::size_t k);

// Elements that define a structure: parts + relations + attributes.
std::size_t definitional_elements(const Structure& s);

struct EditResult {
  std::size_t distance = 0;
  std::vector<std::size_t> mapping;
  std::vector<std::string> edits;
};

// Exact minimum edit distance over part bijections: part content
// substitutions plus relation insertions, deletions and relabelings. Needs
// equal part counts and orientation; returns nullopt when none is within
// `bound`. At most 12 parts.
std::optional<EditResult> edit_distance(const Structure& a, const Structure& b, std::size_t bound);

std::optional<RegularityReport> detect_regularity_case2(const Structure& a, const Structure& b, double eps);

// A named derivation applicable to some structures.
struct Deriver {
  std::string name;
  std::function<std::optional<Structure>(const Structure&)> apply;
};

struct Grammar {
  std::vector<Deriver> derivers;
  std::size_t mask_cap = 2;       // attribute families suppressed at once
  std::size_t budget = 4096;      // (deriver, mask, member) evaluations
};

// identity (named ""), canonical-partition quotients and, for raster base structures,
// the stroke quotient.
Grammar default_grammar(const Config& cfg = {});

struct Case3Result {
  std::vector<RegularityReport> reports;
  bool partial = false;  // budget ran out before the grammar was exhausted
};

// Recipes ("<deriver> | drop <families>"; empty for no derivation) under which at least two
// members become isomorphic. Only groups not already formed by an earlier,
// simpler recipe are reported.
Case3Result detect_regularity_case3(const std::vector<Structure>& pop, const Grammar& grammar);

// execute(op, seq[i]) is isomorphic to seq[i + 1] for every i.
bool verify_regularity_case4(const std::vector<Structure>& seq, const SchemaLibrary& lib, const std::string& op,
                             std::uint64_t fuel = 1000000);

}  // namespace sc
