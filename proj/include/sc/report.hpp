#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sc/canonical.hpp"
#include "sc/config.hpp"
#include "sc/corpus.hpp"
#include "sc/properties.hpp"
#include "sc/rules.hpp"
#include "sc/solver.hpp"

namespace sc {

using json = nlohmann::json;

// Reports are plain JSON objects with sorted keys; every one carries the
// config under "config". Floating values are rounded to 6 decimals.

json config_json(const Config& cfg);
json structure_json(const Structure& s);  // counts plus the .struct text
json assertion_json(const PropertyAssertion& a);

json iso_report(const Structure& a, const Structure& b, const IsoResult& r, const Config& cfg);
json analysis_report(const Raster& r, const CorpusResult& res, const Config& cfg);
json rules_report(const std::vector<AssociativeRule>& rules, const Config& cfg);
json rule_json(const AssociativeRule& r);
json search_report(const SearchResult& r, const Config& cfg);
json corpus_report(const std::vector<CorpusItem>& items, const std::vector<CorpusResult>& results, const Config& cfg);

// Problem files:
//   {"start": {"facts": [..], "struct": "<.struct text>"},
//    "goal": [member..], "undesired": [[member..]..], "avoid_undesired": bool,
//    "productions": [{"name", "guard": [member..], "add": [..], "remove": [..]}
//                    | {"name", "guard", "schema": "<.schema text>"}
//                    | {"builtin": "move-block"}],
//    "subjects": [{"id", "pattern": "<.struct text>", "drop_attrs": [..]} | {"id", "fact"}],
//    "vocabulary": [..], "heuristic": "none" | "goal-count",
//    "abstraction": {"drop_attrs": [..]}}
// with member = {"subject", "positive": true, "min_score": 0.5}.
// Throws ValidationError on anything malformed.
ProblemSpec problem_from_json(const json& j, std::uint64_t fuel = 1000000);

// Two-space indented, trailing newline.
std::string dump(const json& j);

}  // namespace sc
