#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sc/config.hpp"
#include "sc/raster.hpp"
#include "sc/strokes.hpp"
#include "sc/structure.hpp"

namespace sc {

enum class TargetKind { Whole, Part, Pair };

// One explicit feature with its structural reference. Boolean features carry
// value 1 and their degree in `score`; binned features carry the bin in
// `value` and score 1.
struct PropertyAssertion {
  TargetKind target = TargetKind::Whole;
  std::vector<std::string> refs;  // part ids of the quotient
  std::string feature;
  int value = 1;
  double score = 1.0;

  bool operator==(const PropertyAssertion&) const = default;
};

using Assertions = std::vector<PropertyAssertion>;

// Feature ids understood by signatures.
const std::vector<std::string>& feature_catalog();
bool known_feature(const std::string& feature);

struct PolygonAnalysis {
  Strokes strokes;
  std::vector<SegmentFeatures> segments;  // per chain (zeroed for 1-pixel chains)
  Structure quotient;                     // one "segment" part per chain
  Assertions assertions;
  bool polygon = false;                   // all chains straight
  std::vector<std::string> problems;
};

// Segments become parts with attrs "length" (log2 bin) and "angle.dir"
// (orientation bin); touching segments are related by "joined-at-vertex"
// with "angle.joint" (interior angle bin). Polygon assertions are omitted
// when a chain is not straight.
PolygonAnalysis polygon_quotient(const Raster& r, const PixelConfig& cfg = {});

// Whole-structure assertions recomputed from a segment quotient alone.
Assertions whole_assertions(const Structure& quotient);
// Part and pair assertions readable off a segment quotient (no straightness).
Assertions attribute_assertions(const Structure& quotient);

enum class Scope { Whole, AnyPart, AnyPair };

struct FeatureTest {
  std::string feature;
  Scope scope = Scope::Whole;
  std::optional<int> value;
  double min_score = 0.5;

  bool operator==(const FeatureTest&) const = default;
};

struct Signature {
  std::string subject;
  std::vector<FeatureTest> required;
  std::vector<FeatureTest> forbidden;
  double threshold = 0.5;
};

struct SignatureResult {
  double score = 0;
  bool fired = false;
};

// score = min over required of the matched score, times min over forbidden
// of (1 - matched score). Throws on an empty required set or unknown feature.
SignatureResult evaluate_signature(const Signature& sig, const Assertions& assertions);

// Feature sets common to all examples (scores at or above `threshold`),
// most specific first. Part and pair features generalize to "any part".
std::vector<Signature> build_signature_candidates(const std::vector<Assertions>& examples,
                                                  double threshold = 0.5);

// triangle, quadrilateral, hexagon, regular-polygon, irregular-polygon
std::vector<Signature> polygon_signatures(double threshold = 0.5);

std::string to_string(Scope s);
std::string describe(const FeatureTest& t);

}  // namespace sc
