#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sc/derivation.hpp"
#include "sc/properties.hpp"
#include "sc/structure.hpp"

namespace sc {

using Tick = std::int64_t;

struct Recognition {
  std::string subject;
  double score = 1.0;
  Tick t = 0;
  bool operator==(const Recognition&) const = default;
};

// Tick-sorted; one line per event: t=<tick> subj=<id> score=<0..1>.
using RecognitionLog = std::vector<Recognition>;

RecognitionLog parse_log(std::string_view text);
std::string serialize_log(const RecognitionLog& log);

// One member of a micro-situation. The window is relative to the
// evaluation tick, inclusive: [now + lo, now + hi].
struct Member {
  std::string subject;
  bool positive = true;
  double min_score = 0.5;
  Tick lo = 0;
  Tick hi = 0;
  bool operator==(const Member&) const = default;
};

struct MicroSituation {
  std::vector<Member> members;
  bool operator==(const MicroSituation&) const = default;
};

// 1..8 members, lo <= hi.
void validate_situation(const MicroSituation& ms);

// Goedel semantics. A positive member scores its best recognition in the
// window (0 below min_score or when absent); a negated member scores one
// minus its best recognition in the window (1 when absent). The
// conjunction is the minimum.
double situation_score(const MicroSituation& ms, const RecognitionLog& log, Tick now);

// Timeless form used for states: subject -> recognition score.
using RecognitionSet = std::map<std::string, double>;
double situation_score(const MicroSituation& ms, const RecognitionSet& recognized);

struct Consequent {
  std::string subject;
  Tick lo = 1;  // offsets after the evaluation tick
  Tick hi = 1;
  bool operator==(const Consequent&) const = default;
};

struct AssociativeRule {
  std::string name;
  MicroSituation condition;
  std::vector<Consequent> consequent;
  double p = 1.0;
  std::uint64_t support = 0;  // condition onsets counted
  std::uint64_t hits = 0;     // onsets followed by the consequent
  bool smoothed = false;      // p = (hits + 1) / (support + 2)
  double threshold = 0.5;     // condition score needed to fire

  bool operator==(const AssociativeRule&) const = default;
};

struct Prediction {
  std::string subject;
  Tick lo = 0;
  Tick hi = 0;
  double confidence = 0;
  std::string rule;
  bool operator==(const Prediction&) const = default;
};

// Fires iff the condition score reaches the rule threshold; each predicted
// recognition carries confidence = condition score * p.
std::optional<std::vector<Prediction>> eval_rule(const AssociativeRule& rule, const RecognitionLog& log, Tick now);

// Forward chaining: predictions are fed back as recognitions (at the start
// of their window, scored by confidence) and rules are re-evaluated there.
// Predictions come out in time order.
std::vector<Prediction> chain_predictions(const std::vector<AssociativeRule>& rules, const RecognitionLog& log,
                                          Tick now, std::size_t max_rounds = 16);

double laplace(std::uint64_t hits, std::uint64_t trials);

// Cognitive subjects.
struct TemplateRecognizer {
  Structure pattern;
  MorphismMask mask;
};
struct FactRecognizer {
  std::string fact;
};
using Recognizer = std::variant<Signature, TemplateRecognizer, FactRecognizer>;

struct Subject {
  std::string id;
  Recognizer recognizer;
  std::vector<std::size_t> lineage;  // derivation record ids
  std::size_t legitimacy = 0;
  bool candidate_only = true;
};

// Observation used to recognise subjects: assertions, a structure, facts.
struct Observation {
  const Assertions* assertions = nullptr;
  const Structure* structure = nullptr;
  const std::vector<std::string>* facts = nullptr;
};

// One score in [0,1]. Template recognizers fire (1) when the masked pattern
// is isomorphic to a portion of the masked structure.
double recognize(const Subject& s, const Observation& obs);

struct Validation {
  std::size_t rule = 0;  // index into the rule list
  Tick t = 0;
  bool hit = false;
};

// Legitimacy = number of rules mentioning the subject whose validated,
// smoothed p reaches `threshold`. Subjects at zero stay candidates.
std::vector<Subject> update_legitimacy(std::vector<Subject> subjects, const std::vector<AssociativeRule>& rules,
                                       const std::vector<Validation>& validations, double threshold);

}  // namespace sc
