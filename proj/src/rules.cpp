#include "sc/rules.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "sc/arithmetic.hpp"
#include "sc/error.hpp"
#include "sc/struct_io.hpp"

namespace sc {

RecognitionLog parse_log(std::string_view text) {
  RecognitionLog log;
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    Recognition r;
    bool has_t = false, has_subj = false, has_score = false;
    for (const auto& tok : toks) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError(lineno, "expected key=value, got '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      const std::string value = tok.substr(eq + 1);
      if (key == "t") {
        auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), r.t);
        if (ec != std::errc() || p != value.data() + value.size() || r.t < 0) {
          throw ParseError(lineno, "bad tick '" + value + "'");
        }
        has_t = true;
      } else if (key == "subj") {
        if (value.empty()) throw ParseError(lineno, "empty subject");
        r.subject = value;
        has_subj = true;
      } else if (key == "score") {
        auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), r.score);
        if (ec != std::errc() || p != value.data() + value.size() || !(r.score >= 0.0 && r.score <= 1.0)) {
          throw ParseError(lineno, "score must be a number in [0,1]");
        }
        has_score = true;
      } else {
        throw ParseError(lineno, "unknown key '" + key + "'");
      }
    }
    if (!has_t || !has_subj || !has_score) throw ParseError(lineno, "need t=, subj= and score=");
    if (!log.empty() && r.t < log.back().t) throw ParseError(lineno, "ticks must not decrease");
    log.push_back(std::move(r));
  }
  return log;
}

std::string serialize_log(const RecognitionLog& log) {
  std::string out;
  char buf[64];
  for (const auto& r : log) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, r.score);
    out += "t=" + std::to_string(r.t) + " subj=" + r.subject + " score=" + std::string(buf, p) + "\n";
  }
  return out;
}

void validate_situation(const MicroSituation& ms) {
  if (ms.members.empty() || ms.members.size() > 8) throw ValidationError("micro-situation needs 1..8 members");
  for (const auto& m : ms.members) {
    if (m.lo > m.hi) throw ValidationError("window of '" + m.subject + "' is not ordered");
    if (m.subject.empty()) throw ValidationError("micro-situation member without subject");
  }
}

namespace {

double best_in_window(const RecognitionLog& log, const std::string& subject, Tick lo, Tick hi) {
  auto it = std::lower_bound(log.begin(), log.end(), lo, [](const Recognition& r, Tick t) { return r.t < t; });
  double best = 0;
  for (; it != log.end() && it->t <= hi; ++it) {
    if (it->subject == subject) best = std::max(best, it->score);
  }
  return best;
}

double member_score(const Member& m, double best) {
  if (m.positive) return best >= m.min_score ? best : 0.0;
  return 1.0 - best;
}

}  // namespace

double situation_score(const MicroSituation& ms, const RecognitionLog& log, Tick now) {
  validate_situation(ms);
  double score = 1.0;
  for (const auto& m : ms.members) {
    score = std::min(score, member_score(m, best_in_window(log, m.subject, now + m.lo, now + m.hi)));
  }
  return score;
}

double situation_score(const MicroSituation& ms, const RecognitionSet& recognized) {
  validate_situation(ms);
  double score = 1.0;
  for (const auto& m : ms.members) {
    auto it = recognized.find(m.subject);
    score = std::min(score, member_score(m, it == recognized.end() ? 0.0 : it->second));
  }
  return score;
}

std::optional<std::vector<Prediction>> eval_rule(const AssociativeRule& rule, const RecognitionLog& log, Tick now) {
  const double cond = situation_score(rule.condition, log, now);
  if (cond < rule.threshold) return std::nullopt;
  std::vector<Prediction> out;
  for (const auto& c : rule.consequent) out.push_back({c.subject, now + c.lo, now + c.hi, cond * rule.p, rule.name});
  return out;
}

std::vector<Prediction> chain_predictions(const std::vector<AssociativeRule>& rules, const RecognitionLog& log,
                                          Tick now, std::size_t max_rounds) {
  RecognitionLog world = log;
  std::vector<Prediction> out;
  std::set<std::pair<std::string, Tick>> seen;
  std::vector<Tick> agenda{now};
  for (std::size_t round = 0; round < max_rounds && !agenda.empty(); ++round) {
    std::vector<Tick> next;
    for (Tick t : agenda) {
      for (const auto& rule : rules) {
        auto fired = eval_rule(rule, world, t);
        if (!fired) continue;
        for (auto& p : *fired) {
          if (!seen.insert({p.subject, p.lo}).second) continue;
          Recognition r{p.subject, p.confidence, p.lo};
          world.insert(std::upper_bound(world.begin(), world.end(), r.t,
                                        [](Tick x, const Recognition& q) { return x < q.t; }),
                       r);
          next.push_back(p.lo);
          out.push_back(std::move(p));
        }
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    agenda = std::move(next);
  }
  std::stable_sort(out.begin(), out.end(), [](const Prediction& a, const Prediction& b) { return a.lo < b.lo; });
  return out;
}

double laplace(std::uint64_t hits, std::uint64_t trials) {
  return (static_cast<double>(hits) + 1.0) / (static_cast<double>(trials) + 2.0);
}

double recognize(const Subject& s, const Observation& obs) {
  if (const auto* sig = std::get_if<Signature>(&s.recognizer)) {
    if (!obs.assertions) throw PreconditionError("subject '" + s.id + "' needs assertions");
    return evaluate_signature(*sig, *obs.assertions).score;
  }
  if (const auto* tpl = std::get_if<TemplateRecognizer>(&s.recognizer)) {
    if (!obs.structure) throw PreconditionError("subject '" + s.id + "' needs a structure");
    const Structure host = tpl->mask.empty() ? *obs.structure : apply_morphism(*obs.structure, tpl->mask);
    // Patterns are usually written without the attributes the mask drops.
    MorphismMask pm = tpl->mask;
    auto keep_present = [&](std::set<std::string>& drops) {
      std::erase_if(drops, [&](const std::string& f) {
        auto has = [&](const AttrMap& a) {
          return std::any_of(a.begin(), a.end(), [&](const auto& kv) { return in_attribute_family(kv.first, f); });
        };
        return std::none_of(tpl->pattern.parts().begin(), tpl->pattern.parts().end(),
                            [&](const Part& p) { return has(p.attrs); }) &&
               std::none_of(tpl->pattern.relations().begin(), tpl->pattern.relations().end(),
                            [&](const Relation& r) { return has(r.attrs); });
      });
    };
    keep_present(pm.drop_attrs);
    keep_present(pm.drop_part_attrs);
    keep_present(pm.drop_rel_attrs);
    const Structure pat = pm.empty() ? tpl->pattern : apply_morphism(tpl->pattern, pm);
    return portion_occurrences(host, pat).empty() ? 0.0 : 1.0;
  }
  const auto& fact = std::get<FactRecognizer>(s.recognizer).fact;
  if (!obs.facts) throw PreconditionError("subject '" + s.id + "' needs facts");
  return std::find(obs.facts->begin(), obs.facts->end(), fact) != obs.facts->end() ? 1.0 : 0.0;
}

std::vector<Subject> update_legitimacy(std::vector<Subject> subjects, const std::vector<AssociativeRule>& rules,
                                       const std::vector<Validation>& validations, double threshold) {
  std::vector<std::uint64_t> n(rules.size(), 0), hits(rules.size(), 0);
  for (const auto& v : validations) {
    if (v.rule >= rules.size()) throw PreconditionError("validation names an unknown rule");
    ++n[v.rule];
    hits[v.rule] += v.hit;
  }
  for (auto& s : subjects) {
    s.legitimacy = 0;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (n[i] == 0 || laplace(hits[i], n[i]) < threshold) continue;
      const auto& r = rules[i];
      const bool mentions =
          std::any_of(r.condition.members.begin(), r.condition.members.end(),
                      [&](const Member& m) { return m.subject == s.id; }) ||
          std::any_of(r.consequent.begin(), r.consequent.end(), [&](const Consequent& c) { return c.subject == s.id; });
      s.legitimacy += mentions;
    }
    s.candidate_only = s.legitimacy == 0;
  }
  return subjects;
}

}  // namespace sc
