#include "sc/report.hpp"

#include <cmath>
#include <map>
#include <set>

#include "sc/error.hpp"
#include "sc/parallel.hpp"
#include "sc/schema.hpp"
#include "sc/struct_io.hpp"

namespace sc {

namespace {

double r6(double x) { return std::round(x * 1e6) / 1e6; }

const char* target_name(TargetKind t) {
  switch (t) {
    case TargetKind::Whole: return "whole";
    case TargetKind::Part: return "part";
    case TargetKind::Pair: return "pair";
  }
  return "?";
}

json member_json(const Member& m) {
  return {{"subject", m.subject}, {"positive", m.positive}, {"min_score", r6(m.min_score)}, {"lo", m.lo}, {"hi", m.hi}};
}

}  // namespace

json config_json(const Config& cfg) { return json::parse(cfg.to_json()); }

json structure_json(const Structure& s) {
  return {{"oriented", s.oriented()},
          {"parts", s.size()},
          {"relations", s.relations().size()},
          {"struct", s.empty() ? std::string() : serialize_struct(s)}};
}

json assertion_json(const PropertyAssertion& a) {
  return {{"target", target_name(a.target)},
          {"refs", a.refs},
          {"feature", a.feature},
          {"value", a.value},
          {"score", r6(a.score)}};
}

json iso_report(const Structure& a, const Structure& b, const IsoResult& r, const Config& cfg) {
  json witness = json::object();
  if (r.isomorphic) {
    for (std::size_t i = 0; i < r.witness.size(); ++i) witness[a.part(i).id] = b.part(r.witness[i]).id;
  }
  return {{"isomorphic", r.isomorphic}, {"witness", witness}, {"config", config_json(cfg)}};
}

json analysis_report(const Raster& r, const CorpusResult& res, const Config& cfg) {
  const auto& an = res.analysis;
  json j;
  j["raster"] = {{"width", r.width}, {"height", r.height}, {"levels", r.levels}};
  const auto labels = region_labels(r);
  std::map<int, std::pair<int, std::size_t>> blocks;  // label -> (value, size)
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& b = blocks[labels[i]];
    b.first = r.values[i];
    ++b.second;
  }
  j["blocks"] = json::array();
  for (const auto& [label, b] : blocks) j["blocks"].push_back({{"index", label}, {"value", b.first}, {"pixels", b.second}});
  j["chains"] = json::array();
  for (std::size_t c = 0; c < an.strokes.chains.size(); ++c) {
    const auto& ch = an.strokes.chains[c];
    const auto& f = an.segments[c];
    j["chains"].push_back({{"index", c},
                           {"closed", ch.closed},
                           {"pixels", an.strokes.owned[c].size()},
                           {"straightness", r6(f.straightness)},
                           {"length", r6(f.length)},
                           {"orientation_deg", r6(f.orientation_deg)}});
  }
  j["thinned"] = an.strokes.thinned;
  j["polygon"] = an.polygon;
  j["problems"] = an.problems;
  j["quotient"] = structure_json(an.quotient);
  j["assertions"] = json::array();
  for (const auto& a : an.assertions) j["assertions"].push_back(assertion_json(a));
  j["signatures"] = json::array();
  for (const auto& sig : polygon_signatures(cfg.pixel.signature_threshold)) {
    const auto s = evaluate_signature(sig, an.assertions);
    j["signatures"].push_back({{"subject", sig.subject}, {"score", r6(s.score)}, {"fired", s.fired}});
  }
  j["config"] = config_json(cfg);
  return j;
}

json rule_json(const AssociativeRule& r) {
  json cond = json::array();
  for (const auto& m : r.condition.members) cond.push_back(member_json(m));
  json cons = json::array();
  for (const auto& c : r.consequent) cons.push_back({{"subject", c.subject}, {"lo", c.lo}, {"hi", c.hi}});
  return {{"name", r.name},       {"condition", cond},   {"consequent", cons},
          {"p", r6(r.p)},         {"support", r.support}, {"hits", r.hits},
          {"smoothed", r.smoothed}, {"threshold", r6(r.threshold)}};
}

json rules_report(const std::vector<AssociativeRule>& rules, const Config& cfg) {
  json arr = json::array();
  for (const auto& r : rules) arr.push_back(rule_json(r));
  return {{"rules", arr}, {"config", config_json(cfg)}};
}

json search_report(const SearchResult& r, const Config& cfg) {
  json plan = json::array();
  for (const auto& a : r.plan) plan.push_back(a.text());
  return {{"status", to_string(r.status)}, {"plan", plan},           {"cost", r.cost},
          {"expanded", r.expanded},         {"visited", r.visited},   {"replayed", r.replayed},
          {"config", config_json(cfg)}};
}

json corpus_report(const std::vector<CorpusItem>& items, const std::vector<CorpusResult>& results, const Config& cfg) {
  json j;
  j["items"] = json::array();
  std::map<std::string, std::pair<int, int>> per_class;  // class -> (items, correct)
  std::map<std::string, std::set<std::string>> keys;      // figure instance -> scale-free keys
  int correct = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    const auto& res = results[i];
    const auto expected = expected_signatures(it);
    const bool ok = res.fired == expected;
    correct += ok;
    auto& pc = per_class[it.polygon_class + (it.regular ? "/regular" : "/irregular")];
    ++pc.first;
    pc.second += ok;
    const std::string instance = it.name.substr(0, it.name.rfind("-s"));
    keys[instance].insert(res.scale_free_key);
    json assertions = json::array();
    for (const auto& a : res.analysis.assertions) {
      if (a.target == TargetKind::Whole) assertions.push_back(assertion_json(a));
    }
    j["items"].push_back({{"name", it.name},
                          {"figure", it.figure},
                          {"class", it.polygon_class},
                          {"regular", it.regular},
                          {"scale", it.scale},
                          {"rotation_step", it.rotation_step},
                          {"width", it.raster.width},
                          {"fired", res.fired},
                          {"expected", expected},
                          {"correct", ok},
                          {"whole_assertions", assertions},
                          {"scale_free_key", fnv1a(res.scale_free_key)}});
  }
  j["classes"] = json::object();
  for (const auto& [cls, pc] : per_class) j["classes"][cls] = {{"items", pc.first}, {"correct", pc.second}};
  int consistent = 0;
  for (const auto& [inst, k] : keys) consistent += k.size() == 1;
  j["summary"] = {{"items", items.size()},
                  {"correct", correct},
                  {"figures", keys.size()},
                  {"scale_consistent_figures", consistent}};
  j["config"] = config_json(cfg);
  return j;
}

namespace {

Member member_from_json(const json& j) {
  Member m;
  m.subject = j.at("subject").get<std::string>();
  m.positive = j.value("positive", true);
  m.min_score = j.value("min_score", 0.5);
  return m;
}

MicroSituation situation_from_json(const json& j) {
  MicroSituation ms;
  for (const auto& m : j) ms.members.push_back(member_from_json(m));
  validate_situation(ms);
  return ms;
}

std::set<std::string> string_set(const json& j, const char* key) {
  std::set<std::string> out;
  if (j.contains(key)) {
    for (const auto& v : j.at(key)) out.insert(v.get<std::string>());
  }
  return out;
}

}  // namespace

ProblemSpec problem_from_json(const json& j, std::uint64_t fuel) {
  try {
    ProblemSpec p;
    const auto& start = j.at("start");
    p.start.facts = string_set(start, "facts");
    if (start.contains("struct")) p.start.structure = parse_struct(start.at("struct").get<std::string>());
    p.goal = situation_from_json(j.at("goal"));
    for (const auto& pj : j.at("productions")) {
      if (pj.contains("builtin")) {
        if (pj.at("builtin") != "move-block") throw ValidationError("unknown builtin production " + pj.at("builtin").dump());
        p.productions.push_back(move_block_production());
        continue;
      }
      Production prod;
      prod.name = pj.at("name").get<std::string>();
      if (pj.contains("guard")) prod.guard = situation_from_json(pj.at("guard"));
      if (pj.contains("schema")) {
        SchemaEffect se;
        se.library = parse_schemas(pj.at("schema").get<std::string>(), &se.entry);
        se.fuel = fuel;
        prod.effect = std::move(se);
      } else {
        prod.effect = FactEffect{string_set(pj, "add"), string_set(pj, "remove")};
      }
      p.productions.push_back(std::move(prod));
    }
    if (j.contains("subjects")) {
      for (const auto& sj : j.at("subjects")) {
        Subject s;
        s.id = sj.at("id").get<std::string>();
        if (sj.contains("pattern")) {
          MorphismMask m;
          m.drop_attrs = string_set(sj, "drop_attrs");
          s.recognizer = TemplateRecognizer{parse_struct(sj.at("pattern").get<std::string>()), m};
        } else {
          s.recognizer = FactRecognizer{sj.at("fact").get<std::string>()};
        }
        p.subjects.push_back(std::move(s));
      }
    }
    p.vocabulary = string_set(j, "vocabulary");
    if (j.contains("undesired")) {
      for (const auto& u : j.at("undesired")) p.undesired.push_back(situation_from_json(u));
    }
    p.avoid_undesired = j.value("avoid_undesired", true);
    if (j.contains("abstraction")) p.abstraction.drop_attrs = string_set(j.at("abstraction"), "drop_attrs");
    p.heuristic_name = j.value("heuristic", std::string("none"));
    if (p.heuristic_name != "none" && p.heuristic_name != "goal-count") {
      throw ValidationError("unknown heuristic '" + p.heuristic_name + "'");
    }
    p.heuristic = builtin_heuristic(p, p.heuristic_name);
    return p;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed problem: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace sc
