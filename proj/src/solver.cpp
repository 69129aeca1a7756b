#include "sc/solver.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

#include "sc/canonical.hpp"
#include "sc/error.hpp"

namespace sc {

std::string Action::text() const {
  if (args.empty()) return production;
  std::string out = production + "(";
  for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i];
  return out + ")";
}

namespace {

std::set<std::string> known_subjects(const ProblemSpec& p) {
  std::set<std::string> known = p.vocabulary;
  if (known.empty()) {
    known.insert(p.start.facts.begin(), p.start.facts.end());
    for (const auto& prod : p.productions) {
      if (prod.guard) {
        for (const auto& m : prod.guard->members) known.insert(m.subject);
      }
      if (const auto* fe = std::get_if<FactEffect>(&prod.effect)) {
        known.insert(fe->add.begin(), fe->add.end());
        known.insert(fe->remove.begin(), fe->remove.end());
      }
    }
  }
  for (const auto& s : p.subjects) known.insert(s.id);
  return known;
}

bool holds(const ProblemSpec& p, const RecognitionSet& rec, const MicroSituation& ms) {
  return situation_score(ms, rec) >= p.threshold;
}

}  // namespace

RecognitionSet recognitions(const ProblemSpec& p, const State& s) {
  RecognitionSet out;
  for (const auto& f : s.facts) out[f] = 1.0;
  if (p.subjects.empty()) return out;
  const std::vector<std::string> facts(s.facts.begin(), s.facts.end());
  Observation obs;
  obs.facts = &facts;
  if (s.structure) obs.structure = &*s.structure;
  for (const auto& subj : p.subjects) {
    if (std::holds_alternative<TemplateRecognizer>(subj.recognizer) && !s.structure) {
      out[subj.id] = 0.0;
      continue;
    }
    out[subj.id] = std::max(out[subj.id], recognize(subj, obs));
  }
  return out;
}

bool goal_satisfied(const ProblemSpec& p, const State& s, const MicroSituation& goal) {
  validate_situation(goal);
  const auto known = known_subjects(p);
  for (const auto& m : goal.members) {
    if (!known.count(m.subject)) throw ValidationError("goal names unknown subject '" + m.subject + "'");
  }
  return holds(p, recognitions(p, s), goal);
}

bool goal_satisfied(const ProblemSpec& p, const State& s) { return goal_satisfied(p, s, p.goal); }

bool undesired(const ProblemSpec& p, const State& s) {
  if (p.undesired.empty()) return false;
  const auto rec = recognitions(p, s);
  return std::any_of(p.undesired.begin(), p.undesired.end(),
                     [&](const MicroSituation& ms) { return holds(p, rec, ms); });
}

std::string state_key(const State& s) {
  std::string key;
  for (const auto& f : s.facts) key += f + '\n';
  key += '#';
  if (s.structure) key += canonical_form(*s.structure).text;
  return key;
}

Expansion expand(const ProblemSpec& p, const State& s) {
  if (s.structure) require_valid(*s.structure);
  Expansion out;
  const bool any_guard = std::any_of(p.productions.begin(), p.productions.end(),
                                     [](const Production& pr) { return pr.guard.has_value(); });
  RecognitionSet rec;
  if (any_guard) rec = recognitions(p, s);
  for (const auto& prod : p.productions) {
    if (prod.guard && !holds(p, rec, *prod.guard)) continue;
    try {
      if (const auto* fe = std::get_if<FactEffect>(&prod.effect)) {
        State next;
        next.structure = s.structure;
        next.facts = s.facts;
        for (const auto& f : fe->remove) next.facts.erase(f);
        next.facts.insert(fe->add.begin(), fe->add.end());
        out.successors.push_back({Action{prod.name, {}}, std::move(next)});
      } else if (const auto* se = std::get_if<SchemaEffect>(&prod.effect)) {
        if (!s.structure) throw PreconditionError("schema effect needs a structure");
        auto res = execute(se->library, se->entry, *s.structure, se->fuel);
        if (res.status == ExecStatus::OutOfFuel) throw LimitError("schema '" + se->entry + "' ran out of fuel");
        State next{s.facts, std::move(res.output)};
        out.successors.push_back({Action{prod.name, {}}, std::move(next)});
      } else {
        for (auto& succ : std::get<Transform>(prod.effect)(s)) out.successors.push_back(std::move(succ));
      }
    } catch (const Error& e) {
      out.errors.push_back(prod.name + ": " + e.what());
    }
  }
  return out;
}

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Solved: return "solved";
    case SearchStatus::Unsolvable: return "unsolvable";
    case SearchStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

SearchResult solve(const ProblemSpec& p, std::size_t budget) {
  if (budget == 0) throw PreconditionError("search budget must be positive");
  if (p.productions.empty()) throw PreconditionError("a problem needs at least one production");
  struct Node {
    State state;
    std::size_t parent;
    Action action;
    std::size_t g;
    double h;
  };
  constexpr auto none = std::numeric_limits<std::size_t>::max();
  auto h_of = [&](const State& s) {
    if (!p.heuristic) return 0.0;
    const double h = p.heuristic(s);
    if (!(h >= 0.0)) throw PreconditionError("heuristic returned a negative estimate");
    return h;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> best_g;
  // (f, insertion sequence, node)
  using Entry = std::tuple<double, std::size_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  nodes.push_back({p.start, none, {}, 0, h_of(p.start)});
  best_g[state_key(p.start)] = 0;
  open.emplace(nodes[0].h, 0, 0);
  SearchResult res;
  std::size_t best_partial = 0;
  auto plan_to = [&](std::size_t n) {
    std::vector<Action> plan;
    for (; nodes[n].parent != none; n = nodes[n].parent) plan.push_back(nodes[n].action);
    std::reverse(plan.begin(), plan.end());
    return plan;
  };
  while (!open.empty()) {
    const auto [f, seq, n] = open.top();
    open.pop();
    (void)f;
    (void)seq;
    if (nodes[n].g > best_g[state_key(nodes[n].state)]) continue;  // stale entry
    if (goal_satisfied(p, nodes[n].state)) {
      res.status = SearchStatus::Solved;
      res.plan = plan_to(n);
      res.cost = nodes[n].g;
      res.visited = best_g.size();
      return res;
    }
    if (res.expanded == budget) {
      res.status = SearchStatus::BudgetExhausted;
      res.plan = plan_to(best_partial);
      res.cost = nodes[best_partial].g;
      res.visited = best_g.size();
      return res;
    }
    ++res.expanded;
    auto ex = expand(p, nodes[n].state);
    for (auto& [action, next] : ex.successors) {
      if (p.avoid_undesired && undesired(p, next)) continue;
      const std::size_t g = nodes[n].g + 1;
      auto key = state_key(next);
      auto it = best_g.find(key);
      if (it != best_g.end() && it->second <= g) continue;
      best_g[key] = g;
      const double h = h_of(next);
      nodes.push_back({std::move(next), n, std::move(action), g, h});
      const std::size_t id = nodes.size() - 1;
      if (h < nodes[best_partial].h) best_partial = id;
      open.emplace(static_cast<double>(g) + h, id, id);
    }
  }
  res.status = SearchStatus::Unsolvable;
  res.visited = best_g.size();
  return res;
}

std::optional<std::vector<State>> replay(const ProblemSpec& p, const std::vector<Action>& plan) {
  std::vector<State> states{p.start};
  for (const auto& a : plan) {
    auto ex = expand(p, states.back());
    auto it = std::find_if(ex.successors.begin(), ex.successors.end(),
                           [&](const auto& s) { return s.first == a; });
    if (it == ex.successors.end()) return std::nullopt;
    states.push_back(std::move(it->second));
  }
  return states;
}

double SolutionCache::Entry::p() const { return laplace(successes, uses); }

namespace {

std::optional<Structure> abstracted_start(const ProblemSpec& p) {
  if (!p.start.structure) return std::nullopt;
  if (p.abstraction.empty()) return p.start.structure;
  return apply_morphism(*p.start.structure, p.abstraction);
}

}  // namespace

std::string SolutionCache::key(const ProblemSpec& p) {
  std::ostringstream os;
  os << "facts:";
  for (const auto& f : p.start.facts) os << f << ',';
  os << "|start:";
  if (auto s = abstracted_start(p)) os << canonical_form(*s).text;
  os << "|goal:";
  for (const auto& m : p.goal.members) {
    os << (m.positive ? '+' : '-') << m.subject << '@' << m.min_score << '[' << m.lo << ',' << m.hi << ']' << ';';
  }
  os << "|productions:";
  for (const auto& prod : p.productions) os << prod.name << ',';
  return os.str();
}

std::optional<SolutionCache::Entry> SolutionCache::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void SolutionCache::store(const std::string& key, Entry e) {
  std::lock_guard lock(mutex_);
  entries_[key] = std::move(e);
}

void SolutionCache::record(const std::string& key, bool success) {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return;
  ++it->second.uses;
  it->second.successes += success;
}

std::size_t SolutionCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

SearchResult solve_with_cache(const ProblemSpec& p, SolutionCache& cache, std::size_t budget) {
  const std::string key = SolutionCache::key(p);
  const auto start = abstracted_start(p);
  std::vector<std::string> id_at;  // canonical position -> part id of this start
  if (start) {
    for (auto i : canonical_form(*start).order) id_at.push_back(p.start.structure->part(i).id);
  }
  if (auto entry = cache.lookup(key)) {
    SearchResult res;
    res.replayed = true;
    State cur = p.start;
    bool ok = true;
    for (const auto& step : entry->skeleton) {
      Action a{step.production, {}};
      for (std::size_t i = 0; i < step.positions.size(); ++i) {
        const auto pos = step.positions[i];
        a.args.push_back(pos < id_at.size() ? id_at[pos] : step.literal[i]);
      }
      auto ex = expand(p, cur);
      auto it = std::find_if(ex.successors.begin(), ex.successors.end(),
                             [&](const auto& s) { return s.first == a; });
      if (it == ex.successors.end() || (p.avoid_undesired && undesired(p, it->second))) {
        ok = false;
        break;
      }
      ++res.regrounded;
      cur = std::move(it->second);
      res.plan.push_back(std::move(a));
    }
    ok = ok && goal_satisfied(p, cur);
    cache.record(key, ok);
    if (ok) {
      res.status = SearchStatus::Solved;
      res.cost = res.plan.size();
      res.visited = res.plan.size() + 1;
      return res;
    }
  }
  SearchResult res = solve(p, budget);
  if (res.status == SearchStatus::Solved) {
    std::map<std::string, std::size_t> pos_of;
    for (std::size_t k = 0; k < id_at.size(); ++k) pos_of[id_at[k]] = k;
    SolutionCache::Entry e;
    for (const auto& a : res.plan) {
      SolutionCache::Step step{a.production, {}, {}};
      for (const auto& arg : a.args) {
        auto it = pos_of.find(arg);
        step.positions.push_back(it == pos_of.end() ? std::numeric_limits<std::size_t>::max() : it->second);
        step.literal.push_back(it == pos_of.end() ? arg : std::string());
      }
      e.skeleton.push_back(std::move(step));
    }
    if (auto old = cache.lookup(key)) {
      e.uses = old->uses;
      e.successes = old->successes;
    }
    ++e.uses;
    ++e.successes;
    cache.store(key, std::move(e));
  }
  return res;
}

Structure block_world(const std::vector<Block>& blocks, const std::vector<std::pair<std::string, std::string>>& on) {
  Structure s(true);
  s.add_part("table", "table");
  for (const auto& b : blocks) {
    if (b.length <= 0) throw ValidationError("block '" + b.id + "' needs a positive length");
    s.add_part(b.id, b.colour, {{"length", b.length}});
  }
  std::set<std::string> placed;
  for (const auto& [top, below] : on) {
    if (!placed.insert(top).second) throw ValidationError("block '" + top + "' rests on two supports");
    s.add_relation(top, below, "on");
  }
  if (placed.size() != blocks.size()) throw ValidationError("every block needs exactly one support");
  require_valid(s);
  return s;
}

Production move_block_production() {
  Transform t = [](const State& st) {
    std::vector<std::pair<Action, State>> out;
    if (!st.structure) return out;
    const Structure& s = *st.structure;
    const auto table = s.index_of("table");
    std::vector<char> clear(s.size(), 1);
    std::vector<std::size_t> support_rel(s.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t r = 0; r < s.relations().size(); ++r) {
      const auto& rel = s.relations()[r];
      if (rel.label != "on") continue;
      clear[rel.to] = 0;
      support_rel[rel.from] = r;
    }
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (table && b == *table) continue;
      if (!clear[b] || support_rel[b] == std::numeric_limits<std::size_t>::max()) continue;
      const std::size_t under = s.relations()[support_rel[b]].to;
      for (std::size_t d = 0; d < s.size(); ++d) {
        if (d == b || d == under) continue;
        if (!(table && d == *table) && !clear[d]) continue;
        Structure next = s;
        next.remove_relation(support_rel[b]);
        next.add_relation(b, d, "on");
        out.push_back({Action{"move", {s.part(b).id, s.part(d).id}}, State{st.facts, std::move(next)}});
      }
    }
    return out;
  };
  return Production{"move", std::nullopt, std::move(t)};
}

Subject on_subject(const std::string& id, const std::string& top, const std::string& below) {
  Structure pattern(true);
  pattern.add_part("x", top);
  pattern.add_part("y", below);
  pattern.add_relation(std::size_t{0}, std::size_t{1}, "on");
  MorphismMask mask;
  mask.drop_attrs.insert("length");
  Subject s;
  s.id = id;
  s.recognizer = TemplateRecognizer{std::move(pattern), std::move(mask)};
  return s;
}

ProblemSpec random_production_system(std::uint64_t seed, std::size_t atoms, std::size_t productions) {
  if (atoms == 0 || atoms > 13) throw PreconditionError("random production systems use 1..13 atoms");
  if (productions == 0) throw PreconditionError("a problem needs at least one production");
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto atom = [](std::size_t i) { return "a" + std::to_string(i); };
  auto distinct = [&](std::size_t count) {
    std::vector<std::size_t> all(atoms);
    for (std::size_t i = 0; i < atoms; ++i) all[i] = i;
    for (std::size_t i = 0; i < count && i < atoms; ++i) std::swap(all[i], all[i + pick(atoms - i)]);
    all.resize(std::min(count, atoms));
    return all;
  };
  auto situation = [&](std::size_t max_members) {
    MicroSituation ms;
    for (auto i : distinct(1 + pick(max_members))) ms.members.push_back({atom(i), rng() % 3 != 0, 0.5, 0, 0});
    return ms;
  };
  ProblemSpec p;
  for (std::size_t i = 0; i < atoms; ++i) {
    p.vocabulary.insert(atom(i));
    if (rng() % 3 == 0) p.start.facts.insert(atom(i));
  }
  for (std::size_t r = 0; r < productions; ++r) {
    FactEffect fe;
    const auto touched = distinct(1 + pick(3));
    for (std::size_t k = 0; k < touched.size(); ++k) {
      (k == 0 || rng() % 2 ? fe.add : fe.remove).insert(atom(touched[k]));
    }
    p.productions.push_back({"r" + std::to_string(r), situation(2), std::move(fe)});
  }
  p.goal = situation(3);
  return p;
}

std::function<double(const State&)> builtin_heuristic(const ProblemSpec& p, const std::string& name) {
  if (name == "none") return {};
  if (name != "goal-count") throw PreconditionError("unknown heuristic '" + name + "'");
  auto spec = std::make_shared<ProblemSpec>(p);
  spec->heuristic = {};
  return [spec](const State& s) {
    const auto rec = recognitions(*spec, s);
    double unmet = 0;
    for (const auto& m : spec->goal.members) {
      if (situation_score(MicroSituation{{m}}, rec) < spec->threshold) unmet += 1;
    }
    return unmet;
  };
}

}  // namespace sc
