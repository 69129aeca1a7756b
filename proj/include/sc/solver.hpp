#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "sc/derivation.hpp"
#include "sc/rules.hpp"
#include "sc/schema.hpp"
#include "sc/structure.hpp"

namespace sc {

// A problem state: asserted facts and/or a structure.
struct State {
  std::set<std::string> facts;
  std::optional<Structure> structure;
};

// A grounded production: name plus the part ids it was applied to.
struct Action {
  std::string production;
  std::vector<std::string> args;

  std::string text() const;  // "move(b1,table)" or just the name
  bool operator==(const Action&) const = default;
};

struct FactEffect {
  std::set<std::string> add;
  std::set<std::string> remove;
};

// Runs a schema on the state's structure.
struct SchemaEffect {
  SchemaLibrary library;
  std::string entry;
  std::uint64_t fuel = 1000000;
};

// Enumerates groundings of the production and their successors.
using Transform = std::function<std::vector<std::pair<Action, State>>(const State&)>;

struct Production {
  std::string name;
  std::optional<MicroSituation> guard;  // over the state's recognitions
  std::variant<FactEffect, SchemaEffect, Transform> effect;
};

struct ProblemSpec {
  State start;
  MicroSituation goal;
  std::vector<Production> productions;
  // Subjects recognised on the state structure, in addition to the facts.
  std::vector<Subject> subjects;
  // Fact names a goal may mention. Empty: every fact named by the start or
  // by a production.
  std::set<std::string> vocabulary;
  std::vector<MicroSituation> undesired;
  bool avoid_undesired = true;
  double threshold = 0.5;  // situation score that counts as holding
  // State -> non-negative estimate of remaining cost. Empty: zero.
  std::function<double(const State&)> heuristic;
  std::string heuristic_name = "none";
  // Abstraction applied to the start structure for cache keys.
  MorphismMask abstraction;
};

// Subject id -> score for a state: facts at 1 plus every subject recogniser.
RecognitionSet recognitions(const ProblemSpec& p, const State& s);
// Throws ValidationError when the goal names a subject nobody can recognise.
bool goal_satisfied(const ProblemSpec& p, const State& s);
bool goal_satisfied(const ProblemSpec& p, const State& s, const MicroSituation& goal);
bool undesired(const ProblemSpec& p, const State& s);

// Isomorphism-class key: facts plus the canonical text of the structure.
std::string state_key(const State& s);

struct Expansion {
  std::vector<std::pair<Action, State>> successors;
  std::vector<std::string> errors;  // productions whose effect failed
};

// Successors, in production order, of every production whose guard holds.
Expansion expand(const ProblemSpec& p, const State& s);

enum class SearchStatus { Solved, Unsolvable, BudgetExhausted };
const char* to_string(SearchStatus s);

struct SearchResult {
  SearchStatus status = SearchStatus::Unsolvable;
  std::vector<Action> plan;  // for BudgetExhausted: toward the best state seen
  std::size_t expanded = 0;
  std::size_t visited = 0;  // distinct states generated
  std::size_t cost = 0;
  bool replayed = false;
  std::size_t regrounded = 0;  // replayed steps matched against guards
};

// Best-first on cost + heuristic with unit action costs, ties in insertion
// order. A zero heuristic gives a minimum-length plan. `budget` caps node
// expansions.
SearchResult solve(const ProblemSpec& p, std::size_t budget);

// States along the plan (start first), or nullopt if some step is not a
// legal grounded action at its state.
std::optional<std::vector<State>> replay(const ProblemSpec& p, const std::vector<Action>& plan);

// Ready-made solutions keyed by the abstracted start and the goal. Plan
// arguments are stored as canonical positions of the abstracted start so a
// twin with different part ids or attribute values can re-ground them.
class SolutionCache {
 public:
  struct Step {
    std::string production;
    std::vector<std::size_t> positions;
    std::vector<std::string> literal;  // args that are not start parts
  };
  struct Entry {
    std::vector<Step> skeleton;
    std::uint64_t uses = 0;
    std::uint64_t successes = 0;
    double p() const;  // Laplace-smoothed success rate
  };

  static std::string key(const ProblemSpec& p);

  std::optional<Entry> lookup(const std::string& key) const;
  void store(const std::string& key, Entry e);
  void record(const std::string& key, bool success);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, Entry> entries_;
};

SearchResult solve_with_cache(const ProblemSpec& p, SolutionCache& cache, std::size_t budget);

// Blocks world: parts "table" and one per block (type = colour, attribute
// "length"), relation "on" from a block to what it rests on.
struct Block {
  std::string id;
  std::string colour;
  int length = 1;
};
Structure block_world(const std::vector<Block>& blocks,
                      const std::vector<std::pair<std::string, std::string>>& on);
// move(b, d): a clear block onto the table or another clear block.
Production move_block_production();
// Recognises "a block of colour `top` directly on `below`" ("table" for the
// table) regardless of length.
Subject on_subject(const std::string& id, const std::string& top, const std::string& below);

// Random fact-based production system over `atoms` facts; guards and
// effects mention 1..3 atoms each.
ProblemSpec random_production_system(std::uint64_t seed, std::size_t atoms, std::size_t productions);

// "none" or "goal-count" (number of unmet goal members).
std::function<double(const State&)> builtin_heuristic(const ProblemSpec& p, const std::string& name);

}  // namespace sc
