// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Usage: acceptance <path to structcalc CLI>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <unistd.h>

#include "oracles.hpp"
#include "sc/arithmetic.hpp"
#include "sc/canonical.hpp"
#include "sc/corpus.hpp"
#include "sc/mining.hpp"
#include "sc/nand.hpp"
#include "sc/raster.hpp"
#include "sc/solver.hpp"
#include "sc/struct_io.hpp"

using namespace sc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome iso_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  // 250 random graphs, each followed by a shuffled copy.
  std::vector<Structure> graphs;
  for (int i = 0; i < 250; ++i) {
    const std::size_t n = 1 + rng() % 8;
    const int types = 1 + static_cast<int>(rng() % 3), labels = 1 + static_cast<int>(rng() % 2);
    graphs.push_back(oracle::random_structure(rng, n, types, labels, 0.4));
    graphs.push_back(oracle::permuted(graphs.back(), rng));
  }
  // 100 graphs against their copies, 100 against the next random graph.
  std::size_t agree = 0, iso = 0, pairs = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    const auto& a = graphs[2 * k];
    const auto& b = k % 2 ? graphs[2 * k + 1] : graphs[2 * k + 2];
    const bool expected = oracle::isomorphic(a, b);
    iso += expected;
    agree += isomorphic(a, b).isomorphic == expected;
    ++pairs;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream d;
  d << agree << "/" << pairs << " pairs agree (" << iso << " isomorphic), " << secs << " s (limit 10 s)";
  return {agree == pairs && secs < 10.0, d.str()};
}

Outcome triangles() {
  const auto eq = load_raster(write_pbm(draw_figure("eq-triangle", 0, 19))).base;
  const auto right = load_raster(write_pbm(draw_figure("right-triangle", 0, 19))).base;
  const bool base_iso = isomorphic(eq, right).isomorphic;
  const auto qe = polygon_quotient(*raster_from_base(eq)).quotient;
  const auto qr = polygon_quotient(*raster_from_base(right)).quotient;
  const bool quot_iso = isomorphic(qe, qr).isomorphic;
  MorphismMask m;
  m.drop_attrs = {"length", "angle"};
  const bool masked_iso = isomorphic(apply_morphism(qe, m), apply_morphism(qr, m)).isomorphic;
  std::ostringstream d;
  d << "base " << base_iso << ", stroke quotient " << quot_iso << ", without length+angle " << masked_iso
    << " (want 0, 0, 1)";
  return {!base_iso && !quot_iso && masked_iso, d.str()};
}

Outcome corpus() {
  const auto items = polygon_corpus(42);
  const auto results = analyze_corpus(items, Config{});
  std::size_t correct = 0;
  std::map<std::string, std::set<std::string>> keys;  // figure instance -> scale-free keys
  for (std::size_t i = 0; i < items.size(); ++i) {
    correct += results[i].fired == expected_signatures(items[i]);
    keys[items[i].name.substr(0, items[i].name.rfind("-s"))].insert(results[i].scale_free_key);
  }
  std::size_t consistent = 0;
  for (const auto& [k, v] : keys) consistent += v.size() == 1;
  std::ostringstream d;
  d << correct << "/" << items.size() << " correct, " << consistent << "/" << keys.size()
    << " figures scale-consistent";
  return {items.size() == 60 && correct == 60 && consistent == keys.size(), d.str()};
}

Outcome arithmetic() {
  std::mt19937_64 rng(4);
  std::size_t ok = 0;
  for (int i = 0; i < 100; ++i) {
    const auto a = oracle::random_structure(rng, 1 + rng() % 7, 3, 2, 0.5);
    const auto b = oracle::random_structure(rng, 1 + rng() % 7, 3, 2, 0.5);
    const auto c = compose(a, b, {{a.part(0).id, b.part(0).id, "glue", {}}});
    ok += morphism_number(c) == morphism_number(a) + morphism_number(b) &&
          morphism_number(convolution(a, b)) == morphism_number(a) * morphism_number(b);
  }
  return {ok == 100, std::to_string(ok) + "/100 pairs satisfy both identities"};
}

Outcome nand() {
  std::size_t ok = 0;
  for (std::uint64_t bits = 0; bits < 256; ++bits) {
    const auto table = truth_table(3, bits);
    const auto net = compile_to_nand(table);
    bool all = true;
    for (std::size_t row = 0; row < 8; ++row) {
      all = all && evaluate(net, {bool(row & 1), bool(row & 2), bool(row & 4)})[0] == table.rows[row];
    }
    ok += all;
  }
  return {ok == 256, std::to_string(ok) + "/256 functions match"};
}

Outcome mining() {
  MiningConfig cfg;
  const auto rules = mine_rules(planted_log(42, 1000, 0.8, cfg.window), cfg);
  double p = -1;
  for (const auto& r : rules) {
    if (r.name == "A => X") p = r.p;
  }
  const auto control = mine_rules(independent_log(42, 8, 2000, 0.05), cfg);
  std::size_t spurious = 0;
  for (const auto& r : control) spurious += r.p >= 0.7 && r.support >= 30;
  std::ostringstream d;
  d << "planted p = " << p << " (|p - 0.8| <= 0.05), control rules above 0.7 at support >= 30: " << spurious;
  return {std::abs(p - 0.8) <= 0.05 && spurious == 0, d.str()};
}

Outcome negative() {
  MiningConfig cfg;
  const auto rules = mine_rules(drought_log(7, 120, cfg.neg_window, cfg.window, 0.9), cfg);
  const AssociativeRule* r = nullptr;
  for (const auto& x : rules) {
    if (x.name == "!W => D") r = &x;
  }
  if (!r) return {false, "rule !W => D not mined"};
  std::size_t firings = 0, hits = 0;
  for (std::uint64_t seed : {100, 101, 102}) {
    for (const auto& v : validate_rule(*r, 0, drought_log(seed, 60, cfg.neg_window, cfg.window, 0.9), cfg.min_score)) {
      ++firings;
      hits += v.hit;
    }
  }
  const double p = laplace(hits, firings);
  std::ostringstream d;
  d << "mined p = " << r->p << ", held-out " << hits << "/" << firings << " hits, smoothed " << p << " (>= "
    << cfg.validation_threshold << ")";
  return {p >= cfg.validation_threshold && firings >= 150, d.str()};
}

// Reachable fact states and BFS distance to the goal (-1 if none).
std::pair<std::size_t, int> bfs(const ProblemSpec& p) {
  auto rec = [](const std::set<std::string>& facts) {
    RecognitionSet r;
    for (const auto& f : facts) r[f] = 1.0;
    return r;
  };
  std::map<std::set<std::string>, int> dist{{p.start.facts, 0}};
  std::deque<std::set<std::string>> queue{p.start.facts};
  int goal = -1;
  while (!queue.empty()) {
    const auto cur = queue.front();
    queue.pop_front();
    const auto r = rec(cur);
    if (goal < 0 && situation_score(p.goal, r) >= p.threshold) goal = dist[cur];
    for (const auto& prod : p.productions) {
      if (prod.guard && situation_score(*prod.guard, r) < p.threshold) continue;
      const auto& fe = std::get<FactEffect>(prod.effect);
      auto next = cur;
      for (const auto& f : fe.remove) next.erase(f);
      next.insert(fe.add.begin(), fe.add.end());
      if (dist.emplace(next, dist[cur] + 1).second) queue.push_back(next);
    }
  }
  return {dist.size(), goal};
}

Outcome solver() {
  std::size_t systems = 0, optimal = 0, solvable = 0, max_states = 0;
  for (std::uint64_t seed = 0; systems < 50; ++seed) {
    const auto p = random_production_system(seed, 10 + seed % 4, 12 + seed % 8);
    const auto [states, goal] = bfs(p);
    if (states > 10000) continue;
    ++systems;
    max_states = std::max(max_states, states);
    const auto r = solve(p, 1000000);
    if (goal < 0) {
      optimal += r.status == SearchStatus::Unsolvable;
      continue;
    }
    ++solvable;
    const auto path = replay(p, r.plan);
    optimal += r.status == SearchStatus::Solved && r.plan.size() == static_cast<std::size_t>(goal) && path &&
               goal_satisfied(p, path->back());
  }
  std::ostringstream d;
  d << optimal << "/" << systems << " systems correct (" << solvable << " solvable, up to " << max_states
    << " reachable states)";
  return {optimal == systems, d.str()};
}

Outcome cache() {
  auto problem = [](const std::vector<Block>& bs, const std::vector<std::pair<std::string, std::string>>& on) {
    ProblemSpec p;
    p.start.structure = block_world(bs, on);
    p.productions = {move_block_production()};
    p.subjects = {on_subject("red-on-blue", "red", "blue"), on_subject("blue-on-green", "blue", "green")};
    MicroSituation goal;
    goal.members = {{"red-on-blue", true, 0.5, 0, 0}, {"blue-on-green", true, 0.5, 0, 0}};
    p.goal = goal;
    p.abstraction.drop_attrs = {"length"};
    return p;
  };
  SolutionCache c;
  const auto first = solve_with_cache(
      problem({{"b1", "red", 2}, {"b2", "blue", 3}, {"b3", "green", 1}}, {{"b1", "table"}, {"b2", "b1"}, {"b3", "b2"}}),
      c, 100000);
  const auto twin_p =
      problem({{"x", "red", 6}, {"y", "blue", 9}, {"z", "green", 3}}, {{"x", "table"}, {"y", "x"}, {"z", "y"}});
  const auto twin = solve_with_cache(twin_p, c, 100000);
  const auto path = replay(twin_p, twin.plan);
  const bool valid = twin.status == SearchStatus::Solved && path && goal_satisfied(twin_p, path->back());
  std::ostringstream d;
  d << "first solve expanded " << first.expanded << "; twin replayed " << twin.replayed << ", expanded "
    << twin.expanded << ", re-grounded " << twin.regrounded << ", plan valid " << valid;
  return {first.status == SearchStatus::Solved && twin.replayed && twin.expanded == 0 && valid, d.str()};
}

Outcome determinism(const std::string& cli) {
  const fs::path base = fs::temp_directory_path() / ("sc_acceptance_" + std::to_string(::getpid()));
  std::string reports[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = base / std::to_string(run);
    fs::create_directories(out);
    const std::string cmd = "\"" + cli + "\" --seed 42 --out \"" + out.string() + "\" demo-polygons > /dev/null";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return {false, "cannot run " + cli};
    try {
      reports[run] = read_file((out / "report.json").string());
    } catch (const std::exception& e) {
      fs::remove_all(base);
      return {false, e.what()};
    }
  }
  fs::remove_all(base);
  const bool same = !reports[0].empty() && reports[0] == reports[1];
  return {same, same ? "two runs, " + std::to_string(reports[0].size()) + " identical bytes" : "reports differ"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <structcalc>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"isomorphism matches the all-permutations oracle", iso_oracle},
      {"triangle rasters coincide only without length and angle", triangles},
      {"polygon corpus signatures", corpus},
      {"morphism number homomorphisms", arithmetic},
      {"NAND reduction of all 3-input functions", nand},
      {"planted rule recovery and control log", mining},
      {"absence rule mined and validated", negative},
      {"zero-heuristic solver optimality", solver},
      {"solution cache replay on a scaled twin", cache},
      {"demo-polygons determinism", [&] { return determinism(cli); }}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << "  ["
              << o.detail << "]\n";
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << "\n";
  return failed ? 1 : 0;
}
