#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sc/canonical.hpp"
#include "sc/error.hpp"

using namespace sc;

namespace {

Structure cycle(std::size_t n, const std::vector<std::string>& types) {
  Structure s;
  for (std::size_t i = 0; i < n; ++i) s.add_part("c" + std::to_string(i), types[i % types.size()]);
  for (std::size_t i = 0; i < n; ++i) s.add_relation(i, (i + 1) % n, "e");
  return s;
}

Structure path(std::size_t n, const std::string& prefix = "p") {
  Structure s;
  for (std::size_t i = 0; i < n; ++i) s.add_part(prefix + std::to_string(i), "t");
  for (std::size_t i = 0; i + 1 < n; ++i) s.add_relation(i, i + 1, "e");
  return s;
}

// Witness check: the bijection really maps a onto b.
bool witness_ok(const Structure& a, const Structure& b, const std::vector<std::size_t>& w) {
  if (w.size() != a.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (content_key(a.part(i)) != content_key(b.part(w[i]))) return false;
  }
  std::vector<std::size_t> id(b.size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  return oracle::mapped_relations(a, w) == oracle::mapped_relations(b, id);
}

}  // namespace

TEST_CASE("paths relabelled are isomorphic, cycle vs path is not") {
  const auto r = isomorphic(path(3, "a"), path(3, "x"));
  CHECK(r.isomorphic);
  CHECK(witness_ok(path(3, "a"), path(3, "x"), r.witness));
  Structure p = path(3);
  p.add_relation(std::size_t{0}, std::size_t{2}, "x");
  CHECK_FALSE(isomorphic(cycle(3, {"t"}), path(3)));
  CHECK_THROWS_AS(isomorphic(Structure{}, path(2)), ValidationError);
}

TEST_CASE("isomorphism agrees with the all-permutations oracle") {
  std::mt19937_64 rng(7);
  int iso_pairs = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    const int types = 1 + static_cast<int>(rng() % 3);
    const int labels = 1 + static_cast<int>(rng() % 2);
    const bool oriented = rng() % 4 == 0;
    auto a = oracle::random_structure(rng, n, types, labels, 0.4, oriented);
    // Half the time compare against a shuffled copy, otherwise a fresh graph
    // with the same size.
    auto b = trial % 2 ? oracle::permuted(a, rng) : oracle::random_structure(rng, n, types, labels, 0.4, oriented);
    const bool expected = oracle::isomorphic(a, b);
    const auto got = isomorphic(a, b);
    REQUIRE(got.isomorphic == expected);
    if (expected) {
      ++iso_pairs;
      CHECK(witness_ok(a, b, got.witness));
      CHECK(canonical_form(a).text == canonical_form(b).text);
    }
  }
  CHECK(iso_pairs >= 150);
}

TEST_CASE("isomorphism is an equivalence on a random population") {
  std::mt19937_64 rng(11);
  std::vector<Structure> pop;
  for (int i = 0; i < 60; ++i) {
    auto s = oracle::random_structure(rng, 4, 2, 1, 0.5);
    pop.push_back(s);
    pop.push_back(oracle::permuted(s, rng));
  }
  for (const auto& a : pop) CHECK(isomorphic(a, a));
  for (std::size_t i = 0; i < pop.size(); i += 7) {
    for (std::size_t j = 0; j < pop.size(); j += 5) {
      CHECK(bool(isomorphic(pop[i], pop[j])) == bool(isomorphic(pop[j], pop[i])));
      for (std::size_t k = 0; k < pop.size(); k += 11) {
        if (isomorphic(pop[i], pop[j]) && isomorphic(pop[j], pop[k])) CHECK(isomorphic(pop[i], pop[k]));
      }
    }
  }
}

TEST_CASE("attributes take part in isomorphism") {
  Structure a = path(2), b = path(2);
  a.set_content(0, "t", {{"len", 2}});
  b.set_content(0, "t", {{"len", 3}});
  CHECK_FALSE(isomorphic(a, b));
  b.set_content(0, "t", {{"len", 2}});
  CHECK(isomorphic(a, b));
}

TEST_CASE("internal classes") {
  CHECK(internal_class_count(cycle(5, {"t"})) == 1);
  const auto tri = cycle(3, {"red", "red", "blue"});
  const auto cls = internal_classes(tri);
  REQUIRE(cls.size() == 2);
  CHECK(cls[0] == std::vector<std::size_t>{0, 1});
  CHECK(cls[1] == std::vector<std::size_t>{2});
  // Two identical bricks on a base plate.
  Structure model;
  model.add_part("plate", "plate");
  model.add_part("b1", "brick");
  model.add_part("b2", "brick");
  model.add_relation("b1", "plate", "on");
  model.add_relation("b2", "plate", "on");
  CHECK(internal_class_count(model) == 2);
}

TEST_CASE("internal classes match the content exchange test exhaustively") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    auto s = oracle::random_structure(rng, n, 2, 2, 0.45);
    const auto cls = internal_classes(s);
    std::vector<std::size_t> class_of(n);
    for (std::size_t c = 0; c < cls.size(); ++c) {
      for (auto p : cls[c]) class_of[p] = c;
    }
    CHECK(cls.size() <= n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // Exchange the contents of parts i and j, relations stay in place.
        Structure t = s;
        t.set_content(i, s.part(j).type, s.part(j).attrs);
        t.set_content(j, s.part(i).type, s.part(i).attrs);
        CHECK(t.identical(s) == (class_of[i] == class_of[j]));
        if (class_of[i] == class_of[j]) CHECK(isomorphic(t, s));
      }
    }
    CHECK(internal_class_count(oracle::permuted(s, rng)) == cls.size());
  }
}

TEST_CASE("a cross-class exchange can still be isomorphic") {
  // red - blue: exchanging the two contents mirrors the path.
  Structure s;
  s.add_part("a", "red");
  s.add_part("b", "blue");
  s.add_relation("a", "b", "e");
  Structure t = s;
  t.set_content(0, "blue", {});
  t.set_content(1, "red", {});
  CHECK(internal_class_count(s) == 2);
  CHECK(isomorphic(s, t));
}

TEST_CASE("swap indistinguishability looks at payloads") {
  TypeCatalog cat;
  cat.add_atomic("oak");
  cat.add_atomic("pine");
  Structure a = path(2), b = path(2, "q");
  a.set_payload(0, "oak");
  a.set_payload(1, "oak");
  b.set_payload(0, "oak");
  b.set_payload(1, "oak");
  CHECK(swap_indistinguishable(a, a, &cat));
  CHECK(swap_indistinguishable(a, b, &cat));
  b.set_payload(1, "pine");
  CHECK(isomorphic(a, b));  // shells match
  CHECK_FALSE(swap_indistinguishable(a, b, &cat));
  Structure c = path(3);
  CHECK_THROWS_AS(swap_indistinguishable(a, c, &cat), PreconditionError);
}

TEST_CASE("canonical form is deterministic and relabel invariant") {
  std::mt19937_64 rng(5);
  auto s = oracle::random_structure(rng, 8, 3, 2, 0.3);
  const auto c1 = canonical_form(s);
  CHECK(canonical_form(s).text == c1.text);
  for (int i = 0; i < 10; ++i) CHECK(canonical_form(oracle::permuted(s, rng)).text == c1.text);
  CHECK(fnv1a("") == 14695981039346656037ull);
}
