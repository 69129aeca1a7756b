#include <doctest.h>

#include <memory>
#include <random>

#include "oracles.hpp"
#include "sc/canonical.hpp"
#include "sc/derivation.hpp"
#include "sc/error.hpp"
#include "sc/properties.hpp"
#include "sc/raster.hpp"
#include "sc/strokes.hpp"

using namespace sc;

namespace {

std::shared_ptr<const Structure> typed_path(const std::string& types) {
  auto s = std::make_shared<Structure>();
  for (std::size_t i = 0; i < types.size(); ++i) s->add_part("p" + std::to_string(i), std::string(1, types[i]));
  for (std::size_t i = 0; i + 1 < types.size(); ++i) s->add_relation(i, i + 1, "e");
  return s;
}

// Run-length split on type changes.
std::vector<std::vector<std::size_t>> runs(const std::string& types) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (i == 0 || types[i] != types[i - 1]) out.emplace_back();
    out.back().push_back(i);
  }
  return out;
}

Raster square_raster() {
  Raster r(24, 24);
  draw_polygon(r, {{4, 4}, {19, 4}, {19, 19}, {4, 19}});
  return r;
}

}  // namespace

TEST_CASE("portions") {
  auto s = typed_path("AAAA");
  const auto all = portion(s, std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(isomorphic(all.induced, *s));
  const auto mid = portion(s, std::vector<std::string>{"p2", "p1"});
  CHECK(mid.members == std::vector<std::size_t>{1, 2});
  CHECK(mid.induced.relations().size() == 1);
  CHECK_THROWS_AS(portion(s, std::vector<std::size_t>{0, 3}), PreconditionError);
  CHECK(portion(s, std::vector<std::size_t>{0, 3}, true).induced.size() == 2);
  CHECK_THROWS(portion(s, std::vector<std::size_t>{}));
  CHECK_THROWS(portion(s, std::vector<std::size_t>{9}));
}

TEST_CASE("one side of a polygon raster is a valid portion") {
  const auto r = square_raster();
  const auto base = std::make_shared<const Structure>(raster_base_structure(r));
  std::vector<std::string> side;
  for (int x = 4; x <= 19; ++x) side.push_back(pixel_id(x, 4));
  const auto p = portion(base, side);
  CHECK(p.induced.size() == 16);
  CHECK(p.induced.connected());
}

TEST_CASE("partitions must cover and be disjoint") {
  auto s = typed_path("AABB");
  CHECK_NOTHROW(make_partition(s, {{0, 1}, {2, 3}}));
  CHECK_THROWS_AS(make_partition(s, {{0, 1}, {1, 2, 3}}), PreconditionError);
  CHECK_THROWS_AS(make_partition(s, {{0, 1}, {2}}), PreconditionError);
  const auto k = make_partition(s, {{0, 1}, {2, 3}});
  CHECK(k.block_of() == std::vector<std::size_t>{0, 0, 1, 1});
}

TEST_CASE("quotient summarises crossing relations") {
  auto s = typed_path("AABB");
  const auto q = quotient(make_partition(s, {{0, 1}, {2, 3}}));
  REQUIRE(q.size() == 2);
  REQUIRE(q.relations().size() == 1);
  CHECK(q.relations()[0].attrs.at("count") == 1);
  CHECK(q.relations()[0].attrs.at("n.e") == 1);
  CHECK(q.part(0).type != q.part(1).type);
  // Blocks with isomorphic content share the type.
  auto t = typed_path("AAAA");
  const auto qt = quotient(make_partition(t, {{0, 1}, {2, 3}}));
  CHECK(qt.part(0).type == qt.part(1).type);
  // A single block.
  CHECK(quotient(make_partition(s, {{0, 1, 2, 3}})).size() == 1);
}

TEST_CASE("quotient types can be interned in a catalog") {
  auto t = typed_path("AAAA");
  TypeCatalog cat;
  const auto q = quotient(make_partition(t, {{0, 1}, {2, 3}}), &cat);
  CHECK(cat.resolves(q.part(0).type));
  CHECK(cat.size() == 1);
}

TEST_CASE("square raster stroke quotient: two classes of strokes in a 4-cycle") {
  const auto r = square_raster();
  const auto st = extract_strokes(r);
  REQUIRE(st.chains.size() == 4);
  const auto q = quotient(stroke_partition(r, st));
  CHECK(q.size() == 4);
  CHECK(internal_class_count(q) == 2);
  Structure c4;
  for (int i = 0; i < 4; ++i) c4.add_part("c" + std::to_string(i), "x");
  for (std::size_t i = 0; i < 4; ++i) c4.add_relation(i, (i + 1) % 4, "r");
  // Same graph shape once contents and relation attributes are ignored.
  MorphismMask m;
  for (const auto& p : q.parts()) m.merge_types[p.type] = "x";
  m.drop_attrs = {"count", "n"};
  for (const auto& rel : q.relations()) m.merge_labels[rel.label] = "r";
  CHECK(isomorphic(apply_morphism(q, m), c4));
}

TEST_CASE("hexagon raster split into strokes gives a 6-cycle quotient") {
  const int w = 60;
  Raster r(w, w);
  draw_polygon(r, polygon_from_turns({1, 1, 1, 1, 1, 1}, {60, 60, 60, 60, 60, 60}, 0, 19, w, w));
  const auto st = extract_strokes(r);
  REQUIRE(st.chains.size() == 6);
  const auto q = quotient(stroke_partition(r, st));
  CHECK(q.size() == 6);
  CHECK(q.relations().size() == 6);
  for (const auto& inc : q.incidence()) CHECK(inc.size() == 2);
  CHECK(q.connected());
}

TEST_CASE("quotient functoriality on random structures") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = std::make_shared<const Structure>(oracle::random_structure(rng, 2 + rng() % 7, 2, 2));
    // Random partition of a.
    const std::size_t blocks = 1 + rng() % a->size();
    std::vector<std::vector<std::size_t>> k(blocks);
    for (std::size_t i = 0; i < a->size(); ++i) k[i < blocks ? i : rng() % blocks].push_back(i);
    for (auto& b : k) std::sort(b.begin(), b.end());
    auto b = std::make_shared<const Structure>(oracle::permuted(*a, rng));
    const auto w = isomorphic(*a, *b).witness;
    std::vector<std::vector<std::size_t>> kb;
    for (const auto& blk : k) {
      kb.emplace_back();
      for (auto i : blk) kb.back().push_back(w[i]);
      std::sort(kb.back().begin(), kb.back().end());
    }
    const auto qa = quotient(make_partition(a, k));
    const auto qb = quotient(make_partition(b, kb));
    CHECK(isomorphic_unchecked(qa, qb));
  }
}

TEST_CASE("morphism masks") {
  Structure s;
  s.add_part("a", "red", {{"length", 3}, {"angle.dir", 2}});
  s.add_part("b", "blue", {{"length", 4}, {"angle.dir", 2}});
  s.add_relation("a", "b", "touch", {{"angle.joint", 2}});
  CHECK(isomorphic(apply_morphism(s, {}), s));
  MorphismMask drop;
  drop.drop_attrs = {"angle"};
  const auto d = apply_morphism(s, drop);
  CHECK(d.part(0).attrs == AttrMap{{"length", 3}});
  CHECK(d.relations()[0].attrs.empty());
  MorphismMask merge;
  merge.merge_types = {{"red", "colour"}, {"blue", "colour"}};
  const auto m = apply_morphism(s, merge);
  CHECK(m.part(0).type == "colour");
  CHECK(m.part(1).type == "colour");
  CHECK(internal_class_count(apply_morphism(m, MorphismMask{{"length"}, {}, {}, {}, {}})) == 1);
  MorphismMask bogus;
  bogus.drop_attrs = {"weight"};
  CHECK_THROWS_AS(apply_morphism(s, bogus), ValidationError);
}

TEST_CASE("merged relations keep the per-attribute minimum") {
  Structure s;
  s.add_part("a", "t");
  s.add_part("b", "t");
  s.add_relation("a", "b", "x", {{"w", 5}});
  s.add_relation("a", "b", "y", {{"w", 2}});
  MorphismMask m;
  m.merge_labels = {{"x", "r"}, {"y", "r"}};
  const auto out = apply_morphism(s, m);
  REQUIRE(out.relations().size() == 1);
  CHECK(out.relations()[0].attrs.at("w") == 2);
}

TEST_CASE("morphisms never split isomorphism classes and compose") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = oracle::random_structure(rng, 2 + rng() % 6, 3, 2);
    auto b = trial % 2 ? oracle::permuted(a, rng) : oracle::random_structure(rng, a.size(), 3, 2);
    MorphismMask m1, m2;
    m1.merge_types = {{"t0", "t1"}};
    m2.merge_labels = {{"l1", "l0"}};
    m2.merge_types = {{"t2", "t1"}};
    const auto ma = apply_morphism(a, m1), mb = apply_morphism(b, m1);
    if (isomorphic(a, b)) CHECK(isomorphic_unchecked(ma, mb));
    CHECK(internal_class_count(ma) <= internal_class_count(a));
    CHECK(isomorphic_unchecked(apply_morphism(ma, m2), apply_morphism(a, m1.then(m2))));
  }
}

TEST_CASE("equilateral and right triangle quotients coincide without lengths and angles") {
  auto tri = [](std::vector<double> sides, std::vector<double> turns) {
    Raster r(56, 56);
    draw_polygon(r, polygon_from_turns(sides, turns, 0, 19, 56, 56));
    return polygon_quotient(r).quotient;
  };
  const auto eq = tri({1, 1, 1}, {120, 120, 120});
  const auto right = tri({1, std::sqrt(3.0), 2}, {90, 150, 120});
  CHECK_FALSE(isomorphic(eq, right));
  MorphismMask m;
  m.drop_attrs = {"length", "angle"};
  CHECK(isomorphic(apply_morphism(eq, m), apply_morphism(right, m)));
}

TEST_CASE("canonical partitions") {
  auto uniform = typed_path("AAAAA");
  const auto u = canonical_partitions(uniform);
  REQUIRE_FALSE(u.empty());
  CHECK(u[0].blocks.size() == 1);
  for (const std::string types : {"AAABBB", "ABBA", "AABAAB", "A"}) {
    const auto ps = canonical_partitions(typed_path(types));
    REQUIRE_FALSE(ps.empty());
    std::vector<std::vector<std::size_t>> got;
    for (const auto& b : ps[0].blocks) got.push_back(b.members);
    CHECK(got == runs(types));
  }
}

TEST_CASE("canonical partitions split a raster into figure and background") {
  Raster r(12, 12);
  draw_polygon(r, {{2, 2}, {9, 2}, {9, 9}, {2, 9}});
  const auto ps = canonical_partitions(std::make_shared<const Structure>(raster_base_structure(r)));
  REQUIRE_FALSE(ps.empty());
  CHECK(ps[0].blocks.size() == 3);  // outside, outline, inside
}

TEST_CASE("lineage") {
  LineageStore store;
  auto s = typed_path("AABB");
  const auto base = store.add_base(*s);
  const auto q = quotient(make_partition(s, {{0, 1}, {2, 3}}));
  const auto qi = store.add(DerivationKind::Quotient, {base}, "block p0 p1; block p2 p3", q);
  MorphismMask m;
  m.merge_types = {{q.part(0).type, "x"}, {q.part(1).type, "x"}};
  const auto mq = apply_morphism(q, m);
  store.add(DerivationKind::Morphism, {qi}, "merge", mq);
  auto path1 = store.derives_from(q, *s);
  REQUIRE(path1);
  CHECK(path1->size() == 2);
  auto path2 = store.derives_from(mq, *s);
  REQUIRE(path2);
  CHECK(path2->size() == 3);
  CHECK(path2->front() == base);
  const auto other = store.add_base(*typed_path("ABAB"));
  (void)other;
  CHECK_FALSE(store.derives_from(*typed_path("ABAB"), *s));
  CHECK_THROWS(store.derives_from(*typed_path("BBBB"), *s));
  CHECK_THROWS(store.add(DerivationKind::Other, {99}, "", q));
}
