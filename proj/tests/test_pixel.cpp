#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "sc/canonical.hpp"
#include "sc/corpus.hpp"
#include "sc/derivation.hpp"
#include "sc/error.hpp"
#include "sc/parallel.hpp"
#include "sc/properties.hpp"
#include "sc/raster.hpp"
#include "sc/strokes.hpp"

using namespace sc;

namespace {

// Union-find connected components, labels renumbered by first pixel.
std::vector<int> ccl_oracle(const Raster& r) {
  const std::size_t n = r.values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * r.width + x;
      if (x + 1 < r.width && r.at(x + 1, y) == r.at(x, y)) parent[find(i)] = find(i + 1);
      if (y + 1 < r.height && r.at(x, y + 1) == r.at(x, y)) parent[find(i)] = find(i + r.width);
    }
  }
  std::map<std::size_t, int> id;
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = id.try_emplace(find(i), static_cast<int>(id.size()));
    out[i] = it->second;
  }
  return out;
}

Raster polygon(const std::vector<double>& sides, const std::vector<double>& turns, double rot, double scale,
               int w, int h) {
  Raster r(w, h);
  draw_polygon(r, polygon_from_turns(sides, turns, rot, scale, w, h));
  return r;
}

const PropertyAssertion* find_whole(const Assertions& as, const std::string& feature) {
  for (const auto& a : as) {
    if (a.target == TargetKind::Whole && a.feature == feature) return &a;
  }
  return nullptr;
}

std::set<std::string> fired(const Assertions& as) {
  std::set<std::string> out;
  for (const auto& s : polygon_signatures()) {
    if (evaluate_signature(s, as).fired) out.insert(s.subject);
  }
  return out;
}

}  // namespace

TEST_CASE("load_raster reads P1 and P2") {
  const auto white = load_raster("P1\n3 3\n0 0 0\n0 0 0\n0 0 0\n");
  CHECK(white.base.size() == 9);
  CHECK(white.base.relations().size() == 12);
  const auto one = load_raster("P1 1 1 1");
  CHECK(one.base.size() == 1);
  CHECK(one.base.part(0).type == "v1");
  const auto grey = load_raster("P2\n# comment\n2 1\n255\n0 255\n", 4);
  CHECK(grey.grid.at(0, 0) == 3);  // darkest bin
  CHECK(grey.grid.at(1, 0) == 0);
  CHECK_THROWS_AS(load_raster("P1\n3 3\n0 0 0\n0 0\n"), ParseError);
  CHECK_THROWS_AS(load_raster("P3\n1 1\n0\n"), ParseError);
  CHECK_THROWS_AS(load_raster("P1\n0 3\n"), ParseError);
  CHECK_THROWS_AS(load_raster("P1\n1 1\n0 1\n"), ParseError);
  CHECK_THROWS_AS(load_raster("P1\n1 1\n2\n"), ParseError);
}

TEST_CASE("PBM round trip and base structure inverse") {
  Raster r(7, 5);
  draw_line(r, {1, 1}, {5, 3});
  const auto back = load_raster(write_pbm(r));
  CHECK(back.grid == r);
  const auto inv = raster_from_base(back.base);
  REQUIRE(inv);
  CHECK(*inv == r);
  Structure other;
  other.add_part("a", "t");
  CHECK_FALSE(raster_from_base(other));
}

TEST_CASE("region labels agree with the union-find oracle") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    Raster r(1 + static_cast<int>(rng() % 32), 1 + static_cast<int>(rng() % 32));
    const int levels = trial % 3 == 0 ? 3 : 2;
    for (auto& v : r.values) v = static_cast<int>(rng() % levels);
    const auto expected = ccl_oracle(r);
    CHECK(region_labels(r, Exec::Serial) == expected);
    CHECK(region_labels(r, Exec::Parallel) == expected);
  }
}

TEST_CASE("segment regions") {
  Raster uniform(5, 4);
  CHECK(segment_regions(load_raster(write_pbm(uniform))).blocks.size() == 1);
  Raster checker(2, 2);
  checker.set(0, 0, 1);
  checker.set(1, 1, 1);
  CHECK(segment_regions(load_raster(write_pbm(checker))).blocks.size() == 4);
  // Outline of a box: outside, ink, inside.
  Raster box(12, 10);
  draw_polygon(box, {{2, 2}, {9, 2}, {9, 7}, {2, 7}});
  const auto k = segment_regions(load_raster(write_pbm(box)));
  CHECK(k.blocks.size() == 3);
  const auto q = quotient(k);
  CHECK(q.size() == 3);
  CHECK(q.relations().size() == 2);
  // A diagonal outline falls apart under edge adjacency.
  const auto tri = polygon({1, 1, 1}, {120, 120, 120}, 0, 19, 50, 50);
  CHECK(segment_regions(load_raster(write_pbm(tri))).blocks.size() > 3);
}

TEST_CASE("strokes of a line, a cross and a triangle") {
  Raster line(20, 5);
  draw_line(line, {2, 2}, {15, 2});
  auto st = extract_strokes(line);
  REQUIRE(st.chains.size() == 1);
  std::size_t endpoints = 0;
  for (const auto& v : st.vertices) endpoints += v.kind == VertexKind::Endpoint;
  CHECK(endpoints == 2);

  Raster cross(21, 21);
  draw_line(cross, {2, 10}, {18, 10});
  draw_line(cross, {10, 2}, {10, 18});
  st = extract_strokes(cross);
  CHECK(st.chains.size() == 4);
  std::size_t junctions = 0;
  for (const auto& v : st.vertices) junctions += v.kind == VertexKind::Junction;
  CHECK(junctions == 1);

  const auto tri = polygon({1, 1, 1}, {120, 120, 120}, 0, 19, 50, 50);
  st = extract_strokes(tri);
  CHECK(st.chains.size() == 3);
  CHECK(st.vertices.size() == 3);
  // Every ink pixel is owned exactly once.
  std::size_t ink = 0, owned = 0;
  for (auto v : tri.values) ink += v > 0;
  std::set<Pixel> seen;
  for (const auto& o : st.owned) {
    owned += o.size();
    seen.insert(o.begin(), o.end());
  }
  CHECK(owned == ink);
  CHECK(seen.size() == ink);
}

TEST_CASE("thick strokes are thinned first") {
  Raster r(30, 10);
  for (int y = 3; y <= 5; ++y) draw_line(r, {3, y}, {25, y});
  const auto st = extract_strokes(r);
  CHECK(st.thinned);
  CHECK(st.chains.size() == 1);
}

TEST_CASE("segment classification") {
  std::vector<Pixel> run;
  for (int x = 0; x < 10; ++x) run.push_back({x, 0});
  auto f = classify_segment(run);
  CHECK(f.straightness == doctest::Approx(1.0));
  CHECK(f.orientation_bin == 0);
  CHECK(f.length_bin == 3);  // length 9

  std::vector<Pixel> diag;
  for (int i = 0; i < 10; ++i) diag.push_back({i, -i});  // y down in image, so up-right
  CHECK(classify_segment(diag).orientation_bin == 2);

  // Quarter circle of radius 20: the chord sagitta is 20 (1 - cos 45) ~ 5.9 px.
  std::vector<Pixel> arc;
  for (int a = 0; a <= 90; ++a) {
    Pixel p{static_cast<int>(std::lround(20 * std::cos(a * M_PI / 180))),
            static_cast<int>(std::lround(20 * std::sin(a * M_PI / 180)))};
    if (arc.empty() || !(arc.back().x == p.x && arc.back().y == p.y)) arc.push_back(p);
  }
  CHECK(classify_segment(arc).straightness < 0.5);
  CHECK(classify_segment(arc).curvature_bin > 0);
  CHECK_THROWS(classify_segment({{1, 1}}));
}

TEST_CASE("triangle, V shape and hexagon quotients") {
  const auto tri = polygon_quotient(polygon({1, 1, 1}, {120, 120, 120}, 0, 19, 50, 50));
  CHECK(tri.quotient.size() == 3);
  CHECK(tri.quotient.relations().size() == 3);
  CHECK(find_whole(tri.assertions, "is-closed-cycle")->score == 1.0);
  CHECK(find_whole(tri.assertions, "side-count")->value == 3);
  CHECK(fired(tri.assertions) == std::set<std::string>{"triangle", "regular-polygon"});

  Raster v(40, 30);
  draw_line(v, {3, 3}, {18, 25});
  draw_line(v, {18, 25}, {34, 3});
  const auto vq = polygon_quotient(v);
  CHECK(vq.quotient.size() == 2);
  CHECK(vq.quotient.relations().size() == 1);
  CHECK(find_whole(vq.assertions, "is-closed-cycle")->score == 0.0);
  CHECK(fired(vq.assertions).empty());

  const auto hex = polygon_quotient(polygon({1, 1, 1, 1, 1, 1}, {60, 60, 60, 60, 60, 60}, 0, 19, 60, 60));
  REQUIRE(hex.quotient.size() == 6);
  std::set<int> lengths, joints;
  for (const auto& p : hex.quotient.parts()) lengths.insert(p.attrs.at("length"));
  for (const auto& r : hex.quotient.relations()) joints.insert(r.attrs.at("angle.joint"));
  CHECK(lengths.size() == 1);
  CHECK(joints == std::set<int>{4});  // 120 degrees
  CHECK(fired(hex.assertions) == std::set<std::string>{"hexagon", "regular-polygon"});
}

TEST_CASE("a curved stroke suppresses polygon assertions") {
  Raster r(50, 50);
  Pixel prev{45, 25};
  for (int a = 1; a <= 180; ++a) {
    Point p{25 + 20 * std::cos(a * M_PI / 180), 25 - 20 * std::sin(a * M_PI / 180)};
    draw_line(r, {double(prev.x), double(prev.y)}, p);
    prev = {static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
  }
  const auto an = polygon_quotient(r);
  CHECK_FALSE(an.polygon);
  CHECK_FALSE(an.problems.empty());
  CHECK(find_whole(an.assertions, "side-count") == nullptr);
}

TEST_CASE("assertions are recomputable from the quotient") {
  for (int rot : {0, 3, 7}) {
    const auto an = polygon_quotient(polygon({1, 2.1, 1, 2.1}, {90, 90, 90, 90}, rot * 22.5, 19, 100, 100));
    Assertions recomputed = whole_assertions(an.quotient);
    const auto attrs = attribute_assertions(an.quotient);
    recomputed.insert(recomputed.end(), attrs.begin(), attrs.end());
    for (const auto& a : an.assertions) {
      if (a.feature == "is-straight" || a.feature == "curvature-bin") continue;
      CHECK(std::find(recomputed.begin(), recomputed.end(), a) != recomputed.end());
    }
  }
}

TEST_CASE("translation leaves the quotient unchanged") {
  const auto a = polygon_quotient(polygon({1, 1, 1, 1}, {90, 90, 90, 90}, 0, 19, 40, 40));
  Raster big(70, 55);
  const auto pts = polygon_from_turns({1, 1, 1, 1}, {90, 90, 90, 90}, 0, 19, 40, 40);
  std::vector<Point> moved;
  for (const auto& p : pts) moved.push_back({p.x + 23, p.y + 11});
  draw_polygon(big, moved);
  const auto b = polygon_quotient(big);
  CHECK(isomorphic(a.quotient, b.quotient));
}

TEST_CASE("scaling changes only lengths") {
  struct Shape {
    std::vector<double> sides, turns;
  };
  const std::vector<Shape> shapes = {{{1, 1, 1}, {120, 120, 120}},
                                     {{1, 1, 1, 1}, {90, 90, 90, 90}},
                                     {{1, 1, 1, 1, 1, 1}, {60, 60, 60, 60, 60, 60}}};
  MorphismMask no_length;
  no_length.drop_attrs = {"length"};
  for (const auto& sh : shapes) {
    std::optional<Structure> first;
    for (int k = 1; k <= 4; ++k) {
      const int w = static_cast<int>(19 * k * 2.2) + 12;
      const auto an = polygon_quotient(polygon(sh.sides, sh.turns, 0, 19 * k, w, w));
      REQUIRE(an.polygon);
      const auto masked = apply_morphism(an.quotient, no_length);
      if (!first) {
        first = masked;
      } else {
        CHECK(isomorphic(*first, masked));
      }
      CHECK(fired(an.assertions).count("regular-polygon"));
    }
  }
}

TEST_CASE("signature evaluation") {
  Assertions as = {{TargetKind::Whole, {}, "side-count", 3, 1.0}, {TargetKind::Whole, {}, "is-closed-cycle", 1, 1.0}};
  const auto sigs = polygon_signatures();
  CHECK(evaluate_signature(sigs[0], as).fired);
  CHECK_FALSE(evaluate_signature(sigs[2], as).fired);
  Signature bad{"x", {{"no-such-feature", Scope::Whole, std::nullopt, 0.5}}, {}, 0.5};
  CHECK_THROWS_AS(evaluate_signature(bad, as), ValidationError);
  CHECK_THROWS(evaluate_signature(Signature{"empty", {}, {}, 0.5}, as));
  // Forbidden features scale the score down.
  Signature irr = sigs[4];
  as.push_back({TargetKind::Whole, {}, "all-lengths-equal", 1, 1.0});
  CHECK_FALSE(evaluate_signature(irr, as).fired);
}

TEST_CASE("adding non-forbidden assertions never un-fires a signature") {
  std::mt19937_64 rng(43);
  const auto sigs = polygon_signatures();
  const auto& cat = feature_catalog();
  for (int trial = 0; trial < 200; ++trial) {
    Assertions as;
    for (int k = 0; k < 4; ++k) {
      as.push_back({TargetKind::Whole, {}, cat[rng() % 4], static_cast<int>(1 + rng() % 6),
                    (rng() % 5) / 4.0});
    }
    for (const auto& s : sigs) {
      const auto before = evaluate_signature(s, as);
      Assertions more = as;
      PropertyAssertion extra{TargetKind::Whole, {}, cat[rng() % 4], static_cast<int>(1 + rng() % 6), (rng() % 5) / 4.0};
      bool forbidden = false;
      for (const auto& f : s.forbidden) forbidden |= f.feature == extra.feature;
      if (forbidden) continue;
      more.push_back(extra);
      const auto after = evaluate_signature(s, more);
      CHECK(after.score >= before.score);
      if (before.fired) CHECK(after.fired);
    }
  }
}

TEST_CASE("signature candidates") {
  std::vector<Assertions> triangles;
  for (int k = 1; k <= 3; ++k) {
    const int w = static_cast<int>(19 * k * 2.2) + 12;
    triangles.push_back(polygon_quotient(polygon({1, 1, 1}, {120, 120, 120}, 0, 19 * k, w, w)).assertions);
  }
  const auto cands = build_signature_candidates(triangles);
  REQUIRE_FALSE(cands.empty());
  std::set<std::string> described;
  for (const auto& t : cands[0].required) described.insert(describe(t));
  CHECK(described.count("side-count@whole=3"));
  CHECK(described.count("is-closed-cycle@whole=1"));
  for (const auto& d : described) CHECK(d.find("length-bin") == std::string::npos);
  // The candidate recognises a fourth triangle.
  CHECK(evaluate_signature(cands[0], polygon_quotient(polygon({1, 1, 1}, {120, 120, 120}, 0, 70, 170, 170)).assertions).fired);

  const auto single = build_signature_candidates({triangles[0]});
  CHECK(single[0].required.size() >= triangles[0].size() / 2);

  const auto hex = polygon_quotient(polygon({1, 1, 1, 1, 1, 1}, {60, 60, 60, 60, 60, 60}, 0, 19, 60, 60)).assertions;
  const auto mixed = build_signature_candidates({triangles[0], hex});
  REQUIRE_FALSE(mixed.empty());
  std::set<std::string> generic;
  for (const auto& t : mixed[0].required) generic.insert(describe(t));
  CHECK(generic.count("is-closed-cycle@whole=1"));
  for (const auto& d : generic) CHECK(d.find("side-count") == std::string::npos);

  Assertions a = {{TargetKind::Whole, {}, "side-count", 3, 1.0}};
  Assertions b = {{TargetKind::Whole, {}, "side-count", 4, 1.0}};
  CHECK(build_signature_candidates({a, b}).empty());
}

TEST_CASE("corpus analysis: serial and parallel agree") {
  Config cfg;
  auto items = polygon_corpus(42);
  REQUIRE(items.size() == 60);
  items.resize(12);
  const auto s = analyze_corpus(items, cfg, Exec::Serial);
  const auto p = analyze_corpus(items, cfg, Exec::Parallel);
  for (std::size_t i = 0; i < items.size(); ++i) {
    CHECK(s[i].fired == p[i].fired);
    CHECK(s[i].scale_free_key == p[i].scale_free_key);
    CHECK(s[i].fired == expected_signatures(items[i]));
  }
}
