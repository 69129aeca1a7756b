#include <doctest.h>

#include "sc/error.hpp"
#include "sc/struct_io.hpp"
#include "sc/structure.hpp"

using namespace sc;

namespace {

Structure path3() {
  Structure s;
  s.add_part("a", "t");
  s.add_part("b", "t");
  s.add_part("c", "t");
  s.add_relation("a", "b", "adj");
  s.add_relation("b", "c", "adj");
  return s;
}

bool has_issue(const ValidationReport& r, IssueKind k) {
  for (const auto& i : r.issues) {
    if (i.kind == k) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("validate accepts a path and a single part") {
  CHECK(validate(path3()).ok());
  Structure one;
  one.add_part("x", "t");
  CHECK(validate(one).ok());
}

TEST_CASE("validate reports every violated invariant") {
  Structure iso;
  iso.add_part("a", "t");
  iso.add_part("b", "t");
  CHECK(has_issue(validate(iso), IssueKind::IsolatedPart));

  Structure loop;
  loop.add_part("a", "t");
  loop.add_part("b", "t");
  loop.add_relation("a", "b", "r");
  loop.add_relation("a", "a", "r");
  CHECK(has_issue(validate(loop), IssueKind::SelfLoop));

  Structure dup = path3();
  dup.add_relation("b", "a", "adj");  // same unordered pair and label
  CHECK(has_issue(validate(dup), IssueKind::DuplicateRelation));

  Structure oriented(true);
  oriented.add_part("a", "t");
  oriented.add_part("b", "t");
  oriented.add_relation("a", "b", "r");
  oriented.add_relation("b", "a", "r");
  CHECK(validate(oriented).ok());

  CHECK(has_issue(validate(Structure{}), IssueKind::Empty));
  CHECK_THROWS_AS(require_valid(iso), ValidationError);
}

TEST_CASE("payloads must resolve in the catalog") {
  Structure s = path3();
  s.set_payload(0, "brick");
  TypeCatalog cat;
  CHECK(has_issue(validate(s, &cat), IssueKind::UnresolvedType));
  cat.add_atomic("brick");
  CHECK(validate(s, &cat).ok());
}

TEST_CASE("catalog interns isomorphic nested structures under one id") {
  TypeCatalog cat;
  Structure a = path3();
  Structure b;
  b.add_part("z", "t");
  b.add_part("y", "t");
  b.add_part("x", "t");
  b.add_relation("z", "x", "adj");
  b.add_relation("x", "y", "adj");
  const auto ia = cat.intern(a);
  CHECK(ia.rfind("q:", 0) == 0);
  CHECK(cat.intern(b) == ia);
  CHECK(cat.size() == 1);
  CHECK(cat.acyclic());
}

TEST_CASE("catalog detects nested reference cycles") {
  TypeCatalog cat;
  Structure a;
  a.add_part("p", "t", {}, "B");
  Structure b;
  b.add_part("q", "t", {}, "A");
  cat.add_nested("A", a);
  CHECK_THROWS_AS(cat.add_nested("B", b), ValidationError);
  CHECK(cat.acyclic());
  CHECK_FALSE(cat.resolves("B"));
}

TEST_CASE("induced keeps only inner relations") {
  const auto s = path3();
  const auto sub = s.induced({0, 2});
  CHECK(sub.size() == 2);
  CHECK(sub.relations().empty());
  CHECK_FALSE(sub.connected());
  CHECK(s.induced({0, 1}).connected());
}

TEST_CASE("attribute families") {
  CHECK(in_attribute_family("angle.dir", "angle"));
  CHECK(in_attribute_family("angle", "angle"));
  CHECK_FALSE(in_attribute_family("angles", "angle"));
  CHECK_FALSE(in_attribute_family("length", "angle"));
}

TEST_CASE(".struct round trip is exact") {
  const std::string text =
      "# a comment\n"
      "oriented\n"
      "part a block length=3 @inner\n"
      "part b block\n"
      "part c table\n"
      "rel a b on w=2 k=1\n"
      "rel b c on\n";
  const auto s = parse_struct(text);
  CHECK(s.oriented());
  CHECK(s.size() == 3);
  CHECK(s.part(0).attrs.at("length") == 3);
  CHECK(s.part(0).payload == "inner");
  CHECK(s.relations()[0].attrs.at("w") == 2);
  const auto once = serialize_struct(s);
  CHECK(serialize_struct(parse_struct(once)) == once);
  CHECK(parse_struct(once).identical(s));
}

TEST_CASE(".struct parse errors carry line numbers") {
  try {
    parse_struct("part a t\nrel a zz adj\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_struct("part a\n"), ParseError);
  CHECK_THROWS_AS(parse_struct("part a t\npart a t\n"), ParseError);
  CHECK_THROWS_AS(parse_struct("part a t x=y\n"), ParseError);
  CHECK_THROWS_AS(parse_struct("frobnicate\n"), ParseError);
}

TEST_CASE("sidecar masks and blocks round trip") {
  const std::string text =
      "mask drop-attr length\n"
      "mask drop-rel-attr angle\n"
      "mask merge-type red blue -> colour\n"
      "block a b\n"
      "block c\n";
  const auto sc = parse_sidecar(text);
  CHECK(sc.mask.drop_attrs.count("length"));
  CHECK(sc.mask.drop_rel_attrs.count("angle"));
  CHECK(sc.mask.merge_types.at("red") == "colour");
  CHECK(sc.mask.merge_types.at("blue") == "colour");
  REQUIRE(sc.blocks.size() == 2);
  CHECK(sc.blocks[0] == std::vector<std::string>{"a", "b"});
  const auto again = parse_sidecar(serialize_sidecar(sc));
  CHECK(again.mask == sc.mask);
  CHECK(again.blocks == sc.blocks);
  CHECK_THROWS_AS(parse_sidecar("mask drop-all x\n"), ParseError);
}
