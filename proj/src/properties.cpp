#include "sc/properties.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <iterator>
#include <set>
#include <tuple>

#include "sc/error.hpp"

namespace sc {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string seg_id(std::size_t i) { return "s" + std::to_string(i); }

// Unit direction of a chain's fitted line, pointing away from the given end.
std::pair<double, double> ray(const LineFit& f, const Chain& c, bool from_start) {
  const Pixel near = from_start ? c.pixels.front() : c.pixels.back();
  const Pixel far = from_start ? c.pixels.back() : c.pixels.front();
  const double vx = far.x - near.x, vy = -(far.y - near.y);
  const double s = vx * f.dx + vy * f.dy >= 0 ? 1.0 : -1.0;
  return {s * f.dx, s * f.dy};
}

std::pair<double, double> project(const LineFit& f, Pixel p) {
  const double x = p.x - f.cx, y = -p.y - f.cy;
  const double t = x * f.dx + y * f.dy;
  return {f.cx + t * f.dx, f.cy + t * f.dy};
}

}  // namespace

const std::vector<std::string>& feature_catalog() {
  static const std::vector<std::string> features = {
      "is-closed-cycle", "side-count", "all-lengths-equal", "all-angles-equal", "is-straight",
      "length-bin",      "orientation-bin", "curvature-bin", "joint-angle-bin", "parallel-to"};
  return features;
}

bool known_feature(const std::string& feature) {
  const auto& f = feature_catalog();
  return std::find(f.begin(), f.end(), feature) != f.end();
}

PolygonAnalysis polygon_quotient(const Raster& r, const PixelConfig& cfg) {
  PolygonAnalysis out;
  out.strokes = extract_strokes(r, cfg);
  const auto& chains = out.strokes.chains;
  const auto& vertices = out.strokes.vertices;
  std::vector<LineFit> fits(chains.size());
  out.segments.resize(chains.size());
  std::vector<char> segment(chains.size(), 0);
  bool all_straight = !chains.empty();
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const auto& px = chains[i].pixels;
    if (px.size() < 2) {
      out.problems.push_back("chain " + seg_id(i) + " is a single pixel");
      all_straight = false;
      continue;
    }
    segment[i] = 1;
    out.segments[i] = classify_segment(px, cfg);
    fits[i] = fit_line(px.size() >= 5 ? std::vector<Pixel>(px.begin() + 1, px.end() - 1) : px);
    if (out.segments[i].straightness < cfg.min_straightness || chains[i].start_vertex == chains[i].end_vertex) {
      out.problems.push_back("chain " + seg_id(i) + " is not straight");
      all_straight = false;
    }
  }

  // Segment end points: where the lines of the two segments at a vertex
  // cross, else the end pixel projected onto the segment's own line.
  auto end_point = [&](std::size_t i, bool at_start) {
    const auto& c = chains[i];
    const int v = at_start ? c.start_vertex : c.end_vertex;
    const Pixel pix = at_start ? c.pixels.front() : c.pixels.back();
    if (v >= 0) {
      std::vector<int> segs;
      for (int k : vertices[v].chains)
        if (segment[k]) segs.push_back(k);
      if (segs.size() == 2) {
        const int other = segs[0] == static_cast<int>(i) ? segs[1] : segs[0];
        if (auto x = intersect(fits[i], fits[other])) {
          if (std::hypot(x->first - pix.x, x->second + pix.y) <= 2.0 * cfg.corner_arm) return *x;
        }
      }
    }
    return project(fits[i], pix);
  };

  Structure q;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    AttrMap attrs;
    if (segment[i]) {
      auto a = end_point(i, true), b = end_point(i, false);
      const double len = std::max(1.0, std::hypot(a.first - b.first, a.second - b.second));
      out.segments[i].length = len;
      out.segments[i].length_bin = static_cast<int>(std::floor(std::log2(len)));
      attrs["length"] = out.segments[i].length_bin;
      attrs["angle.dir"] = out.segments[i].orientation_bin;
    }
    q.add_part(seg_id(i), "segment", std::move(attrs));
  }
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    std::vector<int> segs;
    for (int k : vertices[v].chains)
      if (segment[k]) segs.push_back(k);
    for (std::size_t x = 0; x < segs.size(); ++x) {
      for (std::size_t y = x + 1; y < segs.size(); ++y) {
        const auto& ca = chains[segs[x]];
        const auto& cb = chains[segs[y]];
        auto ra = ray(fits[segs[x]], ca, ca.start_vertex == static_cast<int>(v));
        auto rb = ray(fits[segs[y]], cb, cb.start_vertex == static_cast<int>(v));
        const double deg =
            std::acos(std::clamp(ra.first * rb.first + ra.second * rb.second, -1.0, 1.0)) * 180.0 / kPi;
        const int bin = static_cast<int>(std::lround(deg / cfg.joint_bin_deg));
        q.add_relation(static_cast<std::size_t>(segs[x]), static_cast<std::size_t>(segs[y]), "joined-at-vertex",
                       {{"angle.joint", bin}});
      }
    }
  }
  out.quotient = std::move(q);
  out.polygon = all_straight;

  for (std::size_t i = 0; i < chains.size(); ++i) {
    if (!segment[i]) continue;
    const auto& f = out.segments[i];
    out.assertions.push_back({TargetKind::Part, {seg_id(i)}, "is-straight", 1, f.straightness});
    out.assertions.push_back({TargetKind::Part, {seg_id(i)}, "curvature-bin", f.curvature_bin, 1.0});
  }
  auto attrs = attribute_assertions(out.quotient);
  out.assertions.insert(out.assertions.end(), attrs.begin(), attrs.end());
  if (out.polygon) {
    auto whole = whole_assertions(out.quotient);
    out.assertions.insert(out.assertions.end(), whole.begin(), whole.end());
  }
  return out;
}

Assertions whole_assertions(const Structure& q) {
  Assertions out;
  const std::size_t n = q.size();
  std::vector<int> degree(n, 0);
  for (const auto& r : q.relations()) {
    ++degree[r.from];
    ++degree[r.to];
  }
  const bool closed = n >= 3 && q.relations().size() == n && q.connected() &&
                      std::all_of(degree.begin(), degree.end(), [](int d) { return d == 2; });
  out.push_back({TargetKind::Whole, {}, "is-closed-cycle", 1, closed ? 1.0 : 0.0});
  out.push_back({TargetKind::Whole, {}, "side-count", static_cast<int>(n), 1.0});
  std::set<int> lengths, angles;
  for (const auto& p : q.parts()) {
    if (auto it = p.attrs.find("length"); it != p.attrs.end()) lengths.insert(it->second);
  }
  for (const auto& r : q.relations()) {
    if (auto it = r.attrs.find("angle.joint"); it != r.attrs.end()) angles.insert(it->second);
  }
  // A suppressed attribute no longer distinguishes anything, so "all equal"
  // holds vacuously.
  out.push_back({TargetKind::Whole, {}, "all-lengths-equal", 1, lengths.size() <= 1 ? 1.0 : 0.0});
  out.push_back({TargetKind::Whole, {}, "all-angles-equal", 1, angles.size() <= 1 ? 1.0 : 0.0});
  return out;
}

Assertions attribute_assertions(const Structure& q) {
  Assertions out;
  for (const auto& p : q.parts()) {
    if (auto it = p.attrs.find("length"); it != p.attrs.end())
      out.push_back({TargetKind::Part, {p.id}, "length-bin", it->second, 1.0});
    if (auto it = p.attrs.find("angle.dir"); it != p.attrs.end())
      out.push_back({TargetKind::Part, {p.id}, "orientation-bin", it->second, 1.0});
  }
  for (const auto& r : q.relations()) {
    if (auto it = r.attrs.find("angle.joint"); it != r.attrs.end())
      out.push_back({TargetKind::Pair, {q.part(r.from).id, q.part(r.to).id}, "joint-angle-bin", it->second, 1.0});
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    auto a = q.part(i).attrs.find("angle.dir");
    if (a == q.part(i).attrs.end()) continue;
    for (std::size_t j = i + 1; j < q.size(); ++j) {
      auto b = q.part(j).attrs.find("angle.dir");
      if (b != q.part(j).attrs.end() && a->second == b->second)
        out.push_back({TargetKind::Pair, {q.part(i).id, q.part(j).id}, "parallel-to", 1, 1.0});
    }
  }
  return out;
}

namespace {

bool scope_matches(Scope s, TargetKind k) {
  switch (s) {
    case Scope::Whole: return k == TargetKind::Whole;
    case Scope::AnyPart: return k == TargetKind::Part;
    case Scope::AnyPair: return k == TargetKind::Pair;
  }
  return false;
}

double matched_score(const FeatureTest& t, const Assertions& as) {
  if (!known_feature(t.feature)) throw ValidationError("unknown feature '" + t.feature + "'");
  double best = 0;
  for (const auto& a : as) {
    if (a.feature != t.feature || !scope_matches(t.scope, a.target)) continue;
    if (t.value && a.value != *t.value) continue;
    best = std::max(best, a.score);
  }
  return best >= t.min_score ? best : 0.0;
}

}  // namespace

SignatureResult evaluate_signature(const Signature& sig, const Assertions& assertions) {
  if (sig.required.empty()) throw ValidationError("signature '" + sig.subject + "' has no required feature");
  double req = 1.0, forb = 1.0;
  for (const auto& t : sig.required) req = std::min(req, matched_score(t, assertions));
  for (const auto& t : sig.forbidden) forb = std::min(forb, 1.0 - matched_score(t, assertions));
  SignatureResult r;
  r.score = req * forb;
  r.fired = r.score >= sig.threshold;
  return r;
}

std::vector<Signature> build_signature_candidates(const std::vector<Assertions>& examples, double threshold) {
  if (examples.empty()) throw PreconditionError("signature candidates need at least one example");
  using Atom = std::tuple<std::string, Scope, int>;
  auto atoms_of = [&](const Assertions& as) {
    std::set<Atom> out;
    for (const auto& a : as) {
      if (a.score < threshold) continue;
      const Scope s = a.target == TargetKind::Whole ? Scope::Whole
                      : a.target == TargetKind::Part ? Scope::AnyPart
                                                     : Scope::AnyPair;
      out.insert({a.feature, s, a.value});
    }
    return out;
  };
  std::set<Atom> common = atoms_of(examples.front());
  for (std::size_t i = 1; i < examples.size(); ++i) {
    const auto next = atoms_of(examples[i]);
    std::set<Atom> keep;
    std::set_intersection(common.begin(), common.end(), next.begin(), next.end(), std::inserter(keep, keep.end()));
    common = std::move(keep);
  }
  if (common.empty()) return {};
  auto make = [&](const std::set<Atom>& atoms, const std::string& name) {
    Signature sig;
    sig.subject = name;
    sig.threshold = threshold;
    for (const auto& [f, s, v] : atoms) sig.required.push_back({f, s, v, threshold});
    return sig;
  };
  std::vector<Signature> out{make(common, "candidate-0")};
  std::set<Atom> whole;
  for (const auto& a : common)
    if (std::get<1>(a) == Scope::Whole) whole.insert(a);
  if (!whole.empty() && whole.size() != common.size()) out.push_back(make(whole, "candidate-1"));
  return out;
}

std::vector<Signature> polygon_signatures(double threshold) {
  auto closed = FeatureTest{"is-closed-cycle", Scope::Whole, 1, threshold};
  auto sides = [&](int n) { return FeatureTest{"side-count", Scope::Whole, n, threshold}; };
  auto lengths = FeatureTest{"all-lengths-equal", Scope::Whole, 1, threshold};
  auto angles = FeatureTest{"all-angles-equal", Scope::Whole, 1, threshold};
  return {
      Signature{"triangle", {sides(3), closed}, {}, threshold},
      Signature{"quadrilateral", {sides(4), closed}, {}, threshold},
      Signature{"hexagon", {sides(6), closed}, {}, threshold},
      Signature{"regular-polygon", {closed, lengths, angles}, {}, threshold},
      Signature{"irregular-polygon", {closed}, {lengths}, threshold},
  };
}

std::string to_string(Scope s) {
  switch (s) {
    case Scope::Whole: return "whole";
    case Scope::AnyPart: return "any-part";
    case Scope::AnyPair: return "any-pair";
  }
  return "?";
}

std::string describe(const FeatureTest& t) {
  std::string out = t.feature + "@" + to_string(t.scope);
  if (t.value) out += "=" + std::to_string(*t.value);
  return out;
}

}  // namespace sc
