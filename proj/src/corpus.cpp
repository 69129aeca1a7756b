#include "sc/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "sc/canonical.hpp"
#include "sc/derivation.hpp"
#include "sc/error.hpp"

namespace sc {

Figure figure_shape(const std::string& figure) {
  const double r3 = std::sqrt(3.0);
  if (figure == "eq-triangle") return {{1, 1, 1}, {120, 120, 120}};
  if (figure == "right-triangle") return {{1, r3, 2}, {90, 150, 120}};
  if (figure == "square") return {{1, 1, 1, 1}, {90, 90, 90, 90}};
  if (figure == "rectangle") return {{1, 2.1, 1, 2.1}, {90, 90, 90, 90}};
  if (figure == "hexagon") return {{1, 1, 1, 1, 1, 1}, {60, 60, 60, 60, 60, 60}};
  if (figure == "equiangular-hexagon") return {{1, 2.1, 1, 2.1, 1, 2.1}, {60, 60, 60, 60, 60, 60}};
  throw PreconditionError("unknown figure '" + figure + "'");
}

Raster draw_figure(const std::string& figure, int rotation_step, double scale) {
  const auto f = figure_shape(figure);
  const double longest = *std::max_element(f.sides.begin(), f.sides.end());
  const int w = static_cast<int>(scale * longest * 2.2) + 12;
  Raster r(w, w);
  draw_polygon(r, polygon_from_turns(f.sides, f.turns_deg, rotation_step * 22.5, scale, w, w));
  return r;
}

std::vector<CorpusItem> polygon_corpus(std::uint64_t seed, double unit) {
  struct Kind {
    const char* figure;
    const char* cls;
    bool regular;
    int count;
  };
  static const Kind kinds[] = {
      {"eq-triangle", "triangle", true, 4},     {"right-triangle", "triangle", false, 3},
      {"square", "quadrilateral", true, 3},     {"rectangle", "quadrilateral", false, 3},
      {"hexagon", "hexagon", true, 4},          {"equiangular-hexagon", "hexagon", false, 3},
  };
  std::mt19937_64 rng(seed);
  std::vector<CorpusItem> out;
  for (const auto& k : kinds) {
    for (int i = 0; i < k.count; ++i) {
      const int rot = static_cast<int>(rng() % 16);
      for (int scale = 1; scale <= 3; ++scale) {
        CorpusItem item;
        item.figure = k.figure;
        item.polygon_class = k.cls;
        item.regular = k.regular;
        item.scale = scale;
        item.rotation_step = rot;
        item.name = item.figure + "-" + std::to_string(i) + "-r" + std::to_string(rot) + "-s" + std::to_string(scale);
        item.raster = draw_figure(item.figure, rot, unit * scale);
        out.push_back(std::move(item));
      }
    }
  }
  return out;
}

CorpusResult analyze_item(const Raster& r, const Config& cfg) {
  CorpusResult res;
  res.analysis = polygon_quotient(r, cfg.pixel);
  for (const auto& sig : polygon_signatures(cfg.pixel.signature_threshold)) {
    if (evaluate_signature(sig, res.analysis.assertions).fired) res.fired.push_back(sig.subject);
  }
  std::string key;
  for (const auto& f : res.fired) key += f + ",";
  key += "|";
  for (const auto& a : res.analysis.assertions) {
    if (a.target != TargetKind::Whole) continue;
    key += a.feature + "=" + std::to_string(a.value) + ":" + std::to_string(a.score) + ";";
  }
  key += "|";
  const auto& q = res.analysis.quotient;
  if (!q.empty()) {
    MorphismMask m;
    for (const auto& p : q.parts()) {
      for (const auto& [name, v] : p.attrs) {
        if (in_attribute_family(name, "length") || name == "angle.dir") m.drop_attrs.insert(name);
      }
    }
    key += canonical_form(m.empty() ? q : apply_morphism(q, m)).text;
  }
  res.scale_free_key = std::move(key);
  return res;
}

std::vector<CorpusResult> analyze_corpus(const std::vector<CorpusItem>& items, const Config& cfg, Exec exec) {
  std::vector<CorpusResult> out(items.size());
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = analyze_item(items[i].raster, cfg);
    return out;
  }
  std::vector<std::exception_ptr> errors(items.size());
  const auto n = static_cast<long>(items.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = analyze_item(items[i].raster, cfg);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<std::string> expected_signatures(const CorpusItem& item) {
  // Same order as polygon_signatures().
  return {item.polygon_class, item.regular ? "regular-polygon" : "irregular-polygon"};
}

}  // namespace sc
