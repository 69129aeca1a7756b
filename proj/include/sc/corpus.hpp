#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sc/config.hpp"
#include "sc/parallel.hpp"
#include "sc/properties.hpp"
#include "sc/raster.hpp"

namespace sc {

// A synthetic polygon outline with the classes it should be recognised as.
struct CorpusItem {
  std::string name;    // "<figure>-r<rotation step>-s<scale>"
  std::string figure;  // eq-triangle, right-triangle, square, rectangle, hexagon, equiangular-hexagon
  std::string polygon_class;  // triangle, quadrilateral, hexagon
  bool regular = false;
  int scale = 1;
  int rotation_step = 0;  // multiples of 22.5 degrees
  Raster raster;
};

// 20 figure/rotation pairs drawn at scales 1, 2 and 3 (60 rasters). The
// seed chooses the rotations.
std::vector<CorpusItem> polygon_corpus(std::uint64_t seed, double unit = 19.0);

// Sides and exterior turns of a named figure.
struct Figure {
  std::vector<double> sides;
  std::vector<double> turns_deg;
};
Figure figure_shape(const std::string& figure);
Raster draw_figure(const std::string& figure, int rotation_step, double scale);

struct CorpusResult {
  PolygonAnalysis analysis;
  std::vector<std::string> fired;  // signature subjects, in signature order
  // Fired signatures, whole assertions and the quotient without lengths or
  // directions. Equal across scales of one figure.
  std::string scale_free_key;
};

CorpusResult analyze_item(const Raster& r, const Config& cfg);
std::vector<CorpusResult> analyze_corpus(const std::vector<CorpusItem>& items, const Config& cfg,
                                         Exec exec = Exec::Parallel);

// Expected firings: the polygon class plus regular- or irregular-polygon.
std::vector<std::string> expected_signatures(const CorpusItem& item);

}  // namespace sc
