#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sc/structure.hpp"

namespace sc {

// Grid of quantized intensities. Value 0 is background; higher bins are
// darker. For PBM input the value is the raw bit (1 = ink).
struct Raster {
  int width = 0;
  int height = 0;
  int levels = 2;
  std::vector<int> values;  // row-major

  Raster() = default;
  Raster(int w, int h, int levels = 2);

  int at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  void set(int x, int y, int v) { values[static_cast<std::size_t>(y) * width + x] = v; }
  bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
  bool operator==(const Raster&) const = default;
};

// One part per pixel ("p<x>_<y>", type "v<bin>"), "adj" relations between
// 4-neighbours.
struct RasterStructure {
  Raster grid;
  Structure base;
};

std::string pixel_id(int x, int y);
Structure raster_base_structure(const Raster& r);

// Inverse of raster_base_structure, when `s` has that shape.
std::optional<Raster> raster_from_base(const Structure& s);

// PBM P1 or PGM P2 (ASCII). P2 values are binned into `levels` darkness bins.
RasterStructure load_raster(std::string_view bytes, int levels = 2);
std::string write_pbm(const Raster& r);

struct Point {
  double x = 0;
  double y = 0;
};

// 8-connected Bresenham segment between rounded endpoints.
void draw_line(Raster& r, Point a, Point b, int value = 1);
// Closed outline through the vertices.
void draw_polygon(Raster& r, const std::vector<Point>& vertices, int value = 1);

// Vertices of a polygon given by side lengths and exterior turning angles
// (degrees, counter-clockwise in image coordinates with y pointing up),
// rotated by `rotation_deg`, scaled and centred in a w×h canvas.
std::vector<Point> polygon_from_turns(const std::vector<double>& sides, const std::vector<double>& turns_deg,
                                      double rotation_deg, double scale, int w, int h);

}  // namespace sc
