#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sc/config.hpp"
#include "sc/derivation.hpp"
#include "sc/parallel.hpp"
#include "sc/raster.hpp"

namespace sc {

struct Pixel {
  int x = 0;
  int y = 0;
  auto operator<=>(const Pixel&) const = default;
};

// Blocks = 4-connected components of equal intensity, ordered by their
// first pixel in raster order.
Partition segment_regions(const RasterStructure& r, Exec exec = Exec::Parallel);

enum class VertexKind { Endpoint, Junction, Corner };

struct StrokeVertex {
  VertexKind kind = VertexKind::Endpoint;
  std::vector<Pixel> pixels;  // a junction may span a small cluster
  std::vector<int> chains;    // incident chains, ascending
};

struct Chain {
  // Ordered path; the first and last pixel belong to the end vertices
  // (equal for a closed chain).
  std::vector<Pixel> pixels;
  bool closed = false;
  int start_vertex = -1;
  int end_vertex = -1;
};

struct Strokes {
  std::vector<Chain> chains;
  std::vector<StrokeVertex> vertices;
  // owned[i] = the pixels attributed to chain i; every stroke pixel is in
  // exactly one list. Vertex pixels go to the most horizontal incident chain.
  std::vector<std::vector<Pixel>> owned;
  bool thinned = false;
};

// Binary strokes (value > 0). Thick strokes are thinned first; chains are
// split at junctions (degree >= 3) and at corners found by turning angle.
Strokes extract_strokes(const Raster& r, const PixelConfig& cfg = {});

// Zhang-Suen thinning of the ink mask.
Raster thin(const Raster& r);

// Total least-squares line through pixel centres (y pointing up).
struct LineFit {
  double cx = 0, cy = 0;  // centroid
  double dx = 1, dy = 0;  // unit direction
  double max_deviation = 0;
};

LineFit fit_line(const std::vector<Pixel>& pixels);

// Intersection of two fitted lines; nullopt when (nearly) parallel.
std::optional<std::pair<double, double>> intersect(const LineFit& a, const LineFit& b);

struct SegmentFeatures {
  double straightness = 0;   // 1 - max deviation / threshold, clamped
  double max_deviation = 0;  // px, from the fitted line
  double length = 0;         // px, endpoint to endpoint
  double orientation_deg = 0;  // [0, 180), y pointing up
  int length_bin = 0;        // floor(log2(length))
  int orientation_bin = 0;   // round(angle / 22.5) folded to a line direction
  int curvature_bin = 0;
};

// Requires at least two pixels.
SegmentFeatures classify_segment(const std::vector<Pixel>& chain, const PixelConfig& cfg = {});

// Interior angle at a shared vertex between two chains, degrees in [0, 180].
double joint_angle_deg(const Chain& a, const Chain& b, int vertex);

// Ink pixels (value > 0) with "adj" relations to edge neighbours and "diag"
// relations to corner neighbours, the connectivity strokes are traced in.
Structure ink_structure(const Raster& r);

// Partition of the ink structure (of thin(r) when the strokes were thinned)
// into the pixels owned by each chain.
Partition stroke_partition(const Raster& r, const Strokes& st);

}  // namespace sc
