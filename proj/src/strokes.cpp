#include "sc/strokes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "sc/error.hpp"

namespace sc {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Mask {
  int w = 0, h = 0;
  std::vector<char> on;

  explicit Mask(const Raster& r) : w(r.width), h(r.height), on(r.values.size()) {
    for (std::size_t i = 0; i < on.size(); ++i) on[i] = r.values[i] > 0;
  }
  bool get(int x, int y) const { return x >= 0 && y >= 0 && x < w && y < h && on[y * w + x]; }
  bool get(Pixel p) const { return get(p.x, p.y); }
  void clear(Pixel p) { on[p.y * w + p.x] = 0; }
  int index(Pixel p) const { return p.y * w + p.x; }
};

// m-adjacency: 4-neighbours, plus diagonals whose two shared 4-neighbours
// are both background. Keeps 8-connected lines free of redundant loops.
std::vector<Pixel> neighbours(const Mask& m, Pixel p) {
  std::vector<Pixel> out;
  static const int d4[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  static const int dd[4][2] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
  for (const auto& d : d4) {
    if (m.get(p.x + d[0], p.y + d[1])) out.push_back({p.x + d[0], p.y + d[1]});
  }
  for (const auto& d : dd) {
    if (m.get(p.x + d[0], p.y + d[1]) && !m.get(p.x + d[0], p.y) && !m.get(p.x, p.y + d[1])) {
      out.push_back({p.x + d[0], p.y + d[1]});
    }
  }
  std::sort(out.begin(), out.end(), [](Pixel a, Pixel b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
  return out;
}

bool has_thick_block(const Mask& m) {
  for (int y = 0; y + 1 < m.h; ++y)
    for (int x = 0; x + 1 < m.w; ++x)
      if (m.get(x, y) && m.get(x + 1, y) && m.get(x, y + 1) && m.get(x + 1, y + 1)) return true;
  return false;
}

struct Graph {
  std::vector<Chain> chains;
  std::vector<StrokeVertex> vertices;
};

Graph build_graph(const Mask& m) {
  Graph g;
  const int n = m.w * m.h;
  std::vector<int> degree(n, 0);
  std::vector<Pixel> ink;
  for (int y = 0; y < m.h; ++y)
    for (int x = 0; x < m.w; ++x)
      if (m.get(x, y)) {
        ink.push_back({x, y});
        degree[y * m.w + x] = static_cast<int>(neighbours(m, {x, y}).size());
      }

  // Vertices: junction clusters, endpoints, isolated pixels.
  std::vector<int> vertex_of(n, -1);
  for (const auto& p : ink) {
    const int d = degree[m.index(p)];
    if (d == 2 || vertex_of[m.index(p)] >= 0) continue;
    StrokeVertex v;
    v.kind = d >= 3 ? VertexKind::Junction : VertexKind::Endpoint;
    const int id = static_cast<int>(g.vertices.size());
    std::vector<Pixel> stack{p};
    vertex_of[m.index(p)] = id;
    while (!stack.empty()) {
      Pixel q = stack.back();
      stack.pop_back();
      v.pixels.push_back(q);
      if (d < 3) break;
      for (auto r : neighbours(m, q)) {
        if (degree[m.index(r)] >= 3 && vertex_of[m.index(r)] < 0) {
          vertex_of[m.index(r)] = id;
          stack.push_back(r);
        }
      }
    }
    std::sort(v.pixels.begin(), v.pixels.end(),
              [](Pixel a, Pixel b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    g.vertices.push_back(std::move(v));
  }

  std::set<std::pair<int, int>> used;
  auto edge = [&](Pixel a, Pixel b) {
    int i = m.index(a), j = m.index(b);
    return std::make_pair(std::min(i, j), std::max(i, j));
  };
  std::vector<char> visited(n, 0);
  for (int vid = 0; vid < static_cast<int>(g.vertices.size()); ++vid) {
    const auto pixels = g.vertices[vid].pixels;
    if (g.vertices[vid].kind == VertexKind::Endpoint && degree[m.index(pixels[0])] == 0) {
      Chain c;
      c.pixels = {pixels[0]};
      c.start_vertex = c.end_vertex = vid;
      g.chains.push_back(c);
      continue;
    }
    for (auto u : pixels) {
      visited[m.index(u)] = 1;
      for (auto v : neighbours(m, u)) {
        if (vertex_of[m.index(v)] == vid || used.count(edge(u, v))) continue;
        Chain c;
        c.start_vertex = vid;
        c.pixels = {u, v};
        used.insert(edge(u, v));
        Pixel prev = u, cur = v;
        while (vertex_of[m.index(cur)] < 0) {
          visited[m.index(cur)] = 1;
          Pixel next{-1, -1};
          for (auto w : neighbours(m, cur)) {
            if (w != prev) {
              next = w;
              break;
            }
          }
          used.insert(edge(cur, next));
          c.pixels.push_back(next);
          prev = cur;
          cur = next;
        }
        c.end_vertex = vertex_of[m.index(cur)];
        g.chains.push_back(std::move(c));
      }
    }
  }
  // Whatever is left lies on vertex-free loops.
  for (const auto& p : ink) {
    if (visited[m.index(p)] || vertex_of[m.index(p)] >= 0) continue;
    Chain c;
    c.closed = true;
    Pixel prev = p, cur = p;
    do {
      visited[m.index(cur)] = 1;
      c.pixels.push_back(cur);
      Pixel next = prev;
      for (auto w : neighbours(m, cur)) {
        if (w != prev) {
          next = w;
          break;
        }
      }
      prev = cur;
      cur = next;
    } while (cur != p && c.pixels.size() <= ink.size());
    c.pixels.push_back(p);
    g.chains.push_back(std::move(c));
  }
  for (int i = 0; i < static_cast<int>(g.chains.size()); ++i) {
    const auto& c = g.chains[i];
    if (c.start_vertex >= 0) g.vertices[c.start_vertex].chains.push_back(i);
    if (c.end_vertex >= 0 && c.end_vertex != c.start_vertex) g.vertices[c.end_vertex].chains.push_back(i);
  }
  return g;
}

// Junction clusters joined by a very short chain are one vertex: Bresenham
// ends often leave tiny loops where two lines meet.
void merge_short_links(Graph& g, int spur_max) {
  std::vector<int> root(g.vertices.size());
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  std::vector<char> absorbed(g.chains.size(), 0);
  for (std::size_t i = 0; i < g.chains.size(); ++i) {
    const auto& c = g.chains[i];
    if (c.closed || c.start_vertex < 0 || c.end_vertex < 0) continue;
    if (g.vertices[c.start_vertex].kind != VertexKind::Junction ||
        g.vertices[c.end_vertex].kind != VertexKind::Junction) {
      continue;
    }
    if (static_cast<int>(c.pixels.size()) - 2 > spur_max) continue;
    absorbed[i] = 1;
    root[find(c.start_vertex)] = find(c.end_vertex);
  }
  if (std::find(absorbed.begin(), absorbed.end(), 1) == absorbed.end()) return;
  std::map<int, int> fresh;
  std::vector<StrokeVertex> vertices;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    auto [it, inserted] = fresh.emplace(find(v), static_cast<int>(vertices.size()));
    if (inserted) vertices.push_back(StrokeVertex{g.vertices[v].kind, {}, {}});
    auto& px = vertices[it->second].pixels;
    px.insert(px.end(), g.vertices[v].pixels.begin(), g.vertices[v].pixels.end());
  }
  std::vector<Chain> chains;
  for (std::size_t i = 0; i < g.chains.size(); ++i) {
    Chain c = g.chains[i];
    if (c.start_vertex >= 0) c.start_vertex = fresh[find(c.start_vertex)];
    if (c.end_vertex >= 0) c.end_vertex = fresh[find(c.end_vertex)];
    if (absorbed[i]) {
      auto& px = vertices[c.start_vertex].pixels;
      if (c.pixels.size() > 2) px.insert(px.end(), c.pixels.begin() + 1, c.pixels.end() - 1);
      continue;
    }
    chains.push_back(std::move(c));
  }
  for (auto& v : vertices) {
    std::sort(v.pixels.begin(), v.pixels.end(),
              [](Pixel a, Pixel b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    v.pixels.erase(std::unique(v.pixels.begin(), v.pixels.end()), v.pixels.end());
  }
  for (int i = 0; i < static_cast<int>(chains.size()); ++i) {
    const auto& c = chains[i];
    if (c.start_vertex >= 0) vertices[c.start_vertex].chains.push_back(i);
    if (c.end_vertex >= 0 && c.end_vertex != c.start_vertex) vertices[c.end_vertex].chains.push_back(i);
  }
  g.vertices = std::move(vertices);
  g.chains = std::move(chains);
}

// Pruned pixels are remembered with the pixel they hung from, so they can
// be handed to that pixel's chain afterwards.
bool prune_spurs(Mask& m, const Graph& g, int spur_max, std::vector<std::pair<Pixel, Pixel>>& pruned) {
  bool changed = false;
  for (const auto& c : g.chains) {
    if (c.closed || c.start_vertex < 0 || c.end_vertex < 0) continue;
    const auto ks = g.vertices[c.start_vertex].kind, ke = g.vertices[c.end_vertex].kind;
    const bool spur = (ks == VertexKind::Endpoint) != (ke == VertexKind::Endpoint);
    if (!spur || static_cast<int>(c.pixels.size()) - 1 > spur_max) continue;
    // Remove everything but the junction-side end.
    if (ks == VertexKind::Endpoint) {
      for (std::size_t i = c.pixels.size() - 1; i-- > 0;) {
        m.clear(c.pixels[i]);
        pruned.push_back({c.pixels[i], c.pixels[i + 1]});
      }
    } else {
      for (std::size_t i = 1; i < c.pixels.size(); ++i) {
        m.clear(c.pixels[i]);
        pruned.push_back({c.pixels[i], c.pixels[i - 1]});
      }
    }
    changed = true;
  }
  return changed;
}

double turn_deg(Pixel a, Pixel b, Pixel c) {
  const double ux = b.x - a.x, uy = b.y - a.y, vx = c.x - b.x, vy = c.y - b.y;
  const double nu = std::hypot(ux, uy), nv = std::hypot(vx, vy);
  if (nu == 0 || nv == 0) return 0;
  const double cosv = std::clamp((ux * vx + uy * vy) / (nu * nv), -1.0, 1.0);
  return std::acos(cosv) * 180.0 / kPi;
}

// Corner positions (indices into the chain) by turning angle.
std::vector<std::size_t> find_corners(const Chain& c, const PixelConfig& cfg) {
  const int k = cfg.corner_arm;
  std::vector<Pixel> p = c.pixels;
  if (c.closed) p.pop_back();
  const int n = static_cast<int>(p.size());
  if (n < 2 * k + 1) return {};
  auto at = [&](int i) { return p[((i % n) + n) % n]; };
  std::vector<double> turn(n, 0.0);
  std::vector<char> eligible(n, 0);
  for (int i = 0; i < n; ++i) {
    if (!c.closed && (i < k || i > n - 1 - k)) continue;
    eligible[i] = 1;
    turn[i] = turn_deg(at(i - k), at(i), at(i + k));
  }
  auto hot = [&](int i) { return eligible[i] && turn[i] >= cfg.corner_min_turn_deg; };
  int start = 0;
  if (c.closed) {
    start = -1;
    for (int i = 0; i < n; ++i)
      if (!hot(i)) {
        start = i;
        break;
      }
    if (start < 0) return {};
  }
  std::vector<std::size_t> corners;
  int i = 0;
  const int span = n;
  while (i < span) {
    const int idx = (start + i) % n;
    if (!hot(idx)) {
      ++i;
      continue;
    }
    std::vector<int> run;
    while (i < span && hot((start + i) % n)) {
      run.push_back((start + i) % n);
      ++i;
    }
    double best = -1;
    for (int r : run) best = std::max(best, turn[r]);
    std::vector<int> ties;
    for (int r : run)
      if (turn[r] >= best - 1e-9) ties.push_back(r);
    corners.push_back(static_cast<std::size_t>(ties[ties.size() / 2]));
  }
  std::sort(corners.begin(), corners.end());
  return corners;
}

}  // namespace

Partition segment_regions(const RasterStructure& r, Exec exec) {
  auto parent = std::make_shared<const Structure>(r.base);
  const auto label = region_labels(r.grid, exec);
  const int count = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::vector<std::size_t>> blocks(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < label.size(); ++i) blocks[static_cast<std::size_t>(label[i])].push_back(i);
  return make_partition(parent, std::move(blocks), false);
}

Structure ink_structure(const Raster& r) {
  Structure s;
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      if (r.at(x, y) > 0) s.add_part(pixel_id(x, y), "v" + std::to_string(r.at(x, y)));
    }
  }
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      if (r.at(x, y) <= 0) continue;
      static const int fwd[4][2] = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};
      for (const auto& d : fwd) {
        const int nx = x + d[0], ny = y + d[1];
        if (!r.inside(nx, ny) || r.at(nx, ny) <= 0) continue;
        s.add_relation(pixel_id(x, y), pixel_id(nx, ny), d[0] != 0 && d[1] != 0 ? "diag" : "adj");
      }
    }
  }
  return s;
}

Partition stroke_partition(const Raster& r, const Strokes& st) {
  auto ink = std::make_shared<const Structure>(ink_structure(st.thinned ? thin(r) : r));
  std::vector<std::vector<std::size_t>> blocks;
  for (const auto& owned : st.owned) {
    blocks.emplace_back();
    for (const auto& p : owned) blocks.back().push_back(ink->require_index(pixel_id(p.x, p.y)));
    std::sort(blocks.back().begin(), blocks.back().end());
  }
  return make_partition(ink, std::move(blocks), true);
}

Raster thin(const Raster& r) {
  Raster out(r.width, r.height, 2);
  for (std::size_t i = 0; i < r.values.size(); ++i) out.values[i] = r.values[i] > 0;
  auto px = [&](int x, int y) { return out.inside(x, y) ? out.at(x, y) : 0; };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<std::pair<int, int>> kill;
      for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
          if (!out.at(x, y)) continue;
          // P2..P9 clockwise from north
          const int n[8] = {px(x, y - 1), px(x + 1, y - 1), px(x + 1, y),     px(x + 1, y + 1),
                            px(x, y + 1), px(x - 1, y + 1), px(x - 1, y), px(x - 1, y - 1)};
          const int b = std::accumulate(n, n + 8, 0);
          if (b < 2 || b > 6) continue;
          int a = 0;
          for (int k = 0; k < 8; ++k) a += n[k] == 0 && n[(k + 1) % 8] == 1;
          if (a != 1) continue;
          if (pass == 0 ? (n[0] * n[2] * n[4] == 0 && n[2] * n[4] * n[6] == 0)
                        : (n[0] * n[2] * n[6] == 0 && n[0] * n[4] * n[6] == 0)) {
            kill.push_back({x, y});
          }
        }
      }
      for (auto [x, y] : kill) out.set(x, y, 0);
      changed = changed || !kill.empty();
    }
  }
  return out;
}

Strokes extract_strokes(const Raster& r, const PixelConfig& cfg) {
  Strokes st;
  Mask m(r);
  if (has_thick_block(m)) {
    m = Mask(thin(r));
    st.thinned = true;
  }
  Graph g = build_graph(m);
  std::vector<std::pair<Pixel, Pixel>> pruned;
  while (prune_spurs(m, g, cfg.spur_max, pruned)) g = build_graph(m);
  merge_short_links(g, cfg.spur_max);

  // Split chains at corners.
  for (const auto& c : g.chains) {
    auto corners = find_corners(c, cfg);
    if (corners.empty()) {
      st.chains.push_back(c);
      continue;
    }
    std::vector<int> corner_vertex;
    for (auto idx : corners) {
      StrokeVertex v;
      v.kind = VertexKind::Corner;
      v.pixels = {c.pixels[idx]};
      corner_vertex.push_back(static_cast<int>(g.vertices.size()));
      g.vertices.push_back(std::move(v));
    }
    if (c.closed) {
      const std::size_t n = c.pixels.size() - 1;
      for (std::size_t s = 0; s < corners.size(); ++s) {
        const std::size_t a = corners[s], b = corners[(s + 1) % corners.size()];
        Chain part;
        part.start_vertex = corner_vertex[s];
        part.end_vertex = corner_vertex[(s + 1) % corners.size()];
        std::size_t i = a;
        part.pixels.push_back(c.pixels[i]);
        do {
          i = (i + 1) % n;
          part.pixels.push_back(c.pixels[i]);
        } while (i != b);
        st.chains.push_back(std::move(part));
      }
    } else {
      std::size_t from = 0;
      int from_vertex = c.start_vertex;
      for (std::size_t s = 0; s <= corners.size(); ++s) {
        const std::size_t to = s < corners.size() ? corners[s] : c.pixels.size() - 1;
        Chain part;
        part.start_vertex = from_vertex;
        part.end_vertex = s < corners.size() ? corner_vertex[s] : c.end_vertex;
        part.pixels.assign(c.pixels.begin() + static_cast<std::ptrdiff_t>(from),
                           c.pixels.begin() + static_cast<std::ptrdiff_t>(to) + 1);
        from = to;
        from_vertex = part.end_vertex;
        st.chains.push_back(std::move(part));
      }
    }
  }
  for (auto& v : g.vertices) v.chains.clear();
  for (int i = 0; i < static_cast<int>(st.chains.size()); ++i) {
    const auto& c = st.chains[i];
    if (c.start_vertex >= 0) g.vertices[c.start_vertex].chains.push_back(i);
    if (c.end_vertex >= 0 && c.end_vertex != c.start_vertex) g.vertices[c.end_vertex].chains.push_back(i);
  }
  // Drop vertices nothing refers to any more, renumbering the rest.
  std::vector<int> remap(g.vertices.size(), -1);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].chains.empty()) continue;
    remap[v] = static_cast<int>(st.vertices.size());
    st.vertices.push_back(g.vertices[v]);
  }
  for (auto& c : st.chains) {
    if (c.start_vertex >= 0) c.start_vertex = remap[c.start_vertex];
    if (c.end_vertex >= 0) c.end_vertex = remap[c.end_vertex];
  }

  // Ownership: chain interiors, then vertex pixels to the most horizontal
  // incident chain.
  st.owned.resize(st.chains.size());
  std::vector<int> fold(st.chains.size(), 0);
  for (std::size_t i = 0; i < st.chains.size(); ++i) {
    const auto& px = st.chains[i].pixels;
    if (st.chains[i].start_vertex < 0) {
      st.owned[i].assign(px.begin(), px.end() - 1);  // vertex-free loop
      continue;
    }
    if (px.size() > 2) st.owned[i].assign(px.begin() + 1, px.end() - 1);
    if (px.size() >= 2) {
      const int half = cfg.orientation_bins / 2;
      const int b = classify_segment(px, cfg).orientation_bin;
      fold[i] = std::min(b, half - b);
    }
  }
  for (const auto& v : st.vertices) {
    int best = v.chains.front();
    for (int c : v.chains) {
      if (fold[c] < fold[best]) best = c;
    }
    for (const auto& p : v.pixels) st.owned[best].push_back(p);
  }
  std::map<Pixel, int> owner;
  for (std::size_t i = 0; i < st.owned.size(); ++i)
    for (const auto& p : st.owned[i]) owner[p] = static_cast<int>(i);
  for (const auto& [p, anchor] : pruned) {
    auto it = owner.find(anchor);
    if (it == owner.end()) continue;
    owner[p] = it->second;
    st.owned[it->second].push_back(p);
  }
  for (auto& o : st.owned) {
    std::sort(o.begin(), o.end(), [](Pixel a, Pixel b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
  }
  return st;
}

LineFit fit_line(const std::vector<Pixel>& pixels) {
  if (pixels.empty()) throw PreconditionError("cannot fit a line to no pixels");
  LineFit f;
  const double n = static_cast<double>(pixels.size());
  for (const auto& p : pixels) {
    f.cx += p.x;
    f.cy -= p.y;
  }
  f.cx /= n;
  f.cy /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& p : pixels) {
    const double x = p.x - f.cx, y = -p.y - f.cy;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double theta = 0.5 * std::atan2(2 * sxy, sxx - syy);
  f.dx = std::cos(theta);
  f.dy = std::sin(theta);
  for (const auto& p : pixels) {
    const double x = p.x - f.cx, y = -p.y - f.cy;
    f.max_deviation = std::max(f.max_deviation, std::abs(x * f.dy - y * f.dx));
  }
  return f;
}

std::optional<std::pair<double, double>> intersect(const LineFit& a, const LineFit& b) {
  const double det = a.dx * b.dy - a.dy * b.dx;
  if (std::abs(det) < 1e-6) return std::nullopt;
  const double t = ((b.cx - a.cx) * b.dy - (b.cy - a.cy) * b.dx) / det;
  return std::make_pair(a.cx + t * a.dx, a.cy + t * a.dy);
}

SegmentFeatures classify_segment(const std::vector<Pixel>& chain, const PixelConfig& cfg) {
  if (chain.size() < 2) throw PreconditionError("segment needs at least two pixels");
  SegmentFeatures f;
  const Pixel a = chain.front(), b = chain.back();
  f.length = std::hypot(b.x - a.x, b.y - a.y);
  if (f.length == 0) {
    // A closed loop has no direction.
    for (const auto& p : chain) f.max_deviation = std::max(f.max_deviation, std::hypot(p.x - a.x, p.y - a.y));
    f.curvature_bin = 3;
    return f;
  }
  // End pixels may sit in a junction cluster; fit on the interior when
  // there is one.
  const bool trim = chain.size() >= 5;
  const LineFit line = fit_line(trim ? std::vector<Pixel>(chain.begin() + 1, chain.end() - 1) : chain);
  f.max_deviation = line.max_deviation;
  f.straightness = std::clamp(1.0 - f.max_deviation / cfg.max_chord_deviation, 0.0, 1.0);
  f.length_bin = static_cast<int>(std::floor(std::log2(f.length)));
  double deg = std::atan2(line.dy, line.dx) * 180.0 / kPi;
  while (deg < 0) deg += 180.0;
  while (deg >= 180.0) deg -= 180.0;
  f.orientation_deg = deg;
  const double bin_width = 360.0 / cfg.orientation_bins;
  f.orientation_bin = static_cast<int>(std::lround(deg / bin_width)) % (cfg.orientation_bins / 2);
  f.curvature_bin = f.max_deviation < 0.5 ? 0 : f.max_deviation < 1.5 ? 1 : f.max_deviation < 3.0 ? 2 : 3;
  return f;
}

double joint_angle_deg(const Chain& a, const Chain& b, int vertex) {
  auto arm = [&](const Chain& c) {
    if (c.start_vertex == vertex) return std::make_pair(c.pixels.front(), c.pixels.back());
    if (c.end_vertex == vertex) return std::make_pair(c.pixels.back(), c.pixels.front());
    throw PreconditionError("chain does not touch the vertex");
  };
  auto [pa, fa] = arm(a);
  auto [pb, fb] = arm(b);
  const double ux = fa.x - pa.x, uy = fa.y - pa.y, vx = fb.x - pb.x, vy = fb.y - pb.y;
  const double nu = std::hypot(ux, uy), nv = std::hypot(vx, vy);
  if (nu == 0 || nv == 0) return 0;
  return std::acos(std::clamp((ux * vx + uy * vy) / (nu * nv), -1.0, 1.0)) * 180.0 / kPi;
}

}  // namespace sc
