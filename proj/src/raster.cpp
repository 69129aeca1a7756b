#include "sc/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <tuple>

#include "sc/error.hpp"

namespace sc {

Raster::Raster(int w, int h, int lv) : width(w), height(h), levels(lv) {
  if (w <= 0 || h <= 0) throw PreconditionError("raster dimensions must be positive");
  values.assign(static_cast<std::size_t>(w) * h, 0);
}

std::string pixel_id(int x, int y) { return "p" + std::to_string(x) + "_" + std::to_string(y); }

Structure raster_base_structure(const Raster& r) {
  Structure s;
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) s.add_part(pixel_id(x, y), "v" + std::to_string(r.at(x, y)));
  }
  auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * r.width + x; };
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      if (x + 1 < r.width) s.add_relation(idx(x, y), idx(x + 1, y), "adj");
      if (y + 1 < r.height) s.add_relation(idx(x, y), idx(x, y + 1), "adj");
    }
  }
  return s;
}

std::optional<Raster> raster_from_base(const Structure& s) {
  if (s.empty() || s.oriented()) return std::nullopt;
  int w = 0, h = 0;
  std::vector<std::tuple<int, int, int>> px;
  for (const auto& p : s.parts()) {
    int x = 0, y = 0, v = 0;
    char tail = 0;
    if (std::sscanf(p.id.c_str(), "p%d_%d%c", &x, &y, &tail) != 2 || x < 0 || y < 0) return std::nullopt;
    if (std::sscanf(p.type.c_str(), "v%d%c", &v, &tail) != 1 || v < 0 || !p.attrs.empty()) return std::nullopt;
    w = std::max(w, x + 1);
    h = std::max(h, y + 1);
    px.emplace_back(x, y, v);
  }
  if (static_cast<std::size_t>(w) * h != s.size()) return std::nullopt;
  int levels = 2;
  for (const auto& [x, y, v] : px) levels = std::max(levels, v + 1);
  Raster r(w, h, levels);
  std::vector<char> seen(s.size(), 0);
  for (const auto& [x, y, v] : px) {
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    if (seen[i]++) return std::nullopt;
    r.values[i] = v;
  }
  if (!raster_base_structure(r).identical(s)) {
    // Same pixels, but relations or part order differ from a raster grid.
    Structure expected = raster_base_structure(r);
    if (expected.relations().size() != s.relations().size()) return std::nullopt;
    for (const auto& rel : s.relations()) {
      const auto& a = s.part(rel.from).id;
      const auto& b = s.part(rel.to).id;
      if (rel.label != "adj" || !rel.attrs.empty()) return std::nullopt;
      int ax, ay, bx, by;
      std::sscanf(a.c_str(), "p%d_%d", &ax, &ay);
      std::sscanf(b.c_str(), "p%d_%d", &bx, &by);
      if (std::abs(ax - bx) + std::abs(ay - by) != 1) return std::nullopt;
    }
  }
  return r;
}

namespace {

// Tokenizer for ASCII netpbm: whitespace separated, '#' comments to end of line.
class PnmReader {
 public:
  explicit PnmReader(std::string_view text) : text_(text) {}

  std::string token() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '#') {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  // P1 allows pixels without separating whitespace.
  int bit() {
    skip();
    if (pos_ >= text_.size()) throw ParseError(line(), "truncated pixel data");
    char c = text_[pos_++];
    if (c != '0' && c != '1') throw ParseError(line(), std::string("bad PBM pixel '") + c + "'");
    return c - '0';
  }

  long number(const char* what) {
    auto t = token();
    if (t.empty()) throw ParseError(line(), std::string("truncated: missing ") + what);
    char* end = nullptr;
    long v = std::strtol(t.c_str(), &end, 10);
    if (*end != '\0') throw ParseError(line(), std::string("bad ") + what + " '" + t + "'");
    return v;
  }

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  int line() const { return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + pos_, '\n')); }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

RasterStructure load_raster(std::string_view bytes, int levels) {
  if (levels < 2) throw PreconditionError("need at least two intensity levels");
  PnmReader in(bytes);
  const std::string magic = in.token();
  if (magic != "P1" && magic != "P2") throw ParseError(in.line(), "expected P1 or P2 header, got '" + magic + "'");
  const long w = in.number("width");
  const long h = in.number("height");
  if (w <= 0 || h <= 0 || w > 4096 || h > 4096) throw ParseError(in.line(), "bad raster dimensions");
  Raster r(static_cast<int>(w), static_cast<int>(h), magic == "P1" ? 2 : levels);
  if (magic == "P1") {
    for (auto& v : r.values) v = in.bit();
  } else {
    const long maxval = in.number("maxval");
    if (maxval <= 0 || maxval > 65535) throw ParseError(in.line(), "bad maxval");
    for (auto& v : r.values) {
      if (in.at_end()) throw ParseError(in.line(), "truncated pixel data");
      long g = in.number("pixel");
      if (g < 0 || g > maxval) throw ParseError(in.line(), "pixel value out of range");
      v = static_cast<int>((maxval - g) * levels / (maxval + 1));
    }
  }
  if (!in.at_end()) throw ParseError(in.line(), "trailing data after pixels");
  RasterStructure rs{r, raster_base_structure(r)};
  return rs;
}

std::string write_pbm(const Raster& r) {
  std::string out = "P1\n" + std::to_string(r.width) + " " + std::to_string(r.height) + "\n";
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      if (x) out += ' ';
      out += r.at(x, y) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

void draw_line(Raster& r, Point a, Point b, int value) {
  int x0 = static_cast<int>(std::lround(a.x)), y0 = static_cast<int>(std::lround(a.y));
  const int x1 = static_cast<int>(std::lround(b.x)), y1 = static_cast<int>(std::lround(b.y));
  const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    if (r.inside(x0, y0)) r.set(x0, y0, value);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void draw_polygon(Raster& r, const std::vector<Point>& vertices, int value) {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    draw_line(r, vertices[i], vertices[(i + 1) % vertices.size()], value);
  }
}

std::vector<Point> polygon_from_turns(const std::vector<double>& sides, const std::vector<double>& turns_deg,
                                      double rotation_deg, double scale, int w, int h) {
  if (sides.size() != turns_deg.size() || sides.size() < 3) throw PreconditionError("polygon needs at least 3 sides");
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  std::vector<Point> pts;
  double x = 0, y = 0, heading = rotation_deg;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    pts.push_back({x, y});
    x += scale * sides[i] * std::cos(heading * kDeg);
    y += scale * sides[i] * std::sin(heading * kDeg);
    heading += turns_deg[i];
  }
  double cx = 0, cy = 0;
  for (const auto& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  // Flip y so that angles are counter-clockwise on screen.
  for (auto& p : pts) {
    p.x = p.x - cx + w / 2.0;
    p.y = -(p.y - cy) + h / 2.0;
  }
  return pts;
}

}  // namespace sc
