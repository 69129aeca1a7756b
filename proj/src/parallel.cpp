#include "sc/parallel.hpp"

#include <numeric>

#include <omp.h>

namespace sc {

int worker_threads() { return omp_get_max_threads(); }

std::vector<CanonicalForm> canonical_forms(const std::vector<Structure>& items, Exec exec) {
  std::vector<CanonicalForm> out(items.size());
  const auto n = static_cast<std::int64_t>(items.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) out[i] = canonical_form(items[i]);
  } else {
    for (std::int64_t i = 0; i < n; ++i) out[i] = canonical_form(items[i]);
  }
  return out;
}

namespace {

// Renumber so labels follow the first pixel of each component.
void compact(std::vector<int>& labels) {
  std::vector<int> fresh(labels.size(), -1);
  int next = 0;
  for (auto& l : labels) {
    if (fresh[l] < 0) fresh[l] = next++;
    l = fresh[l];
  }
}

std::vector<int> labels_serial(const Raster& r) {
  std::vector<int> label(r.values.size(), -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < label.size(); ++start) {
    if (label[start] >= 0) continue;
    label[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(i % r.width), y = static_cast<int>(i / r.width);
      const int d[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& dd : d) {
        const int nx = x + dd[0], ny = y + dd[1];
        if (!r.inside(nx, ny)) continue;
        const std::size_t j = static_cast<std::size_t>(ny) * r.width + nx;
        if (label[j] < 0 && r.values[j] == r.values[i]) {
          label[j] = next;
          stack.push_back(j);
        }
      }
    }
    ++next;
  }
  return label;
}

std::size_t find(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Runs per row in parallel, then a serial union of vertically touching runs.
std::vector<int> labels_parallel(const Raster& r) {
  const int w = r.width, h = r.height;
  std::vector<std::size_t> run_start(r.values.size());  // pixel -> index of its run's first pixel
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const std::size_t i = row + x;
      run_start[i] = (x > 0 && r.values[i] == r.values[i - 1]) ? run_start[i - 1] : i;
    }
  }
  std::vector<std::size_t> parent(r.values.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (int y = 1; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x, up = i - w;
      if (r.values[i] != r.values[up]) continue;
      const std::size_t a = find(parent, run_start[i]), b = find(parent, run_start[up]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<int> label(r.values.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(label.size()); ++i) {
    std::size_t x = run_start[i];
    while (parent[x] != x) x = parent[x];
    label[i] = static_cast<int>(x);
  }
  compact(label);
  return label;
}

}  // namespace

std::vector<int> region_labels(const Raster& r, Exec exec) {
  return exec == Exec::Parallel ? labels_parallel(r) : labels_serial(r);
}

}  // namespace sc
