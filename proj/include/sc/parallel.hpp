#pragma once

#include <vector>

#include "sc/canonical.hpp"
#include "sc/raster.hpp"

namespace sc {

// Kernels come in two flavours: an OpenMP one and a plain serial reference
// kept for testing. Both must produce identical results.
enum class Exec { Serial, Parallel };

// Canonical forms of many structures at once.
std::vector<CanonicalForm> canonical_forms(const std::vector<Structure>& items, Exec exec = Exec::Parallel);

// 4-connected equal-value component labels, numbered by first pixel in
// raster order.
std::vector<int> region_labels(const Raster& r, Exec exec = Exec::Parallel);

int worker_threads();

}  // namespace sc
