#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace sc {

struct PixelConfig {
  int levels = 2;                    // intensity bins for PGM input
  double max_chord_deviation = 1.5;  // px; straightness reaches 0 here
  double min_straightness = 0.5;     // below this a chain is not a segment
  int corner_arm = 4;                // px on each side for turning angles
  double corner_min_turn_deg = 35.0;
  int spur_max = 3;                  // junction-to-endpoint chains this short are pruned
  int orientation_bins = 16;         // 22.5 deg each
  double joint_bin_deg = 30.0;
  double signature_threshold = 0.5;
};

struct DerivationConfig {
  std::size_t arithmetic_cap = 64;
  std::size_t max_partitions = 8;
};

struct SchemaConfig {
  std::uint64_t fuel = 1000000;
};

struct RegularityConfig {
  std::size_t k_max = 3;
  std::size_t k_cap = 5;
  double eps = 0.10;
  std::size_t mask_cap = 2;          // attribute families dropped at once
  std::size_t recipe_budget = 4096;  // derivations evaluated before overflow
};

struct MiningConfig {
  int window = 5;       // consequent offsets [1, window]
  int cond_window = 3;  // condition members recognised in [t - cond_window, t]
  int neg_window = 5;   // negated members absent in [t - neg_window, t]
  std::size_t max_condition = 3;
  std::size_t min_support = 30;
  double min_p = 0.7;
  double min_score = 0.5;
  double validation_threshold = 0.7;
};

struct SolverConfig {
  std::size_t budget = 100000;
};

// Every tunable in one place; echoed into reports.
struct Config {
  std::uint64_t seed = 42;
  PixelConfig pixel;
  DerivationConfig derivation;
  SchemaConfig schema;
  RegularityConfig regularity;
  MiningConfig mining;
  SolverConfig solver;

  std::string to_json() const;
  // Applies the keys present in a JSON object; unknown keys are an error.
  void merge_json(std::string_view text);
};

}  // namespace sc
