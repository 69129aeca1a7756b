#include "sc/config.hpp"

#include <json.hpp>

#include "sc/error.hpp"

namespace sc {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PixelConfig, levels, max_chord_deviation, min_straightness,
                                                corner_arm, corner_min_turn_deg, spur_max, orientation_bins,
                                                joint_bin_deg, signature_threshold)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DerivationConfig, arithmetic_cap, max_partitions)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SchemaConfig, fuel)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RegularityConfig, k_max, k_cap, eps, mask_cap, recipe_budget)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(MiningConfig, window, cond_window, neg_window, max_condition,
                                                min_support, min_p, min_score, validation_threshold)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SolverConfig, budget)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Config, seed, pixel, derivation, schema, regularity, mining, solver)

namespace {

void check_keys(const nlohmann::json& known, const nlohmann::json& given, const std::string& path) {
  if (!given.is_object()) return;
  for (const auto& [k, v] : given.items()) {
    if (!known.contains(k)) throw ValidationError("unknown config key '" + path + k + "'");
    if (known[k].is_object()) {
      if (!v.is_object()) throw ValidationError("config key '" + path + k + "' must be an object");
      check_keys(known[k], v, path + k + ".");
    }
  }
}

}  // namespace

std::string Config::to_json() const { return nlohmann::json(*this).dump(); }

void Config::merge_json(std::string_view text) {
  nlohmann::json patch;
  try {
    patch = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!patch.is_object()) throw ValidationError("config must be a JSON object");
  nlohmann::json current = *this;
  check_keys(current, patch, "");
  current.merge_patch(patch);
  try {
    *this = current.get<Config>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
  if (regularity.k_max > regularity.k_cap) throw ValidationError("regularity.k_max exceeds regularity.k_cap");
  if (regularity.eps <= 0 || regularity.eps > 0.5) throw ValidationError("regularity.eps must lie in (0, 0.5]");
  if (solver.budget == 0) throw ValidationError("solver.budget must be positive");
}

}  // namespace sc
