#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "sc/canonical.hpp"
#include "sc/config.hpp"
#include "sc/corpus.hpp"
#include "sc/derivation.hpp"
#include "sc/error.hpp"
#include "sc/mining.hpp"
#include "sc/raster.hpp"
#include "sc/report.hpp"
#include "sc/solver.hpp"
#include "sc/struct_io.hpp"

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kInternal = 3 };

struct Options {
  std::uint64_t seed = 42;
  bool seed_given = false;
  std::string config_path;
  std::string out;
};

sc::Config load_config(const Options& o) {
  sc::Config cfg;
  if (!o.config_path.empty()) cfg.merge_json(sc::read_file(o.config_path));
  if (o.seed_given) cfg.seed = o.seed;
  return cfg;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    sc::write_file(o.out, text);
  }
}

int cmd_iso(const Options& o, const std::string& a_path, const std::string& b_path) {
  const auto cfg = load_config(o);
  const auto a = sc::parse_struct(sc::read_file(a_path));
  const auto b = sc::parse_struct(sc::read_file(b_path));
  const auto r = sc::isomorphic(a, b);
  emit(o, sc::dump(sc::iso_report(a, b, r, cfg)));
  return r.isomorphic ? kOk : kNegative;
}

int cmd_derive(const Options& o, const std::string& struct_path, const std::string& sidecar_path) {
  const auto cfg = load_config(o);
  auto s = std::make_shared<const sc::Structure>(sc::parse_struct(sc::read_file(struct_path)));
  sc::require_valid(*s);
  sc::Structure out = *s;
  if (sidecar_path.empty()) {
    // No recipe: propose the canonical partitions.
    sc::json j;
    j["partitions"] = sc::json::array();
    for (const auto& k : sc::canonical_partitions(s, cfg.derivation.max_partitions)) {
      j["partitions"].push_back(sc::structure_json(sc::quotient(k)));
    }
    j["config"] = sc::config_json(cfg);
    emit(o, sc::dump(j));
    return kOk;
  }
  const auto side = sc::parse_sidecar(sc::read_file(sidecar_path));
  if (!side.blocks.empty()) {
    std::vector<std::vector<std::size_t>> blocks;
    for (const auto& ids : side.blocks) {
      blocks.emplace_back();
      for (const auto& id : ids) blocks.back().push_back(s->require_index(id));
    }
    out = sc::quotient(sc::make_partition(s, std::move(blocks)));
  }
  if (!side.mask.empty()) out = sc::apply_morphism(out, side.mask);
  emit(o, sc::serialize_struct(out));
  return kOk;
}

int cmd_analyze(const Options& o, const std::string& image) {
  const auto cfg = load_config(o);
  const auto rs = sc::load_raster(sc::read_file(image), cfg.pixel.levels);
  const auto res = sc::analyze_item(rs.grid, cfg);
  emit(o, sc::dump(sc::analysis_report(rs.grid, res, cfg)));
  return res.analysis.polygon && res.analysis.problems.empty() ? kOk : kNegative;
}

int cmd_mine(const Options& o, const std::string& log_path) {
  const auto cfg = load_config(o);
  const auto log = sc::parse_log(sc::read_file(log_path));
  const auto rules = sc::mine_rules(log, cfg.mining);
  emit(o, sc::dump(sc::rules_report(rules, cfg)));
  return rules.empty() ? kNegative : kOk;
}

int cmd_solve(const Options& o, const std::string& problem_path) {
  const auto cfg = load_config(o);
  sc::json j;
  try {
    j = sc::json::parse(sc::read_file(problem_path));
  } catch (const sc::json::parse_error& e) {
    throw sc::ParseError(0, std::string("problem is not valid JSON: ") + e.what());
  }
  const auto p = sc::problem_from_json(j, cfg.schema.fuel);
  const auto r = sc::solve(p, cfg.solver.budget);
  emit(o, sc::dump(sc::search_report(r, cfg)));
  return r.status == sc::SearchStatus::Solved ? kOk : kNegative;
}

int cmd_demo(const Options& o) {
  const auto cfg = load_config(o);
  const std::string dir = o.out.empty() ? "demo-polygons" : o.out;
  std::filesystem::create_directories(dir);
  const auto items = sc::polygon_corpus(cfg.seed);
  const auto results = sc::analyze_corpus(items, cfg);
  for (const auto& it : items) sc::write_file(dir + "/" + it.name + ".pbm", sc::write_pbm(it.raster));
  const auto report = sc::corpus_report(items, results, cfg);
  sc::write_file(dir + "/report.json", sc::dump(report));
  const auto& sum = report.at("summary");
  std::cout << "items " << sum.at("items") << " correct " << sum.at("correct") << " scale-consistent figures "
            << sum.at("scale_consistent_figures") << "/" << sum.at("figures") << "\n";
  const bool ok = sum.at("correct") == sum.at("items") && sum.at("scale_consistent_figures") == sum.at("figures");
  return ok ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structcalc: structural descriptions, derivations, rules and search"};
  app.require_subcommand(1);
  Options o;
  auto* seed = app.add_option("--seed", o.seed, "seed for randomized batteries and corpora");
  app.add_option("--config", o.config_path, "JSON config overrides");
  app.add_option("--out", o.out, "output file (demo-polygons: output directory)");

  std::string a, b, input;
  auto* iso = app.add_subcommand("iso", "exit 0 iff the two .struct files are isomorphic");
  iso->add_option("a", a)->required();
  iso->add_option("b", b)->required();
  auto* derive = app.add_subcommand("derive", "quotient/morphism from a sidecar, or list canonical partitions");
  derive->add_option("struct", a)->required();
  derive->add_option("sidecar", b);
  auto* analyze = app.add_subcommand("analyze", "polygon pipeline report for a PBM/PGM image");
  analyze->add_option("image", input)->required();
  auto* mine = app.add_subcommand("mine", "mine associative rules from a recognition log");
  mine->add_option("log", input)->required();
  auto* solve = app.add_subcommand("solve", "solve a production-system problem file");
  solve->add_option("problem", input)->required();
  auto* demo = app.add_subcommand("demo-polygons", "generate and analyze the synthetic polygon corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  o.seed_given = seed->count() > 0;

  try {
    if (*iso) return cmd_iso(o, a, b);
    if (*derive) return cmd_derive(o, a, b);
    if (*analyze) return cmd_analyze(o, input);
    if (*mine) return cmd_mine(o, input);
    if (*solve) return cmd_solve(o, input);
    if (*demo) return cmd_demo(o);
  } catch (const sc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const sc::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const sc::PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const sc::LimitError& e) {
    std::cerr << "limit exceeded: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
