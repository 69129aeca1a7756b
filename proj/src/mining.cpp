#include "sc/mining.hpp"

#include <algorithm>
#include <map>
#include <iterator>
#include <random>

#include "sc/error.hpp"

namespace sc {

namespace {

struct Timeline {
  Tick t0 = 0;
  std::size_t length = 0;
  std::vector<std::string> subjects;             // sorted
  std::vector<std::vector<std::uint32_t>> prefix;  // prefix[s][i] = #ticks < i with s recognised

  std::uint32_t count(std::size_t s, std::int64_t lo, std::int64_t hi) const {
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(length) - 1);
    if (lo > hi) return 0;
    return prefix[s][hi + 1] - prefix[s][lo];
  }
};

Timeline build_timeline(const RecognitionLog& log, double min_score) {
  Timeline tl;
  tl.t0 = log.front().t;
  tl.length = static_cast<std::size_t>(log.back().t - tl.t0 + 1);
  std::map<std::string, std::size_t> index;
  for (const auto& r : log) index.emplace(r.subject, 0);
  for (auto& [name, i] : index) {
    i = tl.subjects.size();
    tl.subjects.push_back(name);
  }
  std::vector<std::vector<char>> present(tl.subjects.size(), std::vector<char>(tl.length, 0));
  for (const auto& r : log) {
    if (r.score >= min_score) present[index[r.subject]][static_cast<std::size_t>(r.t - tl.t0)] = 1;
  }
  tl.prefix.assign(tl.subjects.size(), std::vector<std::uint32_t>(tl.length + 1, 0));
  for (std::size_t s = 0; s < tl.subjects.size(); ++s) {
    for (std::size_t i = 0; i < tl.length; ++i) tl.prefix[s][i + 1] = tl.prefix[s][i] + present[s][i];
  }
  return tl;
}

struct Literal {
  std::size_t subject;
  bool positive;
};

std::string literal_name(const Timeline& tl, const Literal& l) {
  return (l.positive ? "" : "!") + tl.subjects[l.subject];
}

bool literal_holds(const Timeline& tl, const Literal& l, std::size_t i, const MiningConfig& cfg) {
  const auto t = static_cast<std::int64_t>(i);
  if (l.positive) return tl.count(l.subject, t - cfg.cond_window, t) > 0;
  // Absence needs the whole window inside the log.
  return t >= cfg.neg_window && tl.count(l.subject, t - cfg.neg_window, t) == 0;
}

std::vector<std::vector<Literal>> enumerate_conditions(std::size_t subjects, std::size_t max_size) {
  std::vector<std::vector<Literal>> out;
  std::vector<Literal> cur;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (!cur.empty()) out.push_back(cur);
    if (cur.size() == max_size) return;
    for (std::size_t s = from; s < subjects; ++s) {
      for (bool pos : {true, false}) {
        cur.push_back({s, pos});
        self(self, s + 1);
        cur.pop_back();
      }
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<AssociativeRule> rules_for_condition(const Timeline& tl, const std::vector<Literal>& cond,
                                                 const MiningConfig& cfg) {
  const std::size_t last = tl.length > static_cast<std::size_t>(cfg.window)
                               ? tl.length - 1 - static_cast<std::size_t>(cfg.window)
                               : 0;
  if (tl.length <= static_cast<std::size_t>(cfg.window)) return {};
  std::vector<std::size_t> onsets;
  bool before = false;
  for (std::size_t i = 0; i <= last; ++i) {
    bool holds = true;
    for (const auto& l : cond) {
      if (!literal_holds(tl, l, i, cfg)) {
        holds = false;
        break;
      }
    }
    if (holds && !before) onsets.push_back(i);
    before = holds;
  }
  if (onsets.size() < cfg.min_support) return {};
  std::string cond_name;
  MicroSituation ms;
  for (const auto& l : cond) {
    if (!cond_name.empty()) cond_name += " & ";
    cond_name += literal_name(tl, l);
    ms.members.push_back(Member{tl.subjects[l.subject], l.positive, cfg.min_score,
                                -static_cast<Tick>(l.positive ? cfg.cond_window : cfg.neg_window), 0});
  }
  std::vector<AssociativeRule> out;
  for (std::size_t x = 0; x < tl.subjects.size(); ++x) {
    if (std::any_of(cond.begin(), cond.end(), [&](const Literal& l) { return l.subject == x; })) continue;
    std::uint64_t hits = 0;
    for (auto i : onsets) {
      const auto t = static_cast<std::int64_t>(i);
      hits += tl.count(x, t + 1, t + cfg.window) > 0;
    }
    const double p = laplace(hits, onsets.size());
    if (p < cfg.min_p) continue;
    AssociativeRule r;
    r.name = cond_name + " => " + tl.subjects[x];
    r.condition = ms;
    r.consequent = {Consequent{tl.subjects[x], 1, cfg.window}};
    r.p = p;
    r.support = onsets.size();
    r.hits = hits;
    r.smoothed = true;
    r.threshold = cfg.min_score;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<AssociativeRule> mine_rules(const RecognitionLog& log, const MiningConfig& cfg, Exec exec) {
  if (log.empty()) throw PreconditionError("cannot mine an empty log");
  if (cfg.window < 1 || cfg.cond_window < 0 || cfg.neg_window < 0) throw PreconditionError("bad mining windows");
  const Timeline tl = build_timeline(log, cfg.min_score);
  const auto conditions = enumerate_conditions(tl.subjects.size(), cfg.max_condition);
  std::vector<std::vector<AssociativeRule>> found(conditions.size());
  const auto n = static_cast<std::int64_t>(conditions.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t c = 0; c < n; ++c) found[c] = rules_for_condition(tl, conditions[c], cfg);
  } else {
    for (std::int64_t c = 0; c < n; ++c) found[c] = rules_for_condition(tl, conditions[c], cfg);
  }
  std::vector<AssociativeRule> out;
  for (auto& f : found) std::move(f.begin(), f.end(), std::back_inserter(out));
  std::sort(out.begin(), out.end(), [](const AssociativeRule& a, const AssociativeRule& b) {
    if (a.p != b.p) return a.p > b.p;
    if (a.support != b.support) return a.support > b.support;
    return a.name < b.name;
  });
  return out;
}

std::vector<Validation> validate_rule(const AssociativeRule& rule, std::size_t rule_index, const RecognitionLog& log,
                                      double min_score) {
  std::vector<Validation> out;
  if (log.empty()) return out;
  Tick window_lo = 0, window_hi = 0;
  for (const auto& m : rule.condition.members) window_lo = std::min(window_lo, m.lo);
  for (const auto& c : rule.consequent) window_hi = std::max(window_hi, c.hi);
  const Tick first = log.front().t - window_lo;  // full condition history available
  const Tick last = log.back().t - window_hi;
  bool before = false;
  for (Tick t = first; t <= last; ++t) {
    const bool fires = eval_rule(rule, log, t).has_value();
    if (fires && !before) {
      bool hit = true;
      for (const auto& c : rule.consequent) {
        bool seen = false;
        for (const auto& r : log) {
          if (r.t > t + c.hi) break;
          if (r.subject == c.subject && r.t >= t + c.lo && r.score >= min_score) seen = true;
        }
        hit = hit && seen;
      }
      out.push_back({rule_index, t, hit});
    }
    before = fires;
  }
  return out;
}

RecognitionLog planted_log(std::uint64_t seed, std::size_t trials, double p, int window) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RecognitionLog log;
  const Tick spacing = 2 * window + 4;
  for (std::size_t k = 0; k < trials; ++k) {
    const Tick t = static_cast<Tick>(k + 1) * spacing;
    log.push_back({"A", 0.9, t});
    if (u(rng) < p) log.push_back({"X", 0.9, t + 1 + static_cast<Tick>(rng() % window)});
  }
  return log;
}

RecognitionLog independent_log(std::uint64_t seed, std::size_t subjects, Tick ticks, double rate) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RecognitionLog log;
  for (Tick t = 0; t < ticks; ++t) {
    for (std::size_t s = 0; s < subjects; ++s) {
      if (u(rng) < rate) log.push_back({"e" + std::to_string(s), 0.9, t});
    }
  }
  return log;
}

RecognitionLog drought_log(std::uint64_t seed, std::size_t droughts, int neg_window, int window, double p) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RecognitionLog log;
  Tick t = 0;
  for (std::size_t d = 0; d < droughts; ++d) {
    // Wet spell: W at least every other tick, ending with a W.
    const Tick wet = 10 + static_cast<Tick>(rng() % 11);
    Tick last_w = t - 1;
    for (Tick k = 0; k < wet; ++k, ++t) {
      if (k + 1 == wet || t - last_w >= 2 || u(rng) < 0.6) {
        log.push_back({"W", 0.9, t});
        last_w = t;
      }
    }
    // Dry spell long enough for the absence window to close and D to follow.
    const Tick onset = last_w + neg_window + 1;
    if (u(rng) < p) log.push_back({"D", 0.9, onset + 1 + static_cast<Tick>(rng() % window)});
    t = onset + window + 1 + static_cast<Tick>(rng() % 4);
  }
  log.push_back({"W", 0.9, t});
  std::stable_sort(log.begin(), log.end(), [](const Recognition& a, const Recognition& b) { return a.t < b.t; });
  return log;
}

}  // namespace sc
