#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sc/config.hpp"
#include "sc/parallel.hpp"
#include "sc/rules.hpp"

namespace sc {

// Candidate rules "C => X" with |C| <= max_condition literals. A positive
// literal holds at t when the subject was recognised (score >= min_score)
// in [t - cond_window, t]; a negative literal holds when it was not
// recognised in [t - neg_window, t]. Counting runs over condition onsets
// (first tick of each maximal run where C holds) whose consequent window
// [t + 1, t + window] lies inside the log. p is Laplace-smoothed.
// Ranked by p desc, support desc, name.
std::vector<AssociativeRule> mine_rules(const RecognitionLog& log, const MiningConfig& cfg,
                                        Exec exec = Exec::Parallel);

// Hit/miss records of a rule on a (held-out) log, one per firing onset.
std::vector<Validation> validate_rule(const AssociativeRule& rule, std::size_t rule_index, const RecognitionLog& log,
                                      double min_score);

// Synthetic logs.
// A at isolated ticks; X follows within [1, window] with probability p.
RecognitionLog planted_log(std::uint64_t seed, std::size_t trials, double p, int window);
// Every subject recognised independently at each tick with probability `rate`.
RecognitionLog independent_log(std::uint64_t seed, std::size_t subjects, Tick ticks, double rate);
// W (watering) recognised frequently, interrupted by droughts of at least
// `drought` ticks; D (dry plants) follows a drought onset within [1, window]
// with probability p and never appears otherwise.
RecognitionLog drought_log(std::uint64_t seed, std::size_t droughts, int neg_window, int window, double p);

}  // namespace sc
