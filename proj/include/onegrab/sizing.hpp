#pragma once

#include <cstdint>
#include <functional>

#include "onegrab/model.hpp"

namespace onegrab {

enum class SizingMethod { bound, exact, mc };

const char* to_string(SizingMethod method);

// Knobs for the Monte Carlo sizing path.
struct McOptions {
  std::int64_t trials = 200;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency
};

struct SizingResult {
  std::int64_t r = 0;
  SizingMethod method = SizingMethod::bound;
  // Bound value / exact probability / empirical fraction achieved at r.
  double achieved = 0.0;
  std::int64_t evaluations = 0;  // predicate calls (mc: simulated trials)
  bool fallback_used = false;    // linear scan replaced the binary search
  bool tail_substitution_used = false;  // a Delta_i used the exact tail
  BoundVariant variant;                 // meaningful for the bound method
};

struct SearchResult {
  std::int64_t value = 0;
  std::int64_t evaluations = 0;
  bool fallback_used = false;
};

// Minimal x in [lo, hi] with predicate(x) true, assuming the predicate is
// monotone non-decreasing. Binary search; predicate values are memoized.
// With verify set, additionally checks predicate(x-1) is false and probes 8
// evenly spaced points for consistency with monotonicity; any violation
// triggers a linear scan from lo (fallback flag set, smallest true x wins).
// Throws Infeasible when predicate(hi) is false, DomainError when lo > hi.
SearchResult find_min_true(std::int64_t lo, std::int64_t hi,
                           const std::function<bool(std::int64_t)>& predicate,
                           bool verify);

// Minimal grab size r with the method's success criterion >= req.confidence.
// Search domain is [C*eps, N] (pigeonhole prunes everything below C*eps).
//   bound: joint_lower_bound(...).joint_lower_bound >= P, verify on
//   exact: joint_success_exact(...) >= P, verify off (proven monotone)
//   mc:    coverage-time quantile estimator (montecarlo::estimate_min_r)
// eps = 0 short-circuits to r = 0 with achieved = 1. Throws Infeasible when
// eps exceeds some structure size or no r <= N satisfies the criterion.
SizingResult min_grab_size(const PopulationSpec& spec, const Requirement& req,
                           SizingMethod method,
                           const BoundVariant& variant = {},
                           const McOptions& mc = {});

}  // namespace onegrab
