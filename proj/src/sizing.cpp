#include "onegrab/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "onegrab/bounds.hpp"
#include "onegrab/hypergeom.hpp"
#include "onegrab/montecarlo.hpp"

namespace onegrab {

const char* to_string(SizingMethod method) {
  switch (method) {
    case SizingMethod::bound: return "bound";
    case SizingMethod::exact: return "exact";
    case SizingMethod::mc: return "mc";
  }
  return "unknown";
}

SearchResult find_min_true(std::int64_t lo, std::int64_t hi,
                           const std::function<bool(std::int64_t)>& predicate,
                           bool verify) {
  if (lo > hi) throw DomainError("find_min_true: empty search range");

  SearchResult result{};
  std::map<std::int64_t, bool> memo;
  auto eval = [&](std::int64_t r) {
    auto it = memo.find(r);
    if (it != memo.end()) return it->second;
    const bool value = predicate(r);
    ++result.evaluations;
    memo.emplace(r, value);
    return value;
  };

  if (!eval(hi)) {
    throw Infeasible("predicate is false over the whole search range");
  }

  std::int64_t low = lo;
  std::int64_t high = hi;
  if (eval(lo)) {
    high = lo;
  }
  while (low < high) {
    const std::int64_t mid = low + (high - low) / 2;
    if (eval(mid)) {
      high = mid;
    } else {
      low = mid + 1;
    }
  }
  result.value = high;

  if (verify) {
    bool consistent = result.value == lo || !eval(result.value - 1);
    if (consistent && hi > lo) {
      // Spot checks: a non-monotone predicate shows up as a false value at or
      // above the answer, or a true value below it.
      for (int i = 0; i < 8 && consistent; ++i) {
        const std::int64_t probe =
            lo + static_cast<std::int64_t>(
                     std::llround(static_cast<double>(i) *
                                  static_cast<double>(hi - lo) / 7.0));
        const bool value = eval(probe);
        if (probe >= result.value && !value) consistent = false;
        if (probe < result.value && value) consistent = false;
      }
    }
    if (!consistent) {
      result.fallback_used = true;
      for (std::int64_t r = lo; r <= hi; ++r) {
        if (eval(r)) {
          result.value = r;
          break;
        }
      }
    }
  }
  return result;
}

SizingResult min_grab_size(const PopulationSpec& spec, const Requirement& req,
                           SizingMethod method, const BoundVariant& variant,
                           const McOptions& mc) {
  SizingResult out{};
  out.method = method;
  out.variant = variant;

  if (req.dof == 0) {
    out.r = 0;
    out.achieved = 1.0;
    out.evaluations = 1;
    return out;
  }
  if (req.dof > spec.min_structure_size()) {
    throw Infeasible("a structure has fewer than dof points; no grab size works");
  }

  const std::int64_t lo = spec.structure_count() * req.dof;
  const std::int64_t hi = spec.total_points;

  switch (method) {
    case SizingMethod::bound: {
      auto predicate = [&](std::int64_t r) {
        return joint_lower_bound(spec, req.dof, r, variant).joint_lower_bound >=
               req.confidence;
      };
      const SearchResult search = find_min_true(lo, hi, predicate, true);
      out.r = search.value;
      out.evaluations = search.evaluations;
      out.fallback_used = search.fallback_used;
      const BoundBreakdown final_breakdown =
          joint_lower_bound(spec, req.dof, out.r, variant);
      out.achieved = final_breakdown.joint_lower_bound;
      out.tail_substitution_used = final_breakdown.any_fallback();
      return out;
    }
    case SizingMethod::exact: {
      auto predicate = [&](std::int64_t r) {
        return joint_success_exact(spec, req.dof, r).linear >= req.confidence;
      };
      const SearchResult search = find_min_true(lo, hi, predicate, false);
      out.r = search.value;
      out.evaluations = search.evaluations;
      out.achieved = joint_success_exact(spec, req.dof, out.r).linear;
      return out;
    }
    case SizingMethod::mc: {
      if (mc.trials < 1) throw DomainError("mc sizing needs at least one trial");
      return estimate_min_r(spec, req, mc.trials, mc.seed, mc.threads);
    }
  }
  throw DomainError("unknown sizing method");
}

}  // namespace onegrab
