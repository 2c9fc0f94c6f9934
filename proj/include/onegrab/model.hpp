#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "onegrab/errors.hpp"

namespace onegrab {

// The sampled universe: N points of which C disjoint structures occupy the
// consecutive index ranges [0, theta_0), [theta_0, theta_0 + theta_1), ...
// and outliers occupy the remaining indices up to N.
//
// Immutable after construction; build through validate_population().
struct PopulationSpec {
  std::int64_t total_points = 0;                 // N
  std::vector<std::int64_t> structure_sizes;     // theta_i, all >= 1
  std::int64_t outlier_count = 0;                // N - sum(theta_i)

  std::int64_t structure_count() const {
    return static_cast<std::int64_t>(structure_sizes.size());
  }
  std::int64_t inlier_total() const { return total_points - outlier_count; }
  std::int64_t min_structure_size() const;

  // Structure owning a point index, or -1 for outliers.
  int structure_of(std::int64_t index) const;
};

// Checks all population invariants and derives the outlier count.
// Throws EmptyStructures when no sizes are given, SizeViolation when N = 0,
// any theta_i = 0, or sum(theta_i) > N.
PopulationSpec validate_population(std::int64_t total_points,
                                   std::vector<std::int64_t> structure_sizes);

// What the caller demands of one grab: at least `dof` points on every
// structure, with probability at least `confidence`.
struct Requirement {
  std::int64_t dof = 0;       // eps, the degrees of freedom of one model
  double confidence = 0.0;    // P, strictly inside (0, 1)

  Requirement(std::int64_t dof, double confidence);
};

// Per-structure hit counts of one grab of size r.
struct GrabOutcome {
  std::vector<std::int64_t> structure_hits;  // d_i
  std::int64_t outlier_hits = 0;
  std::int64_t grab_size = 0;                // r = sum(d_i) + outlier_hits
};

// Buckets grabbed point indices into per-structure hits using the
// population's index-range labeling. Throws DomainError on an out-of-range
// index.
GrabOutcome classify_grab(const PopulationSpec& spec,
                          std::span<const std::int64_t> indices);

// Selectable form of the zero-hit bound P0.
enum class P0Form {
  paper_literal,  // (1 - r/(C*theta))^theta, defined for r <= C*theta
  safe,           // (1 - r/N)^theta, dominates the exact P0 for any r <= N
  exponential,    // e^(-r/C)
};

// Selectable binomial factor inside the delta bound's correction sum.
enum class DeltaBinomial {
  grab_choose,       // C(r, k) with denominator N - r - theta + k
  structure_choose,  // C(theta, k) with denominator N - r - theta + k
  strict,            // C(r, k) with fixed denominator N - r - theta + 1
};

// Bound formula selector. The default pairing (safe, strict) is the one that
// provably dominates the exact tail; the other forms reproduce the published
// expressions.
struct BoundVariant {
  P0Form p0_form = P0Form::safe;
  DeltaBinomial delta_binomial = DeltaBinomial::strict;
};

const char* to_string(P0Form form);
const char* to_string(DeltaBinomial binomial);

}  // namespace onegrab
