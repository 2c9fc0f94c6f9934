#pragma once

#include <cstdint>
#include <vector>

#include "onegrab/model.hpp"

namespace onegrab {

// Per-structure bound values behind one joint lower bound.
struct BoundBreakdown {
  std::vector<double> p0_per_structure;     // P0_i
  std::vector<double> delta_per_structure;  // Delta_i
  double joint_lower_bound = 0.0;           // L = max(0, 1 - sum Delta_i)
  BoundVariant variant;
  // Structures whose Delta_i was replaced by the exact single-structure tail
  // because the closed form's denominator was not positive.
  std::vector<char> exact_tail_fallback;

  bool any_fallback() const;
};

// Upper bound on the probability that a grab of size r contains zero points
// of one structure of size theta.
//   paper_literal: (1 - r/(C*theta))^theta   requires r <= C*theta
//   safe:          (1 - r/N)^theta           requires r <= N
//   exponential:   e^(-r/C)
// Computed in log space, clamped to [0, 1]. paper_literal outside its domain
// throws DomainError unless clamp_out_of_domain is set, in which case it
// returns 0 (the formula's monotone limit).
double p0_bound(std::int64_t grab_size, std::int64_t structures,
                std::int64_t structure_size, std::int64_t total_points,
                P0Form form, bool clamp_out_of_domain = false);

// Upper bound on the probability that a grab of size r contains fewer than
// eps points of one structure:
//   Delta = P0 * sum_{k=0}^{eps-1} B(k) * (theta / (N - r - theta + k'))^k
// with B and k' chosen by the variant (see DeltaBinomial). Clamped to [0, 1].
// Throws DenominatorViolation when eps >= 2 and N - r - theta + 1 <= 0;
// callers then substitute structure_tail_exact.
double delta_bound(std::int64_t grab_size, std::int64_t total_points,
                   std::int64_t structures, std::int64_t structure_size,
                   std::int64_t dof, const BoundVariant& variant);

// Joint guarantee over all structures: L = max(0, 1 - sum_i Delta_i), the
// union bound over per-structure failure events. With equal structure sizes
// the sum collapses to C * Delta bit-for-bit. Structures hit by
// DenominatorViolation fall back to the exact tail and are flagged.
BoundBreakdown joint_lower_bound(const PopulationSpec& spec, std::int64_t dof,
                                 std::int64_t grab_size,
                                 const BoundVariant& variant = {});

}  // namespace onegrab
