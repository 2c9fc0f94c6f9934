#include "onegrab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "onegrab/hypergeom.hpp"
#include "onegrab/logmath.hpp"

namespace onegrab {

namespace {

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// log of the selected P0 form; -inf encodes a clamped zero.
double log_p0(std::int64_t r, std::int64_t structures, std::int64_t theta,
              std::int64_t total_points, P0Form form, bool clamp_out_of_domain) {
  if (r < 0 || structures < 1 || theta < 1) {
    throw DomainError("p0_bound: need r >= 0, C >= 1, theta >= 1");
  }
  switch (form) {
    case P0Form::paper_literal: {
      const double cap = static_cast<double>(structures) * static_cast<double>(theta);
      if (static_cast<double>(r) > cap) {
        if (clamp_out_of_domain) return kNegInfinity;
        throw DomainError("paper-literal p0 needs r <= C*theta (r = " +
                          std::to_string(r) + ", C*theta = " +
                          std::to_string(structures * theta) + ")");
      }
      return static_cast<double>(theta) * std::log1p(-static_cast<double>(r) / cap);
    }
    case P0Form::safe: {
      if (r > total_points) {
        throw DomainError("safe p0 needs r <= N");
      }
      return static_cast<double>(theta) *
             std::log1p(-static_cast<double>(r) / static_cast<double>(total_points));
    }
    case P0Form::exponential:
      return -static_cast<double>(r) / static_cast<double>(structures);
  }
  throw DomainError("unknown p0 form");
}

}  // namespace

bool BoundBreakdown::any_fallback() const {
  return std::any_of(exact_tail_fallback.begin(), exact_tail_fallback.end(),
                     [](char flag) { return flag != 0; });
}

double p0_bound(std::int64_t grab_size, std::int64_t structures,
                std::int64_t structure_size, std::int64_t total_points,
                P0Form form, bool clamp_out_of_domain) {
  return clamp01(std::exp(log_p0(grab_size, structures, structure_size,
                                 total_points, form, clamp_out_of_domain)));
}

double delta_bound(std::int64_t grab_size, std::int64_t total_points,
                   std::int64_t structures, std::int64_t structure_size,
                   std::int64_t dof, const BoundVariant& variant) {
  if (dof < 0) throw DomainError("delta_bound: dof must be non-negative");
  if (dof == 0) return 0.0;  // empty sum, no failure mass to bound
  const std::int64_t base = total_points - grab_size - structure_size + 1;
  if (dof >= 2 && base <= 0) {
    throw DenominatorViolation(
        "delta bound denominator N - r - theta + 1 = " + std::to_string(base) +
        " is not positive");
  }

  const double p0 = log_p0(grab_size, structures, structure_size, total_points,
                           variant.p0_form,
                           variant.p0_form == P0Form::paper_literal);
  const double log_theta = std::log(static_cast<double>(structure_size));

  LogSumAccumulator sum;
  for (std::int64_t k = 0; k < dof; ++k) {
    double log_term = 0.0;
    switch (variant.delta_binomial) {
      case DeltaBinomial::grab_choose:
        if (k > grab_size) continue;
        log_term = log_choose(grab_size, k);
        if (k > 0) {
          log_term += static_cast<double>(k) *
                      (log_theta - std::log(static_cast<double>(base - 1 + k)));
        }
        break;
      case DeltaBinomial::structure_choose:
        if (k > structure_size) continue;
        log_term = log_choose(structure_size, k);
        if (k > 0) {
          log_term += static_cast<double>(k) *
                      (log_theta - std::log(static_cast<double>(base - 1 + k)));
        }
        break;
      case DeltaBinomial::strict:
        if (k > grab_size) continue;
        log_term = log_choose(grab_size, k);
        if (k > 0) {
          log_term += static_cast<double>(k) *
                      (log_theta - std::log(static_cast<double>(base)));
        }
        break;
    }
    sum.add(log_term);
  }
  return clamp01(std::exp(p0 + sum.value()));
}

BoundBreakdown joint_lower_bound(const PopulationSpec& spec, std::int64_t dof,
                                 std::int64_t grab_size,
                                 const BoundVariant& variant) {
  if (grab_size < 0 || grab_size > spec.total_points) {
    throw DomainError("joint_lower_bound: need 0 <= r <= N");
  }
  const std::int64_t structures = spec.structure_count();

  BoundBreakdown breakdown;
  breakdown.variant = variant;
  breakdown.p0_per_structure.reserve(static_cast<std::size_t>(structures));
  breakdown.delta_per_structure.reserve(static_cast<std::size_t>(structures));
  breakdown.exact_tail_fallback.assign(static_cast<std::size_t>(structures), 0);

  for (std::int64_t i = 0; i < structures; ++i) {
    const std::int64_t theta = spec.structure_sizes[static_cast<std::size_t>(i)];
    breakdown.p0_per_structure.push_back(
        p0_bound(grab_size, structures, theta, spec.total_points,
                 variant.p0_form,
                 variant.p0_form == P0Form::paper_literal));
    double delta;
    try {
      delta = delta_bound(grab_size, spec.total_points, structures, theta, dof,
                          variant);
    } catch (const DenominatorViolation&) {
      delta = structure_tail_exact(spec.total_points, theta, grab_size, dof)
                  .linear;
      breakdown.exact_tail_fallback[static_cast<std::size_t>(i)] = 1;
    }
    breakdown.delta_per_structure.push_back(delta);
  }

  // Equal structure sizes must reproduce the closed form 1 - C*Delta exactly,
  // so the sum collapses to a product in that case.
  const auto& deltas = breakdown.delta_per_structure;
  const bool all_equal =
      std::all_of(deltas.begin(), deltas.end(),
                  [&](double d) { return d == deltas.front(); });
  double delta_sum = 0.0;
  if (all_equal) {
    delta_sum = static_cast<double>(structures) * deltas.front();
  } else {
    for (const double d : deltas) delta_sum += d;
  }
  breakdown.joint_lower_bound = clamp01(1.0 - delta_sum);
  return breakdown;
}

}  // namespace onegrab
