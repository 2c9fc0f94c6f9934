#pragma once

#include <cstdint>
#include <optional>

#include "onegrab/bigmath.hpp"
#include "onegrab/model.hpp"

namespace onegrab {

// Arithmetic backend for the exact probabilities.
enum class Backend {
  automatic,  // rational up to kRationalBackendLimit, log-space beyond
  rational,   // exact big-integer rationals
  log_space,  // log-gamma coefficients with log-sum-exp accumulation
};

// Largest N for which Backend::automatic picks the rational backend.
inline constexpr std::int64_t kRationalBackendLimit = 300;

// A probability carried in linear, log, and (rational backend only) exact
// form. linear and exp(log_value) agree to ~1e-12 relative; when `exact` is
// present, linear is its correctly rounded double.
struct ProbabilityValue {
  double linear = 0.0;
  double log_value = kNegInfinity;
  std::optional<BigRational> exact;

  static ProbabilityValue from_log(double log_value);
  static ProbabilityValue from_rational(BigRational value);
};

// Exact lower tail of the univariate hypergeometric count of one structure:
// P(d < eps) = sum_{k=0}^{eps-1} C(theta,k) C(N-theta,r-k) / C(N,r).
// Infeasible k terms contribute zero. Throws DomainError when theta > N or
// r > N or any argument is negative.
ProbabilityValue structure_tail_exact(std::int64_t total_points,
                                      std::int64_t structure_size,
                                      std::int64_t grab_size,
                                      std::int64_t dof,
                                      Backend backend = Backend::automatic);

// Exact joint success probability P(all d_i >= eps) of one grab of size r,
// computed by convolving per-structure coefficient polynomials (hit counts
// clipped to [eps, min(theta_i, r)]) and closing with the outlier term.
// O(C * r^2) coefficient operations. Throws DomainError when r > N.
ProbabilityValue joint_success_exact(const PopulationSpec& spec,
                                     std::int64_t dof,
                                     std::int64_t grab_size,
                                     Backend backend = Backend::automatic);

// Test oracle: enumerates every r-subset of the labeled population and counts
// the ones that hit every structure at least eps times. Exact rational result.
// Throws TooLarge when C(N, r) > 1e7.
ProbabilityValue joint_success_bruteforce(const PopulationSpec& spec,
                                          std::int64_t dof,
                                          std::int64_t grab_size);

}  // namespace onegrab
