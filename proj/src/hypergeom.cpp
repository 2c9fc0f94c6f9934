#include "onegrab/hypergeom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "onegrab/logmath.hpp"

namespace onegrab {

namespace {

Backend resolve(Backend backend, std::int64_t total_points) {
  if (backend != Backend::automatic) return backend;
  return total_points <= kRationalBackendLimit ? Backend::rational
                                               : Backend::log_space;
}

void check_args(std::int64_t total_points, std::int64_t structure_size,
                std::int64_t grab_size, std::int64_t dof) {
  if (total_points < 0 || structure_size < 0 || grab_size < 0 || dof < 0) {
    throw DomainError("hypergeometric arguments must be non-negative");
  }
  if (structure_size > total_points) {
    throw DomainError("structure size exceeds the population");
  }
  if (grab_size > total_points) {
    throw DomainError("grab size " + std::to_string(grab_size) +
                      " exceeds the population of " +
                      std::to_string(total_points));
  }
}

}  // namespace

ProbabilityValue ProbabilityValue::from_log(double log_value) {
  ProbabilityValue value;
  value.log_value = std::min(log_value, 0.0);
  value.linear = std::exp(value.log_value);
  return value;
}

ProbabilityValue ProbabilityValue::from_rational(BigRational rational) {
  ProbabilityValue value;
  value.log_value = log_of_rational(rational);
  value.linear = rational_to_double(rational);
  value.exact = std::move(rational);
  return value;
}

ProbabilityValue structure_tail_exact(std::int64_t total_points,
                                      std::int64_t structure_size,
                                      std::int64_t grab_size,
                                      std::int64_t dof, Backend backend) {
  check_args(total_points, structure_size, grab_size, dof);
  const std::int64_t rest = total_points - structure_size;

  if (resolve(backend, total_points) == Backend::rational) {
    BigInt numerator = 0;
    BigInt term = 1;  // C(structure, k), maintained incrementally
    for (std::int64_t k = 0; k < dof; ++k) {
      if (k > 0) {
        if (k > structure_size) break;
        term = term * (structure_size - k + 1) / k;
      }
      if (grab_size - k >= 0 && grab_size - k <= rest) {
        numerator += term * choose_exact(rest, grab_size - k);
      }
    }
    return ProbabilityValue::from_rational(
        BigRational(numerator, choose_exact(total_points, grab_size)));
  }

  LogSumAccumulator accumulator;
  for (std::int64_t k = 0; k < dof; ++k) {
    if (k > structure_size) break;
    if (grab_size - k < 0 || grab_size - k > rest) continue;
    accumulator.add(log_choose(structure_size, k) +
                    log_choose(rest, grab_size - k));
  }
  return ProbabilityValue::from_log(accumulator.value() -
                                    log_choose(total_points, grab_size));
}

namespace {

// Convolves the constrained per-structure generating coefficients
// g_i[k] = C(theta_i, k), k in [dof, min(theta_i, r)], left to right, then
// closes the total with the outlier coefficient C(outliers, r - t).

ProbabilityValue joint_success_rational(const PopulationSpec& spec,
                                        std::int64_t dof,
                                        std::int64_t grab_size) {
  std::vector<BigInt> weight(static_cast<std::size_t>(grab_size) + 1);
  weight[0] = 1;
  std::int64_t reach = 0;  // highest total with a nonzero coefficient
  for (const std::int64_t theta : spec.structure_sizes) {
    const std::int64_t hi = std::min(theta, grab_size);
    std::vector<BigInt> next(weight.size());
    BigInt coefficient = choose_exact(theta, std::min(dof, theta));
    for (std::int64_t k = dof; k <= hi; ++k) {
      if (k > dof) coefficient = coefficient * (theta - k + 1) / k;
      for (std::int64_t t = reach; t >= 0; --t) {
        if (t + k > grab_size) continue;
        if (weight[static_cast<std::size_t>(t)] == 0) continue;
        next[static_cast<std::size_t>(t + k)] +=
            weight[static_cast<std::size_t>(t)] * coefficient;
      }
    }
    weight = std::move(next);
    reach = std::min(grab_size, reach + hi);
  }

  BigInt numerator = 0;
  for (std::int64_t t = 0; t <= grab_size; ++t) {
    const std::int64_t leftover = grab_size - t;
    if (leftover > spec.outlier_count) continue;
    if (weight[static_cast<std::size_t>(t)] == 0) continue;
    numerator += weight[static_cast<std::size_t>(t)] *
                 choose_exact(spec.outlier_count, leftover);
  }
  return ProbabilityValue::from_rational(BigRational(
      numerator, choose_exact(spec.total_points, grab_size)));
}

ProbabilityValue joint_success_logspace(const PopulationSpec& spec,
                                        std::int64_t dof,
                                        std::int64_t grab_size) {
  std::vector<double> weight(static_cast<std::size_t>(grab_size) + 1,
                             kNegInfinity);
  weight[0] = 0.0;
  for (const std::int64_t theta : spec.structure_sizes) {
    const std::int64_t hi = std::min(theta, grab_size);
    std::vector<double> next(weight.size(), kNegInfinity);
    for (std::int64_t total = 0; total <= grab_size; ++total) {
      LogSumAccumulator cell;
      for (std::int64_t k = dof; k <= std::min(hi, total); ++k) {
        const double prev = weight[static_cast<std::size_t>(total - k)];
        if (prev == kNegInfinity) continue;
        cell.add(prev + log_choose(theta, k));
      }
      next[static_cast<std::size_t>(total)] = cell.value();
    }
    weight = std::move(next);
  }

  LogSumAccumulator numerator;
  for (std::int64_t t = 0; t <= grab_size; ++t) {
    const std::int64_t leftover = grab_size - t;
    if (leftover > spec.outlier_count) continue;
    if (weight[static_cast<std::size_t>(t)] == kNegInfinity) continue;
    numerator.add(weight[static_cast<std::size_t>(t)] +
                  log_choose(spec.outlier_count, leftover));
  }
  return ProbabilityValue::from_log(
      numerator.value() - log_choose(spec.total_points, grab_size));
}

}  // namespace

ProbabilityValue joint_success_exact(const PopulationSpec& spec,
                                     std::int64_t dof, std::int64_t grab_size,
                                     Backend backend) {
  if (dof < 0 || grab_size < 0) {
    throw DomainError("dof and grab size must be non-negative");
  }
  if (grab_size > spec.total_points) {
    throw DomainError("grab size " + std::to_string(grab_size) +
                      " exceeds the population of " +
                      std::to_string(spec.total_points));
  }
  const bool rational = resolve(backend, spec.total_points) == Backend::rational;

  if (dof == 0) {
    return rational ? ProbabilityValue::from_rational(BigRational(1))
                    : ProbabilityValue::from_log(0.0);
  }
  const bool impossible = dof > spec.min_structure_size() ||
                          grab_size < dof * spec.structure_count();
  if (impossible) {
    return rational ? ProbabilityValue::from_rational(BigRational(0))
                    : ProbabilityValue::from_log(kNegInfinity);
  }
  return rational ? joint_success_rational(spec, dof, grab_size)
                  : joint_success_logspace(spec, dof, grab_size);
}

ProbabilityValue joint_success_bruteforce(const PopulationSpec& spec,
                                          std::int64_t dof,
                                          std::int64_t grab_size) {
  if (dof < 0 || grab_size < 0) {
    throw DomainError("dof and grab size must be non-negative");
  }
  if (grab_size > spec.total_points) {
    throw DomainError("grab size exceeds the population");
  }
  const double log_count = log_choose(spec.total_points, grab_size);
  if (log_count > std::log(1e7)) {
    throw TooLarge("brute force would enumerate more than 1e7 subsets");
  }

  const auto structures = static_cast<std::size_t>(spec.structure_count());
  std::vector<int> label(static_cast<std::size_t>(spec.total_points));
  for (std::size_t i = 0; i < label.size(); ++i) {
    label[i] = spec.structure_of(static_cast<std::int64_t>(i));
  }

  BigInt hits = 0;
  BigInt total = 0;
  std::vector<std::int64_t> subset(static_cast<std::size_t>(grab_size));
  std::iota(subset.begin(), subset.end(), 0);
  std::vector<std::int64_t> count(structures);
  const auto r = static_cast<std::size_t>(grab_size);

  while (true) {
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < r; ++i) {
      const int structure = label[static_cast<std::size_t>(subset[i])];
      if (structure >= 0) ++count[static_cast<std::size_t>(structure)];
    }
    bool success = true;
    for (const std::int64_t d : count) {
      if (d < dof) {
        success = false;
        break;
      }
    }
    ++total;
    if (success) ++hits;

    // next r-combination of {0..N-1} in lexicographic order
    if (r == 0) break;
    std::size_t i = r;
    while (i > 0 &&
           subset[i - 1] == spec.total_points - static_cast<std::int64_t>(r - i) - 1) {
      --i;
    }
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < r; ++j) subset[j] = subset[j - 1] + 1;
  }

  return ProbabilityValue::from_rational(
      BigRational(hits, total));
}

}  // namespace onegrab
