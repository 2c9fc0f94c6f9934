#pragma once

#include <cstdint>
#include <vector>

#include "onegrab/model.hpp"
#include "onegrab/sizing.hpp"

namespace onegrab {

// Empirical success probability of one grab size.
struct MCEstimate {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double p_hat = 0.0;
  double std_err = 0.0;  // sqrt(p_hat (1 - p_hat) / trials)
  std::uint64_t master_seed = 0;
};

// Minimal prefix of one random permutation covering every structure eps times.
struct CoverageSample {
  std::int64_t coverage_time = 0;
};

// Uniform r-subset of {0..N-1}, returned in ascending order. Partial
// Fisher-Yates over an index array; the stream is derived from
// (seed, trial_index) so the result is identical on any platform or thread
// layout. Throws DomainError when r > N.
std::vector<std::int64_t> sample_grab(std::int64_t total_points,
                                      std::int64_t grab_size,
                                      std::uint64_t seed,
                                      std::int64_t trial_index);

// Fraction of `trials` independent grabs of size r that hit every structure
// at least eps times. Deterministic for a given seed, independent of the
// thread count.
MCEstimate estimate_success(const PopulationSpec& spec, std::int64_t dof,
                            std::int64_t grab_size, std::int64_t trials,
                            std::uint64_t seed, int threads = 0);

// Streams one seeded permutation of the population and returns the first
// prefix length at which every structure has >= eps points. Throws Infeasible
// when eps exceeds some structure size.
CoverageSample coverage_time(const PopulationSpec& spec, std::int64_t dof,
                             std::uint64_t seed, std::int64_t trial_index);

// `trials` independent coverage times, indexed by trial.
std::vector<std::int64_t> coverage_samples(const PopulationSpec& spec,
                                           std::int64_t dof,
                                           std::int64_t trials,
                                           std::uint64_t seed,
                                           int threads = 0);

// Empirical-quantile sizing from coverage samples: r is the ceil(P*trials)-th
// order statistic (upper rounding, so the achieved fraction is >= P).
SizingResult min_r_from_samples(std::vector<std::int64_t> samples,
                                const Requirement& req);

// coverage_samples + min_r_from_samples in one call.
SizingResult estimate_min_r(const PopulationSpec& spec, const Requirement& req,
                            std::int64_t trials, std::uint64_t seed,
                            int threads = 0);

}  // namespace onegrab
