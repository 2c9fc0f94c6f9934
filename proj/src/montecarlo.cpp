#include "onegrab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>
#include <vector>

#include "onegrab/rng.hpp"
#include "onegrab/sizing.hpp"

namespace onegrab {

namespace {

// Runs body(trial) for every trial in [0, count). Results must be written to
// per-trial slots so the schedule cannot affect the outcome.
void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& body) {
  int workers = threads;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  workers = static_cast<int>(
      std::min<std::int64_t>(workers, std::max<std::int64_t>(count, 1)));
  if (workers == 1) {
    for (std::int64_t trial = 0; trial < count; ++trial) body(trial);
    return;
  }
  std::atomic<std::int64_t> cursor{0};
  auto run = [&] {
    constexpr std::int64_t kChunk = 64;
    while (true) {
      const std::int64_t begin = cursor.fetch_add(kChunk);
      if (begin >= count) break;
      const std::int64_t end = std::min(begin + kChunk, count);
      for (std::int64_t trial = begin; trial < end; ++trial) body(trial);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int i = 0; i < workers; ++i) pool.emplace_back(run);
  for (auto& worker : pool) worker.join();
}

}  // namespace

std::vector<std::int64_t> sample_grab(std::int64_t total_points,
                                      std::int64_t grab_size,
                                      std::uint64_t seed,
                                      std::int64_t trial_index) {
  if (total_points < 0 || grab_size < 0 || grab_size > total_points) {
    throw DomainError("sample_grab: need 0 <= r <= N");
  }
  Xoshiro256pp rng(derive_stream_seed(seed, static_cast<std::uint64_t>(trial_index)));
  std::vector<std::int64_t> deck(static_cast<std::size_t>(total_points));
  std::iota(deck.begin(), deck.end(), std::int64_t{0});
  for (std::int64_t i = 0; i < grab_size; ++i) {
    const std::uint64_t span = static_cast<std::uint64_t>(total_points - i);
    const std::int64_t j = i + static_cast<std::int64_t>(rng.below(span));
    std::swap(deck[static_cast<std::size_t>(i)], deck[static_cast<std::size_t>(j)]);
  }
  std::vector<std::int64_t> grab(deck.begin(), deck.begin() + grab_size);
  std::sort(grab.begin(), grab.end());
  return grab;
}

MCEstimate estimate_success(const PopulationSpec& spec, std::int64_t dof,
                            std::int64_t grab_size, std::int64_t trials,
                            std::uint64_t seed, int threads) {
  if (trials < 1) throw DomainError("estimate_success: need at least one trial");
  if (dof < 0) throw DomainError("estimate_success: dof must be non-negative");
  if (grab_size < 0 || grab_size > spec.total_points) {
    throw DomainError("estimate_success: need 0 <= r <= N");
  }

  const std::int64_t structures = spec.structure_count();
  std::vector<std::int64_t> starts(static_cast<std::size_t>(structures) + 1, 0);
  for (std::int64_t i = 0; i < structures; ++i) {
    starts[static_cast<std::size_t>(i) + 1] =
        starts[static_cast<std::size_t>(i)] +
        spec.structure_sizes[static_cast<std::size_t>(i)];
  }

  std::vector<char> hit(static_cast<std::size_t>(trials), 0);
  parallel_for(trials, threads, [&](std::int64_t trial) {
    const std::vector<std::int64_t> grab =
        sample_grab(spec.total_points, grab_size, seed, trial);
    bool ok = true;
    for (std::int64_t i = 0; i < structures && ok; ++i) {
      const auto lo = std::lower_bound(grab.begin(), grab.end(),
                                       starts[static_cast<std::size_t>(i)]);
      const auto hi = std::lower_bound(grab.begin(), grab.end(),
                                       starts[static_cast<std::size_t>(i) + 1]);
      if (hi - lo < dof) ok = false;
    }
    hit[static_cast<std::size_t>(trial)] = ok ? 1 : 0;
  });

  MCEstimate estimate{};
  estimate.trials = trials;
  estimate.master_seed = seed;
  estimate.successes = 0;
  for (const char h : hit) estimate.successes += h;
  estimate.p_hat = static_cast<double>(estimate.successes) /
                   static_cast<double>(trials);
  estimate.std_err =
      std::sqrt(std::max(estimate.p_hat * (1.0 - estimate.p_hat), 0.0) /
                static_cast<double>(trials));
  return estimate;
}

CoverageSample coverage_time(const PopulationSpec& spec, std::int64_t dof,
                             std::uint64_t seed, std::int64_t trial_index) {
  if (dof < 0) throw DomainError("coverage_time: dof must be non-negative");
  if (dof == 0) return CoverageSample{0};
  if (dof > spec.min_structure_size()) {
    throw Infeasible("coverage_time: a structure has fewer than dof points");
  }

  const std::int64_t structures = spec.structure_count();
  Xoshiro256pp rng(derive_stream_seed(seed, static_cast<std::uint64_t>(trial_index)));
  std::vector<std::int64_t> deck(static_cast<std::size_t>(spec.total_points));
  std::iota(deck.begin(), deck.end(), std::int64_t{0});
  std::vector<std::int64_t> counts(static_cast<std::size_t>(structures), 0);
  std::int64_t satisfied = 0;
  for (std::int64_t i = 0; i < spec.total_points; ++i) {
    const std::uint64_t span = static_cast<std::uint64_t>(spec.total_points - i);
    const std::int64_t j = i + static_cast<std::int64_t>(rng.below(span));
    std::swap(deck[static_cast<std::size_t>(i)], deck[static_cast<std::size_t>(j)]);
    const int owner = spec.structure_of(deck[static_cast<std::size_t>(i)]);
    if (owner >= 0) {
      auto& count = counts[static_cast<std::size_t>(owner)];
      ++count;
      if (count == dof) {
        ++satisfied;
        if (satisfied == structures) return CoverageSample{i + 1};
      }
    }
  }
  throw Infeasible("coverage_time: structures cannot all be covered");
}

std::vector<std::int64_t> coverage_samples(const PopulationSpec& spec,
                                           std::int64_t dof,
                                           std::int64_t trials,
                                           std::uint64_t seed, int threads) {
  if (trials < 1) throw DomainError("coverage_samples: need at least one trial");
  std::vector<std::int64_t> samples(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](std::int64_t trial) {
    samples[static_cast<std::size_t>(trial)] =
        coverage_time(spec, dof, seed, trial).coverage_time;
  });
  return samples;
}

SizingResult min_r_from_samples(std::vector<std::int64_t> samples,
                                const Requirement& req) {
  if (samples.empty()) throw DomainError("min_r_from_samples: no samples");
  SizingResult out{};
  out.method = SizingMethod::mc;
  out.evaluations = static_cast<std::int64_t>(samples.size());
  if (req.dof == 0) {
    out.r = 0;
    out.achieved = 1.0;
    return out;
  }
  std::sort(samples.begin(), samples.end());

  const auto n = static_cast<std::int64_t>(samples.size());
  auto k = static_cast<std::int64_t>(
      std::ceil(req.confidence * static_cast<double>(n)));
  // ceil can land one off under floating point; nudge until k is the smallest
  // count with k/n >= confidence.
  while (k > 1 && static_cast<double>(k - 1) / static_cast<double>(n) >=
                      req.confidence) {
    --k;
  }
  while (k < n &&
         static_cast<double>(k) / static_cast<double>(n) < req.confidence) {
    ++k;
  }
  k = std::clamp<std::int64_t>(k, 1, n);
  out.r = samples[static_cast<std::size_t>(k - 1)];
  std::int64_t covered = 0;
  for (const std::int64_t time : samples) {
    if (time <= out.r) ++covered;
  }
  out.achieved = static_cast<double>(covered) / static_cast<double>(n);
  return out;
}

SizingResult estimate_min_r(const PopulationSpec& spec, const Requirement& req,
                            std::int64_t trials, std::uint64_t seed,
                            int threads) {
  if (req.dof == 0) {
    SizingResult out{};
    out.method = SizingMethod::mc;
    out.r = 0;
    out.achieved = 1.0;
    out.evaluations = 1;
    return out;
  }
  if (req.dof > spec.min_structure_size()) {
    throw Infeasible("a structure has fewer than dof points; no grab size works");
  }
  return min_r_from_samples(coverage_samples(spec, req.dof, trials, seed, threads),
                            req);
}

}  // namespace onegrab
