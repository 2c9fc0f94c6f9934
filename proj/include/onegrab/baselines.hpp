#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onegrab/model.hpp"

namespace onegrab {

struct StageReport {
  std::int64_t population = 0;
  double inlier_ratio = 0.0;
  std::int64_t iterations = 0;
};

// Sample-count report of one method, comparable across iterative and
// one-grab sampling.
struct BaselineReport {
  std::string method_name;
  std::int64_t hypotheses = 0;
  // hypotheses * eps for iterative methods, r for one-grab.
  std::int64_t points_touched = 0;
  std::vector<StageReport> per_stage;
};

// Textbook iteration count for hypothesize-and-verify sampling: the number of
// eps-subsets needed so that at least one is all-inlier with probability P.
// w = 1 yields 1; otherwise ceil(ln(1-P) / ln(1 - w^eps)).
std::int64_t ransac_iterations(double inlier_ratio, std::int64_t dof,
                               double confidence);

// Sequential fit-and-remove baseline: structures processed largest-first,
// stage i runs on the population left after removing earlier structures.
BaselineReport sequential_total(const PopulationSpec& spec, std::int64_t dof,
                                double confidence);

}  // namespace onegrab
