#include "onegrab/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "onegrab/errors.hpp"

namespace onegrab {

std::int64_t ransac_iterations(double inlier_ratio, std::int64_t dof,
                               double confidence) {
  if (!(inlier_ratio >= 0.0 && inlier_ratio <= 1.0)) {
    throw DomainError("ransac_iterations: inlier ratio must lie in [0, 1]");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("ransac_iterations: confidence must lie in (0, 1)");
  }
  if (dof < 0) throw DomainError("ransac_iterations: dof must be non-negative");
  if (dof == 0) return 1;
  if (inlier_ratio == 0.0) {
    throw DomainError("ransac_iterations: zero inlier ratio never succeeds");
  }
  if (inlier_ratio == 1.0) return 1;

  const double success = std::pow(inlier_ratio, static_cast<double>(dof));
  const double denom = std::log1p(-success);
  if (denom == 0.0) return 1;  // success probability rounds to a certainty
  const double raw = std::log1p(-confidence) / denom;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
}

BaselineReport sequential_total(const PopulationSpec& spec, std::int64_t dof,
                                double confidence) {
  if (dof > spec.min_structure_size()) {
    throw Infeasible("sequential baseline: a structure has fewer than dof points");
  }
  std::vector<std::int64_t> sizes = spec.structure_sizes;
  std::sort(sizes.begin(), sizes.end(), std::greater<>());

  BaselineReport report{};
  report.method_name = "sequential_ransac";
  std::int64_t remaining = spec.total_points;
  for (const std::int64_t theta : sizes) {
    StageReport stage{};
    stage.population = remaining;
    stage.inlier_ratio =
        static_cast<double>(theta) / static_cast<double>(remaining);
    stage.iterations = ransac_iterations(stage.inlier_ratio, dof, confidence);
    report.per_stage.push_back(stage);
    report.hypotheses += stage.iterations;
    remaining -= theta;
  }
  report.points_touched = dof * report.hypotheses;
  return report;
}

}  // namespace onegrab
