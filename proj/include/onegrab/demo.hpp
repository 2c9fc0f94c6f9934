#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "onegrab/model.hpp"

namespace onegrab {

enum class Geometry { line2d, plane3d };

// Points needed to instantiate one model instance.
inline std::int64_t dof_for(Geometry geometry) {
  return geometry == Geometry::line2d ? 2 : 3;
}

inline int dimension_for(Geometry geometry) {
  return geometry == Geometry::line2d ? 2 : 3;
}

// Hyperplane model n.x = b with |n| = 1 and the first nonzero normal
// component positive. 2D uses the first two coordinates.
struct HyperplaneModel {
  std::array<double, 3> normal{0.0, 0.0, 0.0};
  double offset = 0.0;
  int dimension = 2;
};

// Labeled synthetic population inside the [-1, 1] box: C well-separated
// lines or planes with Gaussian perpendicular noise, plus uniform outliers.
// Point order follows the PopulationSpec index-range labeling.
struct SyntheticScene {
  Geometry geometry = Geometry::line2d;
  PopulationSpec spec;
  double noise_sigma = 0.0;
  std::vector<HyperplaneModel> ground_truth_models;
  std::vector<std::array<double, 3>> points;
  std::vector<int> labels;  // structure index, -1 for outliers
};

// Clustering outcome of one grab.
struct DemoOutcome {
  bool coverage_success = false;    // every structure had >= eps grabbed points
  std::int64_t recovered_models = 0;  // structures with overlap >= 0.8
  std::vector<double> overlap_scores;  // per ground-truth structure
};

// Draws models by rejection until pairwise normal angles are >= 15 degrees
// and offsets differ by >= 10 sigma, then places inliers uniformly along each
// structure (perpendicular noise sigma) and outliers uniformly in the box.
// Deterministic given the seed. Throws SeparationFailure after 1000 attempts.
SyntheticScene generate_scene(const PopulationSpec& spec, Geometry geometry,
                              double noise_sigma, std::uint64_t seed);

// Model through a minimal point set (2 points -> line, 3 -> plane). Throws
// Degenerate when the points coincide or are collinear within 1e-9.
HyperplaneModel fit_minimal(std::span<const std::array<double, 3>> points,
                            Geometry geometry);

// Absolute perpendicular distance |n.p - b|.
double residual(const HyperplaneModel& model, const std::array<double, 3>& point);

// One grab of size r, hypotheses from all eps-subsets inside the grab
// (uniformly subsampled beyond 1e6), greedy extraction of up to C models by
// inlier count at threshold tau (ties: lower residual sum, then lower
// hypothesis index), scored against ground truth.
DemoOutcome run_demo_trial(const SyntheticScene& scene, std::int64_t grab_size,
                           double tau, std::uint64_t seed);

// Scene export: one point per line, "x y [z] label", label -1 for outliers.
void write_scene(std::ostream& out, const SyntheticScene& scene);

}  // namespace onegrab
