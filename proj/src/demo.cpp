#include "onegrab/demo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "onegrab/logmath.hpp"
#include "onegrab/montecarlo.hpp"
#include "onegrab/rng.hpp"

namespace onegrab {

namespace {

constexpr double kMinSeparationDeg = 15.0;
constexpr double kOffsetRange = 0.7;
constexpr std::int64_t kMaxHypotheses = 1'000'000;

double box_half_width(Geometry geometry) {
  return geometry == Geometry::line2d ? 1.5 : 1.8;
}

double uniform_in(Xoshiro256pp& rng, double half_width) {
  return half_width * (2.0 * rng.unit_open() - 1.0);
}

std::array<double, 3> random_unit(Xoshiro256pp& rng, int dimension) {
  while (true) {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    double norm_sq = 0.0;
    for (int i = 0; i < dimension; ++i) {
      v[static_cast<std::size_t>(i)] = rng.gaussian();
      norm_sq += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    }
    if (norm_sq < 1e-12) continue;
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& c : v) c *= inv;
    return v;
  }
}

double pair_angle_deg(const std::array<double, 3>& a,
                      const std::array<double, 3>& b) {
  const double dot = std::abs(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
  return std::acos(std::min(dot, 1.0)) * 180.0 / std::acos(-1.0);
}

bool in_box(const std::array<double, 3>& p, int dimension, double half_width) {
  for (int i = 0; i < dimension; ++i) {
    if (std::abs(p[static_cast<std::size_t>(i)]) > half_width) return false;
  }
  return true;
}

void canonicalize(HyperplaneModel& model) {
  for (int i = 0; i < model.dimension; ++i) {
    const double c = model.normal[static_cast<std::size_t>(i)];
    if (c == 0.0) continue;
    if (c < 0.0) {
      for (auto& component : model.normal) component = -component;
      model.offset = -model.offset;
    }
    break;
  }
}

// On-structure point before noise; rejection keeps it inside the scene box.
std::array<double, 3> point_on_model(Xoshiro256pp& rng,
                                     const HyperplaneModel& model,
                                     double half_width) {
  const auto& n = model.normal;
  std::array<double, 3> foot{-model.offset * n[0], -model.offset * n[1],
                             -model.offset * n[2]};
  std::array<double, 3> t1{0.0, 0.0, 0.0};
  std::array<double, 3> t2{0.0, 0.0, 0.0};
  if (model.dimension == 2) {
    t1 = {-n[1], n[0], 0.0};
  } else {
    // any axis not parallel to the normal seeds an orthonormal tangent pair
    std::array<double, 3> axis{1.0, 0.0, 0.0};
    if (std::abs(n[0]) > 0.9) axis = {0.0, 1.0, 0.0};
    t1 = {n[1] * axis[2] - n[2] * axis[1], n[2] * axis[0] - n[0] * axis[2],
          n[0] * axis[1] - n[1] * axis[0]};
    const double norm =
        std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
    for (auto& c : t1) c /= norm;
    t2 = {n[1] * t1[2] - n[2] * t1[1], n[2] * t1[0] - n[0] * t1[2],
          n[0] * t1[1] - n[1] * t1[0]};
  }
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double u = uniform_in(rng, half_width);
    const double v = model.dimension == 3 ? uniform_in(rng, half_width) : 0.0;
    std::array<double, 3> p{foot[0] + u * t1[0] + v * t2[0],
                            foot[1] + u * t1[1] + v * t2[1],
                            foot[2] + u * t1[2] + v * t2[2]};
    if (in_box(p, model.dimension, half_width)) return p;
  }
  throw Degenerate("could not place a structure point inside the scene box");
}

struct Hypothesis {
  HyperplaneModel model;
  bool valid = false;
};

std::vector<Hypothesis> build_hypotheses(const SyntheticScene& scene,
                                         const std::vector<std::int64_t>& grab,
                                         std::uint64_t seed) {
  const std::int64_t dof = dof_for(scene.geometry);
  const auto r = static_cast<std::int64_t>(grab.size());
  std::vector<Hypothesis> hypotheses;
  std::vector<std::array<double, 3>> sample(static_cast<std::size_t>(dof));

  auto emit = [&](const std::vector<std::int64_t>& subset) {
    for (std::int64_t i = 0; i < dof; ++i) {
      sample[static_cast<std::size_t>(i)] =
          scene.points[static_cast<std::size_t>(
              grab[static_cast<std::size_t>(subset[static_cast<std::size_t>(i)])])];
    }
    Hypothesis hyp{};
    try {
      hyp.model = fit_minimal(sample, scene.geometry);
      hyp.valid = true;
    } catch (const Degenerate&) {
      hyp.valid = false;
    }
    hypotheses.push_back(hyp);
  };

  const bool enumerate_all =
      log_choose(r, dof) <= std::log(static_cast<double>(kMaxHypotheses));
  if (enumerate_all) {
    std::vector<std::int64_t> subset(static_cast<std::size_t>(dof));
    for (std::int64_t i = 0; i < dof; ++i) subset[static_cast<std::size_t>(i)] = i;
    while (true) {
      emit(subset);
      std::int64_t i = dof - 1;
      while (i >= 0 &&
             subset[static_cast<std::size_t>(i)] == r - (dof - i)) {
        --i;
      }
      if (i < 0) break;
      ++subset[static_cast<std::size_t>(i)];
      for (std::int64_t j = i + 1; j < dof; ++j) {
        subset[static_cast<std::size_t>(j)] =
            subset[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  } else {
    Xoshiro256pp rng(derive_stream_seed(seed, 1));
    std::vector<std::int64_t> subset(static_cast<std::size_t>(dof));
    for (std::int64_t h = 0; h < kMaxHypotheses; ++h) {
      for (std::int64_t i = 0; i < dof; ++i) {
        while (true) {
          const auto pick = static_cast<std::int64_t>(
              rng.below(static_cast<std::uint64_t>(r)));
          const bool fresh =
              std::find(subset.begin(), subset.begin() + i, pick) ==
              subset.begin() + i;
          if (fresh) {
            subset[static_cast<std::size_t>(i)] = pick;
            break;
          }
        }
      }
      emit(subset);
    }
  }
  return hypotheses;
}

}  // namespace

double residual(const HyperplaneModel& model, const std::array<double, 3>& point) {
  double value = model.offset;
  for (int i = 0; i < model.dimension; ++i) {
    value += model.normal[static_cast<std::size_t>(i)] *
             point[static_cast<std::size_t>(i)];
  }
  return std::abs(value);
}

HyperplaneModel fit_minimal(std::span<const std::array<double, 3>> points,
                            Geometry geometry) {
  const auto dof = static_cast<std::size_t>(dof_for(geometry));
  if (points.size() != dof) {
    throw DomainError("fit_minimal: wrong number of sample points");
  }
  HyperplaneModel model{};
  model.dimension = dimension_for(geometry);
  if (geometry == Geometry::line2d) {
    const double dx = points[1][0] - points[0][0];
    const double dy = points[1][1] - points[0][1];
    const double norm = std::sqrt(dx * dx + dy * dy);
    if (norm < 1e-9) throw Degenerate("fit_minimal: coincident line sample");
    model.normal = {-dy / norm, dx / norm, 0.0};
  } else {
    const std::array<double, 3> a{points[1][0] - points[0][0],
                                  points[1][1] - points[0][1],
                                  points[1][2] - points[0][2]};
    const std::array<double, 3> b{points[2][0] - points[0][0],
                                  points[2][1] - points[0][1],
                                  points[2][2] - points[0][2]};
    std::array<double, 3> n{a[1] * b[2] - a[2] * b[1],
                            a[2] * b[0] - a[0] * b[2],
                            a[0] * b[1] - a[1] * b[0]};
    const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (norm < 1e-9) throw Degenerate("fit_minimal: collinear plane sample");
    model.normal = {n[0] / norm, n[1] / norm, n[2] / norm};
  }
  model.offset = 0.0;
  for (int i = 0; i < model.dimension; ++i) {
    model.offset -= model.normal[static_cast<std::size_t>(i)] *
                    points[0][static_cast<std::size_t>(i)];
  }
  canonicalize(model);
  return model;
}

SyntheticScene generate_scene(const PopulationSpec& spec, Geometry geometry,
                              double noise_sigma, std::uint64_t seed) {
  if (!(noise_sigma > 0.0)) {
    throw DomainError("generate_scene: noise sigma must be positive");
  }
  const int dimension = dimension_for(geometry);
  const double half_width = box_half_width(geometry);
  Xoshiro256pp rng(seed);

  SyntheticScene scene{};
  scene.geometry = geometry;
  scene.spec = spec;
  scene.noise_sigma = noise_sigma;

  const auto structures = static_cast<std::size_t>(spec.structure_count());
  bool placed = false;
  for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
    scene.ground_truth_models.clear();
    for (std::size_t i = 0; i < structures; ++i) {
      HyperplaneModel model{};
      model.dimension = dimension;
      model.normal = random_unit(rng, dimension);
      model.offset = uniform_in(rng, kOffsetRange);
      canonicalize(model);
      scene.ground_truth_models.push_back(model);
    }
    placed = true;
    for (std::size_t i = 0; i < structures && placed; ++i) {
      for (std::size_t j = i + 1; j < structures && placed; ++j) {
        const auto& a = scene.ground_truth_models[i];
        const auto& b = scene.ground_truth_models[j];
        if (pair_angle_deg(a.normal, b.normal) < kMinSeparationDeg ||
            std::abs(a.offset - b.offset) < 10.0 * noise_sigma) {
          placed = false;
        }
      }
    }
  }
  if (!placed) {
    throw SeparationFailure(
        "could not place well-separated structures; relax the configuration");
  }

  scene.points.reserve(static_cast<std::size_t>(spec.total_points));
  scene.labels.reserve(static_cast<std::size_t>(spec.total_points));
  for (std::size_t i = 0; i < structures; ++i) {
    const auto& model = scene.ground_truth_models[i];
    const std::int64_t count = spec.structure_sizes[i];
    for (std::int64_t k = 0; k < count; ++k) {
      std::array<double, 3> p = point_on_model(rng, model, half_width);
      const double shift = rng.gaussian() * noise_sigma;
      for (int d = 0; d < dimension; ++d) {
        p[static_cast<std::size_t>(d)] +=
            shift * model.normal[static_cast<std::size_t>(d)];
      }
      scene.points.push_back(p);
      scene.labels.push_back(static_cast<int>(i));
    }
  }
  for (std::int64_t k = 0; k < spec.outlier_count; ++k) {
    std::array<double, 3> p{0.0, 0.0, 0.0};
    for (int d = 0; d < dimension; ++d) {
      p[static_cast<std::size_t>(d)] = uniform_in(rng, half_width);
    }
    scene.points.push_back(p);
    scene.labels.push_back(-1);
  }
  return scene;
}

DemoOutcome run_demo_trial(const SyntheticScene& scene, std::int64_t grab_size,
                           double inlier_threshold, std::uint64_t seed) {
  if (!(inlier_threshold > 0.0)) {
    throw DomainError("run_demo_trial: inlier threshold must be positive");
  }
  const std::int64_t dof = dof_for(scene.geometry);
  const auto total = static_cast<std::size_t>(scene.spec.total_points);
  const auto structures =
      static_cast<std::size_t>(scene.spec.structure_count());

  const std::vector<std::int64_t> grab =
      sample_grab(scene.spec.total_points, grab_size, seed, 0);

  DemoOutcome outcome{};
  outcome.coverage_success = true;
  {
    std::vector<std::int64_t> hits(structures, 0);
    for (const std::int64_t index : grab) {
      const int label = scene.labels[static_cast<std::size_t>(index)];
      if (label >= 0) ++hits[static_cast<std::size_t>(label)];
    }
    for (const std::int64_t h : hits) {
      if (h < dof) outcome.coverage_success = false;
    }
  }

  std::vector<Hypothesis> hypotheses = build_hypotheses(scene, grab, seed);

  // Residuals are fixed per hypothesis; greedy rounds only re-mask them.
  // Cache them unless that would take absurd memory, in which case recompute.
  const bool cache_residuals = hypotheses.size() * total <= 64'000'000;
  std::vector<std::vector<float>> residuals;
  if (cache_residuals) {
    residuals.resize(hypotheses.size());
    for (std::size_t h = 0; h < hypotheses.size(); ++h) {
      if (!hypotheses[h].valid) continue;
      auto& row = residuals[h];
      row.resize(total);
      for (std::size_t p = 0; p < total; ++p) {
        row[p] =
            static_cast<float>(residual(hypotheses[h].model, scene.points[p]));
      }
    }
  }
  auto residual_at = [&](std::size_t h, std::size_t p) {
    return cache_residuals
               ? static_cast<double>(residuals[h][p])
               : residual(hypotheses[h].model, scene.points[p]);
  };
  const double tau = cache_residuals
                         ? static_cast<double>(static_cast<float>(inlier_threshold))
                         : inlier_threshold;

  std::vector<HyperplaneModel> extracted;
  std::vector<char> claimed(total, 0);
  for (std::size_t round = 0; round < structures; ++round) {
    std::int64_t best_count = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    std::size_t best_index = hypotheses.size();
    for (std::size_t h = 0; h < hypotheses.size(); ++h) {
      if (!hypotheses[h].valid) continue;
      std::int64_t count = 0;
      double sum = 0.0;
      for (std::size_t p = 0; p < total; ++p) {
        if (claimed[p]) continue;
        const double value = residual_at(h, p);
        if (value <= tau) {
          ++count;
          sum += value;
        }
      }
      const bool better =
          count > best_count ||
          (count == best_count && count > 0 &&
           (sum < best_sum || (sum == best_sum && h < best_index)));
      if (better) {
        best_count = count;
        best_sum = sum;
        best_index = h;
      }
    }
    if (best_index == hypotheses.size() || best_count == 0) break;
    extracted.push_back(hypotheses[best_index].model);
    for (std::size_t p = 0; p < total; ++p) {
      if (!claimed[p] && residual_at(best_index, p) <= tau) claimed[p] = 1;
    }
  }

  outcome.overlap_scores.assign(structures, 0.0);
  for (const auto& model : extracted) {
    std::vector<std::int64_t> captured(structures, 0);
    for (std::size_t p = 0; p < total; ++p) {
      const int label = scene.labels[p];
      if (label < 0) continue;
      if (residual(model, scene.points[p]) <= inlier_threshold) {
        ++captured[static_cast<std::size_t>(label)];
      }
    }
    for (std::size_t i = 0; i < structures; ++i) {
      const double share =
          static_cast<double>(captured[i]) /
          static_cast<double>(scene.spec.structure_sizes[i]);
      outcome.overlap_scores[i] = std::max(outcome.overlap_scores[i], share);
    }
  }
  outcome.recovered_models = 0;
  for (const double score : outcome.overlap_scores) {
    if (score >= 0.8) ++outcome.recovered_models;
  }
  return outcome;
}

void write_scene(std::ostream& out, const SyntheticScene& scene) {
  const int dimension = dimension_for(scene.geometry);
  out.precision(17);
  for (std::size_t p = 0; p < scene.points.size(); ++p) {
    for (int d = 0; d < dimension; ++d) {
      out << scene.points[p][static_cast<std::size_t>(d)] << ' ';
    }
    out << scene.labels[p] << '\n';
  }
}

}  // namespace onegrab
