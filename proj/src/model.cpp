#include "onegrab/model.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace onegrab {

std::int64_t PopulationSpec::min_structure_size() const {
  return *std::min_element(structure_sizes.begin(), structure_sizes.end());
}

int PopulationSpec::structure_of(std::int64_t index) const {
  std::int64_t upper = 0;
  for (std::size_t i = 0; i < structure_sizes.size(); ++i) {
    upper += structure_sizes[i];
    if (index < upper) return static_cast<int>(i);
  }
  return -1;
}

PopulationSpec validate_population(std::int64_t total_points,
                                   std::vector<std::int64_t> structure_sizes) {
  if (structure_sizes.empty()) {
    throw EmptyStructures("population needs at least one structure");
  }
  if (total_points < 1) {
    throw SizeViolation("population size must be at least 1, got " +
                        std::to_string(total_points));
  }
  std::int64_t inliers = 0;
  for (std::int64_t theta : structure_sizes) {
    if (theta < 1) {
      throw SizeViolation("every structure size must be at least 1, got " +
                          std::to_string(theta));
    }
    inliers += theta;
  }
  if (inliers > total_points) {
    throw SizeViolation("structure sizes sum to " + std::to_string(inliers) +
                        " which exceeds the population of " +
                        std::to_string(total_points));
  }
  PopulationSpec spec;
  spec.total_points = total_points;
  spec.structure_sizes = std::move(structure_sizes);
  spec.outlier_count = total_points - inliers;
  return spec;
}

Requirement::Requirement(std::int64_t dof_in, double confidence_in)
    : dof(dof_in), confidence(confidence_in) {
  if (dof < 0) {
    throw DomainError("dof must be non-negative, got " + std::to_string(dof));
  }
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw DomainError("confidence must lie strictly inside (0, 1), got " +
                      std::to_string(confidence));
  }
}

GrabOutcome classify_grab(const PopulationSpec& spec,
                          std::span<const std::int64_t> indices) {
  GrabOutcome outcome;
  outcome.structure_hits.assign(spec.structure_sizes.size(), 0);
  outcome.grab_size = static_cast<std::int64_t>(indices.size());
  for (std::int64_t index : indices) {
    if (index < 0 || index >= spec.total_points) {
      throw DomainError("grab index " + std::to_string(index) +
                        " outside the population");
    }
    const int structure = spec.structure_of(index);
    if (structure < 0) {
      ++outcome.outlier_hits;
    } else {
      ++outcome.structure_hits[static_cast<std::size_t>(structure)];
    }
  }
  return outcome;
}

const char* to_string(P0Form form) {
  switch (form) {
    case P0Form::paper_literal: return "paper";
    case P0Form::safe: return "safe";
    case P0Form::exponential: return "exp";
  }
  return "?";
}

const char* to_string(DeltaBinomial binomial) {
  switch (binomial) {
    case DeltaBinomial::grab_choose: return "grab";
    case DeltaBinomial::structure_choose: return "structure";
    case DeltaBinomial::strict: return "strict";
  }
  return "?";
}

}  // namespace onegrab
