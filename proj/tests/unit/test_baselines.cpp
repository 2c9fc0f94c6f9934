#include "doctest.h"

#include "onegrab/baselines.hpp"

using namespace onegrab;

TEST_CASE("iteration counts match the textbook table") {
  CHECK(ransac_iterations(0.5, 2, 0.99) == 17);
  CHECK(ransac_iterations(0.1, 2, 0.95) == 299);
  CHECK(ransac_iterations(1.0, 2, 0.99) == 1);
  CHECK(ransac_iterations(0.5, 0, 0.99) == 1);
}

TEST_CASE("iteration counts reject impossible inputs") {
  CHECK_THROWS_AS(ransac_iterations(0.0, 2, 0.95), DomainError);
  CHECK_THROWS_AS(ransac_iterations(1.5, 2, 0.95), DomainError);
  CHECK_THROWS_AS(ransac_iterations(0.5, 2, 1.0), DomainError);
  CHECK_THROWS_AS(ransac_iterations(0.5, -1, 0.95), DomainError);
}

TEST_CASE("sequential baseline shrinks the population per stage") {
  const PopulationSpec spec = validate_population(100, {30, 30});
  const BaselineReport report = sequential_total(spec, 2, 0.99);
  CHECK(report.method_name == "sequential_ransac");
  REQUIRE(report.per_stage.size() == 2);
  CHECK(report.per_stage[0].population == 100);
  CHECK(report.per_stage[0].iterations == 49);
  CHECK(report.per_stage[1].population == 70);
  CHECK(report.per_stage[1].iterations == 23);
  CHECK(report.hypotheses == 72);
  CHECK(report.points_touched == 144);
}

TEST_CASE("sequential baseline processes larger structures first") {
  const PopulationSpec spec = validate_population(100, {10, 40});
  const BaselineReport report = sequential_total(spec, 2, 0.95);
  REQUIRE(report.per_stage.size() == 2);
  // Stage one sees the size-40 structure against the full population.
  CHECK(report.per_stage[0].inlier_ratio == doctest::Approx(0.4));
  CHECK(report.per_stage[1].inlier_ratio == doctest::Approx(10.0 / 60.0));
  CHECK_THROWS_AS(sequential_total(spec, 11, 0.95), Infeasible);
}
