#include "doctest.h"

#include <cmath>

#include "onegrab/hypergeom.hpp"

using namespace onegrab;

TEST_CASE("single-structure miss probability, hand-checked") {
  // Grab 4 of 20 with one structure of 5: P(d = 0) = C(15,4)/C(20,4) = 91/323.
  const ProbabilityValue miss = structure_tail_exact(20, 5, 4, 1);
  REQUIRE(miss.exact.has_value());
  CHECK(*miss.exact == BigRational(91, 323));
  CHECK(miss.linear == doctest::Approx(0.28173374613003094).epsilon(1e-15));
}

TEST_CASE("lower tail accumulates the first eps terms") {
  const ProbabilityValue tail = structure_tail_exact(100, 10, 20, 2);
  CHECK(tail.linear == doctest::Approx(0.3630494342076572).epsilon(1e-13));
  // eps = 0 is the empty sum.
  CHECK(structure_tail_exact(100, 10, 20, 0).linear == 0.0);
  // Certain miss when the grab cannot reach the structure.
  CHECK(structure_tail_exact(10, 3, 0, 1).linear == 1.0);
}

TEST_CASE("tail backends agree far from the rational limit") {
  const double exact = structure_tail_exact(120, 12, 30, 3, Backend::rational).linear;
  const double logged =
      structure_tail_exact(120, 12, 30, 3, Backend::log_space).linear;
  CHECK(logged == doctest::Approx(exact).epsilon(1e-12));
  CHECK_FALSE(
      structure_tail_exact(120, 12, 30, 3, Backend::log_space).exact.has_value());
}

TEST_CASE("joint success on the two-structure toy population") {
  const PopulationSpec spec = validate_population(10, {3, 3});

  // One point per structure: inclusion-exclusion gives 141/210 = 47/70.
  const ProbabilityValue r4 = joint_success_exact(spec, 1, 4);
  REQUIRE(r4.exact.has_value());
  CHECK(*r4.exact == BigRational(47, 70));
  CHECK(r4.linear == doctest::Approx(0.6714285714285715).epsilon(1e-15));

  const ProbabilityValue r5 = joint_success_exact(spec, 1, 5);
  CHECK(*r5.exact == BigRational(5, 6));

  // Two points per structure out of a grab of 5.
  const ProbabilityValue pairs = joint_success_exact(spec, 2, 5);
  CHECK(*pairs.exact == BigRational(1, 6));
}

TEST_CASE("joint success edge cases") {
  const PopulationSpec spec = validate_population(10, {3, 3});
  CHECK(joint_success_exact(spec, 0, 0).linear == 1.0);
  CHECK(joint_success_exact(spec, 1, 10).linear == 1.0);  // grab everything
  CHECK(joint_success_exact(spec, 4, 10).linear == 0.0);  // dof > theta
  CHECK(joint_success_exact(spec, 1, 1).linear == 0.0);   // r < C * dof
  CHECK_THROWS_AS(joint_success_exact(spec, 1, 11), DomainError);
}

TEST_CASE("brute force oracle agrees with the convolution") {
  const PopulationSpec spec = validate_population(9, {2, 3});
  for (std::int64_t dof = 0; dof <= 2; ++dof) {
    for (std::int64_t r = 0; r <= 9; ++r) {
      const ProbabilityValue fast = joint_success_exact(spec, dof, r);
      const ProbabilityValue slow = joint_success_bruteforce(spec, dof, r);
      REQUIRE(fast.exact.has_value());
      REQUIRE(slow.exact.has_value());
      CHECK(*fast.exact == *slow.exact);
    }
  }
}

TEST_CASE("brute force refuses absurd enumerations") {
  const PopulationSpec spec = validate_population(50, {10, 10});
  CHECK_THROWS_AS(joint_success_bruteforce(spec, 1, 25), TooLarge);
}

TEST_CASE("log-space joint success tracks the rational value") {
  const PopulationSpec spec = validate_population(400, {40, 40, 40});
  // N = 400 is past the automatic rational limit; force both backends.
  const double logged = joint_success_exact(spec, 2, 60, Backend::log_space).linear;
  const double exact = joint_success_exact(spec, 2, 60, Backend::rational).linear;
  CHECK(logged == doctest::Approx(exact).epsilon(1e-11));
  CHECK(std::exp(joint_success_exact(spec, 2, 60).log_value) ==
        doctest::Approx(exact).epsilon(1e-11));
}
