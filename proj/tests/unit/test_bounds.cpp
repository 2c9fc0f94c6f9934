#include "doctest.h"

#include <cmath>

#include "onegrab/bounds.hpp"
#include "onegrab/hypergeom.hpp"

using namespace onegrab;

TEST_CASE("p0 forms at a hand-computed point") {
  // N = 10, C = 2, theta = 3, r = 4.
  CHECK(p0_bound(4, 2, 3, 10, P0Form::safe) ==
        doctest::Approx(std::pow(0.6, 3)).epsilon(1e-14));
  CHECK(p0_bound(4, 2, 3, 10, P0Form::paper_literal) ==
        doctest::Approx(std::pow(1.0 - 4.0 / 6.0, 3)).epsilon(1e-13));
  CHECK(p0_bound(4, 2, 3, 10, P0Form::exponential) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("the published form can undershoot the true miss probability") {
  // N = 20, C = 2, theta = 5, r = 4: the literal form gives 0.6^5 = 0.07776,
  // but the grab actually misses the structure with probability 91/323.
  const double literal = p0_bound(4, 2, 5, 20, P0Form::paper_literal);
  const double safe = p0_bound(4, 2, 5, 20, P0Form::safe);
  const double exact = structure_tail_exact(20, 5, 4, 1).linear;
  CHECK(literal == doctest::Approx(0.07776).epsilon(1e-12));
  CHECK(exact == doctest::Approx(0.28173374613003094).epsilon(1e-14));
  CHECK(literal < exact);  // the documented counterexample
  CHECK(safe >= exact);    // which is why safe is the default
}

TEST_CASE("safe p0 dominates the exact miss probability everywhere") {
  for (std::int64_t n : {20, 50}) {
    for (std::int64_t theta : {3, 5, 10}) {
      for (std::int64_t r = 0; r <= n; ++r) {
        const double bound = p0_bound(r, 2, theta, n, P0Form::safe);
        const double exact = structure_tail_exact(n, theta, r, 1).linear;
        CHECK(bound >= exact - 1e-12);
      }
    }
  }
}

TEST_CASE("paper-literal domain handling") {
  CHECK_THROWS_AS(p0_bound(11, 2, 5, 30, P0Form::paper_literal), DomainError);
  CHECK(p0_bound(11, 2, 5, 30, P0Form::paper_literal, true) == 0.0);
  CHECK(p0_bound(10, 2, 5, 30, P0Form::paper_literal) == 0.0);  // r = C*theta
  CHECK_THROWS_AS(p0_bound(31, 2, 5, 30, P0Form::safe), DomainError);
}

TEST_CASE("delta correction sum at the worked example") {
  // N = 100, C = 3, theta = 10, r = 20, eps = 2.
  const double correction = 1.0 + 20.0 * 10.0 / 71.0;
  BoundVariant paper_grab{P0Form::paper_literal, DeltaBinomial::grab_choose};
  CHECK(delta_bound(20, 100, 3, 10, 2, paper_grab) ==
        doctest::Approx(std::pow(1.0 / 3.0, 10) * correction).epsilon(1e-12));

  BoundVariant safe_grab{P0Form::safe, DeltaBinomial::grab_choose};
  CHECK(delta_bound(20, 100, 3, 10, 2, safe_grab) ==
        doctest::Approx(std::pow(0.8, 10) * correction).epsilon(1e-12));

  // With eps = 2 the strict and grab forms coincide (k = 1 only).
  BoundVariant safe_strict{P0Form::safe, DeltaBinomial::strict};
  CHECK(delta_bound(20, 100, 3, 10, 2, safe_strict) ==
        doctest::Approx(delta_bound(20, 100, 3, 10, 2, safe_grab)).epsilon(1e-15));

  // The structure form swaps C(r,k) for C(theta,k).
  BoundVariant safe_structure{P0Form::safe, DeltaBinomial::structure_choose};
  CHECK(delta_bound(20, 100, 3, 10, 2, safe_structure) ==
        doctest::Approx(std::pow(0.8, 10) * (1.0 + 10.0 * 10.0 / 71.0))
            .epsilon(1e-12));
}

TEST_CASE("strict dominates grab_choose from eps = 3 on") {
  BoundVariant strict{P0Form::safe, DeltaBinomial::strict};
  BoundVariant grab{P0Form::safe, DeltaBinomial::grab_choose};
  for (std::int64_t r = 5; r <= 60; r += 5) {
    CHECK(delta_bound(r, 100, 3, 10, 3, strict) >=
          delta_bound(r, 100, 3, 10, 3, grab));
  }
}

TEST_CASE("delta edge cases") {
  BoundVariant variant;
  CHECK(delta_bound(20, 100, 3, 10, 0, variant) == 0.0);
  // eps = 1 never touches the denominator, even when it would be zero.
  CHECK(delta_bound(6, 10, 2, 5, 1, variant) ==
        doctest::Approx(p0_bound(6, 2, 5, 10, P0Form::safe)));
  // eps >= 2 with N - r - theta + 1 <= 0 must refuse.
  CHECK_THROWS_AS(delta_bound(6, 10, 2, 5, 2, variant), DenominatorViolation);
}

TEST_CASE("joint bound falls back to the exact tail when the form breaks") {
  const PopulationSpec spec = validate_population(10, {5, 4});
  const BoundBreakdown breakdown = joint_lower_bound(spec, 2, 6);
  REQUIRE(breakdown.exact_tail_fallback.size() == 2);
  CHECK(breakdown.exact_tail_fallback[0] == 1);  // theta = 5 breaks at r = 6
  CHECK(breakdown.exact_tail_fallback[1] == 0);
  CHECK(breakdown.any_fallback());
  CHECK(breakdown.delta_per_structure[0] ==
        doctest::Approx(structure_tail_exact(10, 5, 6, 2).linear));
}

TEST_CASE("equal structures collapse the union sum to one product") {
  const PopulationSpec spec = validate_population(40, {7, 7, 7, 7});
  // Interior point: the collapsed sum must match 1 - C * delta bit for bit.
  const BoundBreakdown interior = joint_lower_bound(spec, 2, 24);
  const double delta = delta_bound(24, 40, 4, 7, 2, interior.variant);
  CHECK(interior.joint_lower_bound > 0.0);
  CHECK(interior.joint_lower_bound < 1.0);
  CHECK(interior.joint_lower_bound == 1.0 - 4.0 * delta);
  // Small grabs drive 1 - C * delta negative; the bound clamps to zero.
  const BoundBreakdown clamped = joint_lower_bound(spec, 2, 12);
  CHECK(1.0 - 4.0 * delta_bound(12, 40, 4, 7, 2, clamped.variant) < 0.0);
  CHECK(clamped.joint_lower_bound == 0.0);
}

TEST_CASE("joint bound is clamped and never exceeds the exact probability") {
  const PopulationSpec spec = validate_population(100, {10, 10, 10, 10, 10});
  for (std::int64_t r = 0; r <= 100; r += 1) {
    const BoundBreakdown breakdown = joint_lower_bound(spec, 2, r);
    CHECK(breakdown.joint_lower_bound >= 0.0);
    CHECK(breakdown.joint_lower_bound <= 1.0);
    const double exact = joint_success_exact(spec, 2, r).linear;
    CHECK(breakdown.joint_lower_bound <= exact + 1e-10);
  }
  CHECK_THROWS_AS(joint_lower_bound(spec, 2, 101), DomainError);
}
