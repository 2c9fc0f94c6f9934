"""Smoke tests for the python bindings.

The compiled module is found through PYTHONPATH (set by ctest to the build
tree); the suite only checks that the main operations are usable from python
and agree with a few hand-checked values.
"""

from fractions import Fraction

import pytest

import onegrab as og


@pytest.fixture
def toy_spec():
    return og.validate_population(10, [3, 3])


def test_population_roundtrip(toy_spec):
    assert toy_spec.total_points == 10
    assert toy_spec.structure_sizes == [3, 3]
    assert toy_spec.outlier_count == 4
    assert toy_spec.structure_of(0) == 0
    assert toy_spec.structure_of(9) == -1


def test_validation_errors_map_to_python_exceptions():
    with pytest.raises(og.EmptyStructures):
        og.validate_population(10, [])
    with pytest.raises(og.SizeViolation):
        og.validate_population(5, [3, 3])
    with pytest.raises(og.DomainError):
        og.Requirement(2, 1.5)


def test_exact_probability_is_a_fraction(toy_spec):
    value = og.joint_success_exact(toy_spec, 1, 4)
    assert value.exact == Fraction(47, 70)
    assert value.linear == pytest.approx(47 / 70, abs=1e-15)
    assert float(value) == value.linear


def test_bound_is_conservative(toy_spec):
    breakdown = og.joint_lower_bound(toy_spec, 1, 4)
    exact = og.joint_success_exact(toy_spec, 1, 4).linear
    assert breakdown.joint_lower_bound <= exact + 1e-10
    assert breakdown.p0_per_structure == pytest.approx([0.216, 0.216])
    assert not breakdown.any_fallback()


def test_sizing_methods(toy_spec):
    exact = og.min_grab_size(toy_spec, og.Requirement(1, 0.8), og.SizingMethod.exact)
    assert exact.r == 5
    bound = og.min_grab_size(toy_spec, og.Requirement(1, 0.8), og.SizingMethod.bound)
    assert bound.r >= exact.r
    with pytest.raises(og.Infeasible):
        og.min_grab_size(toy_spec, og.Requirement(4, 0.8), og.SizingMethod.exact)


def test_monte_carlo_is_deterministic():
    spec = og.validate_population(100, [10] * 5)
    first = og.estimate_success(spec, 2, 40, 2000, 123, 1)
    second = og.estimate_success(spec, 2, 40, 2000, 123, 8)
    assert first.successes == second.successes
    grab = og.sample_grab(100, 12, 7, 0)
    assert grab == sorted(grab)
    assert og.sample_grab(100, 12, 7, 0) == grab


def test_search_accepts_python_predicates():
    value, evaluations, fallback = og.find_min_true(0, 100, lambda r: r >= 37)
    assert value == 37
    assert evaluations > 0
    assert not fallback


def test_demo_pipeline_runs():
    spec = og.validate_population(60, [15, 15, 15])
    scene = og.generate_scene(spec, og.Geometry.line2d, 0.01, 42)
    assert len(scene.points) == 60
    outcome = og.run_demo_trial(scene, 40, 0.03, 7)
    assert 0 <= outcome.recovered_models <= 3
    assert len(outcome.overlap_scores) == 3
    text = og.scene_to_text(scene)
    assert len(text.splitlines()) == 60


def test_baselines_match_the_textbook_numbers():
    assert og.ransac_iterations(0.5, 2, 0.99) == 17
    spec = og.validate_population(100, [30, 30])
    report = og.sequential_total(spec, 2, 0.99)
    assert report.hypotheses == 72
    assert report.points_touched == 144
