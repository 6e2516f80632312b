import math

import numpy as np
import pytest

from conftest import field_x, scalar
from core.curvature_engine import (
    curvature_survey,
    expected_curvature,
    nabla_identity,
    numerator_closed,
    numerator_simplified,
    numerator_terms,
    sample_seed,
    sectional_curvature,
    term_beta,
    term_bracket,
    term_delta,
    term_diag,
)
from core.errors import ConfigError, DegeneratePlaneError
from core.exterior_calculus import divergence, skew_gradient
from core.semidirect_algebra import AlgebraVector, b_diag, commutator, random_algebra_vector
from core.spectral_core import FourierScalar, random_band_limited


def test_worked_terms(sin_cos_pair):
    u, v = sin_cos_pair
    assert term_delta(u, v) == pytest.approx(9 * math.pi / 64, abs=1e-10)
    assert term_beta(u, v) == pytest.approx(-math.pi / 4, abs=1e-10)
    assert term_bracket(u, v) == pytest.approx(0.0, abs=1e-10)
    assert term_diag(u, v) == pytest.approx(9 * math.pi / 64, abs=1e-10)
    assert numerator_terms(u, v) == pytest.approx(math.pi / 32, abs=1e-10)


def test_worked_sectional(sin_cos_pair):
    breakdown = sectional_curvature(*sin_cos_pair)
    assert breakdown.sectional == pytest.approx(1 / (2 * math.pi), abs=1e-10)
    assert breakdown.numerator_simplified == pytest.approx(math.pi / 32, abs=1e-12)
    assert breakdown.numerator_closed == pytest.approx(math.pi / 32, abs=1e-12)
    assert breakdown.gram == pytest.approx(math.pi ** 2 / 16)
    assert breakdown.route_spread() <= 1e-10


def test_bracket_term_with_function_slot(spec1):
    u = field_x(spec1, np.sin)
    v = field_x(spec1, lambda x: 0 * x, np.sin)
    assert term_bracket(u, v) == pytest.approx(-3 * math.pi / 64, abs=1e-12)


def test_numerators_with_constant_function(spec1):
    u = field_x(spec1, np.sin)
    v = field_x(spec1, lambda x: 0 * x, lambda x: 1 + 0 * x)
    assert numerator_simplified(u, v) == pytest.approx(math.pi / 16, abs=1e-12)
    assert numerator_closed(u, v) == pytest.approx(math.pi / 16, abs=1e-12)
    assert numerator_terms(u, v) == pytest.approx(math.pi / 16, abs=1e-10)


def test_degenerate_plane_rejected(spec1):
    u = field_x(spec1, np.sin)
    with pytest.raises(DegeneratePlaneError):
        sectional_curvature(u, u)
    with pytest.raises(DegeneratePlaneError):
        sectional_curvature(u, 2.0 * u)


def test_divergence_free_direction_is_degenerate(spec1):
    u = field_x(spec1, np.sin)
    translation = field_x(spec1, lambda x: 1 + 0 * x)
    with pytest.raises(DegeneratePlaneError):
        sectional_curvature(u, translation)


def test_nabla_identity_worked_example(sin_cos_pair, spec1):
    rep = nabla_identity(*sin_cos_pair)
    assert (rep.div_b1 - scalar(spec1, lambda x: -0.75 * np.sin(2 * x))).sup_norm() <= 1e-13
    assert rep.b2.sup_norm() <= 1e-14


def test_random_pair_on_t2(survey_spec2):
    u = random_algebra_vector(survey_spec2, 3, active_modes=10)
    v = random_algebra_vector(survey_spec2, 4, active_modes=10)
    breakdown = sectional_curvature(u, v)
    assert breakdown.sectional == pytest.approx(1 / (4 * math.pi ** 2), abs=1e-7)
    assert breakdown.route_spread() <= 1e-9


def test_random_pair_on_t1(survey_spec1):
    u = random_algebra_vector(survey_spec1, 30, active_modes=21)
    v = random_algebra_vector(survey_spec1, 31, active_modes=21)
    assert sectional_curvature(u, v).sectional == pytest.approx(1 / (2 * math.pi), rel=1e-8)


def test_nabla_on_diagonal_is_minus_b_diag(survey_spec2):
    u = random_algebra_vector(survey_spec2, 11, active_modes=6)
    assert (nabla_identity(u, u) + b_diag(u)).sup_norm() <= 1e-12


def test_nabla_antisymmetric_part_is_minus_bracket(survey_spec2):
    u = random_algebra_vector(survey_spec2, 12, active_modes=6)
    v = random_algebra_vector(survey_spec2, 13, active_modes=6)
    bracket = commutator(u, v)
    difference = nabla_identity(u, v) - nabla_identity(v, u)
    assert (difference.div_b1 + divergence(bracket.v1)).sup_norm() <= 1e-11
    assert (difference.b2 + bracket.v2).sup_norm() <= 1e-11


@pytest.mark.parametrize("dimension_spec", ["survey_spec1", "survey_spec2"])
def test_numerator_is_symmetric_and_nonnegative(dimension_spec, request):
    spec = request.getfixturevalue(dimension_spec)
    for seed in range(3):
        u = random_algebra_vector(spec, 40 + seed, active_modes=6)
        v = random_algebra_vector(spec, 50 + seed, active_modes=6)
        forward = numerator_terms(u, v)
        assert forward == pytest.approx(numerator_terms(v, u), abs=1e-10)
        assert forward >= -1e-12


@pytest.mark.parametrize("a, b, c", [(2.0, -0.5, 1.5), (-1.0, 3.0, 0.0), (0.25, 1.0, -4.0)])
def test_sectional_depends_only_on_the_plane(survey_spec2, a, b, c):
    u = random_algebra_vector(survey_spec2, 21, active_modes=6)
    v = random_algebra_vector(survey_spec2, 22, active_modes=6)
    base = sectional_curvature(u, v).sectional
    changed = sectional_curvature(a * u, b * v + c * u).sectional
    assert changed == pytest.approx(base, abs=1e-9)


def test_divergence_free_shift_leaves_numerator_unchanged(survey_spec2):
    u = random_algebra_vector(survey_spec2, 31, active_modes=6)
    v = random_algebra_vector(survey_spec2, 32, active_modes=6)
    w = skew_gradient(random_band_limited(survey_spec2, 33, active_modes=6, decay=1.0))
    shifted = u + AlgebraVector(w, FourierScalar.zeros(survey_spec2))
    base = numerator_closed(u, v)
    assert abs(numerator_closed(shifted, v) - base) <= 1e-10 * (1 + abs(base))


def test_expected_curvature_values():
    assert expected_curvature(1) == pytest.approx(0.1591549431, abs=1e-10)
    assert expected_curvature(2) == pytest.approx(0.0253302959, abs=1e-10)


def test_sample_seed_is_stable():
    assert sample_seed(42, 0) == sample_seed(42, 0)
    assert sample_seed(42, 0) != sample_seed(42, 1)
    assert sample_seed(42, 0) != sample_seed(43, 0)


def test_small_survey_t1():
    report = curvature_survey(dimension=1, samples=10, seed=42)
    assert report.samples == 10
    assert report.expected_curvature == pytest.approx(1 / (2 * math.pi))
    assert report.max_rel_error <= 1e-8
    assert report.route_spread_max <= 1e-9
    assert set(report.per_term_stats) >= {"term_delta", "term_beta", "term_bracket", "term_diag", "sectional"}
    assert report.per_term_stats["term_bracket"]["max"] <= 0.0


def test_survey_independent_of_thread_count():
    serial = curvature_survey(dimension=2, samples=4, seed=7, threads=1).to_dict()
    pooled = curvature_survey(dimension=2, samples=4, seed=7, threads=4).to_dict()
    assert serial == pooled


def test_survey_rejects_zero_samples():
    with pytest.raises(ConfigError):
        curvature_survey(dimension=1, samples=0, seed=1)


@pytest.mark.slow
def test_full_survey_t1():
    report = curvature_survey(dimension=1, samples=200, seed=42, threads=2)
    assert report.max_rel_error <= 1e-8


@pytest.mark.slow
def test_full_survey_t2():
    report = curvature_survey(dimension=2, samples=50, seed=7, threads=2)
    assert report.max_rel_error <= 1e-6
