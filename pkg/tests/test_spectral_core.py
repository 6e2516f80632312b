import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from conftest import scalar
from core.errors import AxisError, BandLimitError, GridMismatchError, GridSpecError
from core.spectral_core import (
    FourierScalar,
    GridSpec,
    grid_integral,
    integral,
    inverse_laplacian,
    l2_inner,
    laplacian,
    mean,
    partial_derivative,
    product,
    random_band_limited,
    transform_roundtrip,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.mark.parametrize("points", [8, 24, 100, 0])
def test_grid_spec_rejects_bad_sizes(points):
    with pytest.raises(GridSpecError):
        GridSpec(dimension=1, points_per_axis=points)


def test_grid_spec_rejects_dimension_three():
    with pytest.raises(GridSpecError):
        GridSpec(dimension=3, points_per_axis=16)


def test_grid_spec_properties():
    spec = GridSpec(dimension=2, points_per_axis=64)
    assert spec.dealias_cutoff == 21
    assert spec.shape == (64, 64)
    assert spec.volume == pytest.approx(4 * math.pi ** 2)
    assert GridSpec(dimension=1, points_per_axis=16).dealias_cutoff == 5


def test_roundtrip_sin(spec1):
    f = scalar(spec1, np.sin)
    assert (transform_roundtrip(f) - f).sup_norm() <= 1e-12


def test_roundtrip_zero_is_exact(spec1):
    zero = FourierScalar.zeros(spec1)
    assert np.all(transform_roundtrip(zero).coefficients == 0)


def test_roundtrip_random(spec2):
    f = random_band_limited(spec2, seed=7, active_modes=8, decay=1.0, include_constant=True)
    assert_allclose(transform_roundtrip(f).coefficients, f.coefficients, atol=1e-12)


def test_derivative_examples(spec2):
    sin_x = scalar(spec2, lambda x, y: np.sin(x))
    cos_2y = scalar(spec2, lambda x, y: np.cos(2 * y))
    assert (partial_derivative(sin_x, 0) - scalar(spec2, lambda x, y: np.cos(x))).sup_norm() < 1e-12
    assert (partial_derivative(cos_2y, 1) - scalar(spec2, lambda x, y: -2 * np.sin(2 * y))).sup_norm() < 1e-12
    five = FourierScalar.constant(spec2, 5.0)
    assert partial_derivative(five, 0).sup_norm() == 0.0
    assert partial_derivative(five, 1).sup_norm() == 0.0


def test_derivative_axis_out_of_range(spec1):
    with pytest.raises(AxisError):
        partial_derivative(FourierScalar.zeros(spec1), 1)


def test_product_sin_squared(spec1):
    sin_x = scalar(spec1, np.sin)
    expected = scalar(spec1, lambda x: 0.5 - 0.5 * np.cos(2 * x))
    assert (product(sin_x, sin_x) - expected).sup_norm() < 1e-14


def test_product_with_one_is_identity(spec1):
    f = random_band_limited(spec1, seed=3, active_modes=10, decay=1.0, include_constant=True)
    assert_allclose((f * FourierScalar.constant(spec1, 1.0)).coefficients, f.coefficients, atol=1e-14)


def test_product_truncates_beyond_cutoff():
    spec = GridSpec(dimension=1, points_per_axis=16)
    f = scalar(spec, lambda x: np.cos(5 * x))
    g = scalar(spec, lambda x: np.cos(6 * x))
    fg = product(f, g)
    k = np.abs(spec.wavenumbers()[0])
    assert np.all(fg.coefficients[k > spec.dealias_cutoff] == 0)
    # cos 5x cos 6x = ½ cos x + ½ cos 11x; the k=1 part survives untouched
    assert fg.coefficients[1] == pytest.approx(0.25, abs=1e-14)


def test_product_grid_mismatch(spec1):
    other = GridSpec(dimension=1, points_per_axis=32)
    with pytest.raises(GridMismatchError):
        product(FourierScalar.zeros(spec1), FourierScalar.zeros(other))


def test_mean_and_integral(spec1, spec2):
    f = scalar(spec1, lambda x: 2 + np.cos(x))
    assert mean(f) == pytest.approx(2.0)
    assert integral(f) == pytest.approx(4 * math.pi)
    assert mean(scalar(spec2, lambda x, y: np.sin(x) * np.sin(y))) == pytest.approx(0.0, abs=1e-15)
    cos2 = scalar(spec1, lambda x: np.cos(x) ** 2)
    assert mean(cos2) == pytest.approx(0.5)
    assert integral(cos2) == pytest.approx(math.pi)
    assert grid_integral(cos2) == pytest.approx(math.pi)


def test_l2_inner_examples(spec1, spec2):
    sin_x, cos_x = scalar(spec1, np.sin), scalar(spec1, np.cos)
    assert l2_inner(sin_x, sin_x) == pytest.approx(math.pi)
    assert l2_inner(sin_x, cos_x) == pytest.approx(0.0, abs=1e-14)
    one = FourierScalar.constant(spec2, 1.0)
    assert l2_inner(one, one) == pytest.approx(4 * math.pi ** 2)


def test_from_coefficients_fills_mirror(spec1):
    f = FourierScalar.from_coefficients(spec1, [[1, 0.5, 0.0], [0, 2.0, 0.0]])
    assert (f - scalar(spec1, lambda x: 2 + np.cos(x))).sup_norm() < 1e-14


def test_from_coefficients_rejects_out_of_band(spec1):
    with pytest.raises(BandLimitError):
        FourierScalar.from_coefficients(spec1, [[spec1.dealias_cutoff + 1, 1.0, 0.0]])


def test_from_coefficients_rejects_complex_constant(spec1):
    with pytest.raises(GridSpecError):
        FourierScalar.from_coefficients(spec1, [[0, 1.0, 0.5]])


def test_laplacian_inverse(spec2):
    f = random_band_limited(spec2, seed=11, active_modes=8, decay=1.0)
    g = inverse_laplacian(f)
    assert g.mean() == 0.0
    assert (laplacian(g) - f).sup_norm() < 1e-12


def test_random_band_limited_deterministic(spec1):
    a = random_band_limited(spec1, seed=5, active_modes=6, decay=2.0, include_constant=True)
    b = random_band_limited(spec1, seed=5, active_modes=6, decay=2.0, include_constant=True)
    assert np.array_equal(a.coefficients, b.coefficients)


def test_random_band_limited_without_constant_has_zero_mean(spec2):
    f = random_band_limited(spec2, seed=9, active_modes=5, decay=2.0)
    assert f.mean() == 0.0


def test_random_band_limited_spectrum_follows_decay(spec1):
    decay = 1.5
    f = random_band_limited(spec1, seed=1, active_modes=4, decay=decay)
    rng = np.random.default_rng(1)
    draws = rng.standard_normal(spec1.shape) + 1j * rng.standard_normal(spec1.shape)
    for k in range(1, 5):
        expected = 0.5 * (draws[k] + np.conj(draws[-k])) * k ** (-decay)
        assert f.coefficients[k] == pytest.approx(expected, abs=1e-14)
    assert np.all(f.coefficients[5:-4] == 0)


def test_random_band_limited_rejects_too_many_modes(spec1):
    with pytest.raises(BandLimitError):
        random_band_limited(spec1, seed=0, active_modes=spec1.dealias_cutoff + 1, decay=2.0)


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_leibniz_rule(seed):
    spec = GridSpec(dimension=2, points_per_axis=32)
    f = random_band_limited(spec, seed, active_modes=5, decay=1.0, include_constant=True)
    g = random_band_limited(spec, seed + 1, active_modes=5, decay=1.0, include_constant=True)
    for axis in (0, 1):
        lhs = partial_derivative(f * g, axis)
        rhs = partial_derivative(f, axis) * g + f * partial_derivative(g, axis)
        assert (lhs - rhs).sup_norm() <= 1e-10


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_integral_of_derivative_vanishes(seed):
    spec = GridSpec(dimension=1, points_per_axis=64)
    f = random_band_limited(spec, seed, active_modes=10, decay=1.0, include_constant=True)
    assert integral(partial_derivative(f, 0)) == 0.0


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_l2_inner_symmetric_and_nonnegative(seed):
    spec = GridSpec(dimension=1, points_per_axis=64)
    f = random_band_limited(spec, seed, active_modes=10, decay=1.0, include_constant=True)
    g = random_band_limited(spec, seed + 1, active_modes=10, decay=1.0)
    assert l2_inner(f, g) == pytest.approx(l2_inner(g, f), rel=1e-12, abs=1e-14)
    assert l2_inner(f, f) > 0
