import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import scalar
from core.errors import DimensionError, GridMismatchError
from core.exterior_calculus import (
    OneForm,
    TwoForm,
    VectorField,
    contract,
    d0,
    d1,
    delta1,
    delta2,
    divergence,
    flat,
    form_inner,
    gradient,
    hodge_split,
    integrated_pairing,
    inv_A_exact,
    lie_bracket,
    lie_formula_residual,
    operator_A,
    random_vector_field,
    sharp,
    skew_gradient,
    two_form_inner,
    wedge11,
)
from core.spectral_core import FourierScalar, GridSpec, l2_inner, random_band_limited

seeds = st.integers(min_value=0, max_value=2**31 - 1)


def vec(spec, *fns):
    return VectorField(tuple(scalar(spec, fn) for fn in fns))


def form(spec, *fns):
    return OneForm(tuple(scalar(spec, fn) for fn in fns))


def close(a, b, tol=1e-12):
    return (a - b).sup_norm() <= tol


def test_flat_and_sharp(spec1, spec2):
    v = vec(spec1, np.sin)
    assert close(flat(v), form(spec1, np.sin))
    alpha = form(spec2, lambda x, y: 0 * x, lambda x, y: np.cos(y))
    assert close(sharp(alpha), vec(spec2, lambda x, y: 0 * x, lambda x, y: np.cos(y)))
    w = random_vector_field(spec2, [1, 2], active_modes=6)
    assert (sharp(flat(w)) - w).sup_norm() == 0.0


def test_gradient_and_divergence(spec1, spec2):
    assert close(divergence(vec(spec1, np.sin)), scalar(spec1, np.cos))
    grad = gradient(scalar(spec2, lambda x, y: np.sin(x) + np.cos(y)))
    assert close(grad, vec(spec2, lambda x, y: np.cos(x) + 0 * y, lambda x, y: -np.sin(y) + 0 * x))
    lap = divergence(gradient(scalar(spec1, lambda x: np.cos(2 * x))))
    assert close(lap, scalar(spec1, lambda x: -4 * np.cos(2 * x)))


def test_divergence_has_zero_mean(spec2):
    v = random_vector_field(spec2, [3, 4], active_modes=8)
    assert divergence(v).mean() == 0.0


def test_d_and_delta_examples(spec1, spec2):
    f = scalar(spec2, lambda x, y: np.sin(x) * np.sin(y))
    assert d1(d0(f)).sup_norm() <= 1e-13
    assert close(delta1(form(spec1, np.sin)), scalar(spec1, lambda x: -np.cos(x)))
    out = delta2(TwoForm(scalar(spec2, lambda x, y: np.sin(x) + 0 * y)))
    assert close(out, form(spec2, lambda x, y: 0 * x, lambda x, y: -np.cos(x) + 0 * y))


def test_two_form_ops_need_t2(spec1):
    alpha = form(spec1, np.sin)
    with pytest.raises(DimensionError):
        d1(alpha)
    with pytest.raises(DimensionError):
        wedge11(alpha, alpha)
    with pytest.raises(DimensionError):
        TwoForm(scalar(spec1, np.sin))


def test_wedge_examples(spec2):
    dx = form(spec2, lambda x, y: 1 + 0 * x, lambda x, y: 0 * x)
    dy = form(spec2, lambda x, y: 0 * x, lambda x, y: 1 + 0 * x)
    assert close(wedge11(dx, dy).density, FourierScalar.constant(spec2, 1.0))
    f_dx = form(spec2, lambda x, y: np.cos(x) + 0 * y, lambda x, y: 0 * x)
    g_dx = form(spec2, lambda x, y: np.sin(y) + 0 * x, lambda x, y: 0 * x)
    assert wedge11(f_dx, g_dx).sup_norm() <= 1e-14
    sin_y_dy = form(spec2, lambda x, y: 0 * x, lambda x, y: np.sin(y) + 0 * x)
    assert close(wedge11(f_dx, sin_y_dy).density, scalar(spec2, lambda x, y: np.cos(x) * np.sin(y)))


def test_lie_bracket_examples(spec1, spec2):
    bracket = lie_bracket(vec(spec1, np.sin), vec(spec1, np.cos))
    assert close(bracket, vec(spec1, lambda x: -1 + 0 * x))
    x_field = vec(spec2, lambda x, y: np.sin(y) + 0 * x, lambda x, y: 0 * x)
    d_y = vec(spec2, lambda x, y: 0 * x, lambda x, y: 1 + 0 * x)
    assert close(lie_bracket(x_field, d_y), vec(spec2, lambda x, y: -np.cos(y) + 0 * x, lambda x, y: 0 * x))
    w = random_vector_field(spec2, [5, 6], active_modes=6)
    assert lie_bracket(w, w).sup_norm() <= 1e-13


def test_lie_bracket_grid_mismatch(spec1):
    other = GridSpec(dimension=1, points_per_axis=32)
    with pytest.raises(GridMismatchError):
        lie_bracket(VectorField.zeros(spec1), VectorField.zeros(other))


def test_operator_A_examples(spec1, spec2):
    assert close(operator_A(vec(spec1, np.sin)), form(spec1, np.sin))
    assert operator_A(vec(spec1, lambda x: 1 + 0 * x)).sup_norm() == 0.0
    assert operator_A(vec(spec2, lambda x, y: np.sin(y) + 0 * x, lambda x, y: 0 * x)).sup_norm() <= 1e-14


def test_inverse_A_examples(spec1):
    w = inv_A_exact(scalar(spec1, np.cos))
    assert close(w, vec(spec1, lambda x: -np.sin(x)))
    assert close(divergence(w), scalar(spec1, lambda x: -np.cos(x)))
    shifted = inv_A_exact(scalar(spec1, lambda x: 2 + np.cos(x)))
    assert close(divergence(shifted), scalar(spec1, lambda x: -np.cos(x)))
    assert inv_A_exact(FourierScalar.constant(spec1, 3.0)).sup_norm() == 0.0


def test_hodge_examples(spec1, spec2):
    parts = hodge_split(form(spec1, np.cos))
    assert close(parts.exact_potential, scalar(spec1, np.sin))
    assert parts.coexact.sup_norm() <= 1e-13 and parts.harmonic.sup_norm() <= 1e-13

    parts = hodge_split(form(spec1, lambda x: 3 + 0 * x))
    assert close(parts.harmonic, form(spec1, lambda x: 3 + 0 * x))
    assert parts.exact.sup_norm() <= 1e-14 and parts.coexact.sup_norm() <= 1e-14

    alpha = form(spec2, lambda x, y: 0 * x, lambda x, y: np.cos(x) + 0 * y)
    parts = hodge_split(alpha)
    assert close(parts.coexact, alpha)
    assert parts.exact.sup_norm() <= 1e-14 and parts.harmonic.sup_norm() <= 1e-14


@settings(max_examples=15, deadline=None)
@given(seed=seeds)
def test_hodge_parts_orthogonal_and_resum(seed):
    spec = GridSpec(dimension=2, points_per_axis=32)
    alpha = flat(random_vector_field(spec, [seed, seed + 1], active_modes=8))
    parts = hodge_split(alpha)
    assert (parts.resum() - alpha).sup_norm() <= 1e-11
    exact, coexact, harmonic = parts.exact, parts.coexact, parts.harmonic
    assert abs(integrated_pairing(exact, sharp(coexact))) <= 1e-11
    assert abs(integrated_pairing(exact, sharp(harmonic))) <= 1e-11
    assert abs(integrated_pairing(coexact, sharp(harmonic))) <= 1e-11


@settings(max_examples=15, deadline=None)
@given(seed=seeds)
def test_d_delta_adjointness(seed):
    spec = GridSpec(dimension=2, points_per_axis=32)
    f = random_band_limited(spec, seed, active_modes=8, decay=1.5, include_constant=True)
    h = random_band_limited(spec, seed + 1, active_modes=8, decay=1.5)
    alpha = flat(random_vector_field(spec, [seed + 2, seed + 3], active_modes=8))
    assert integrated_pairing(d0(f), sharp(alpha)) == pytest.approx(l2_inner(f, delta1(alpha)), abs=1e-10)
    omega = TwoForm(h)
    assert l2_inner(d1(alpha).density, h) == pytest.approx(integrated_pairing(alpha, sharp(delta2(omega))), abs=1e-10)


@settings(max_examples=15, deadline=None)
@given(seed=seeds)
def test_d_squared_and_delta_squared_vanish(seed):
    spec = GridSpec(dimension=2, points_per_axis=32)
    f = random_band_limited(spec, seed, active_modes=8, decay=1.0)
    assert d1(d0(f)).sup_norm() <= 1e-12
    assert delta1(delta2(TwoForm(f))).sup_norm() <= 1e-12


def test_kernel_of_A_both_directions(spec2):
    div_free = skew_gradient(random_band_limited(spec2, 21, active_modes=8, decay=1.0))
    assert divergence(div_free).sup_norm() <= 1e-12
    assert operator_A(div_free).sup_norm() <= 1e-12
    generic = random_vector_field(spec2, [22, 23], active_modes=8)
    assert divergence(generic).sup_norm() > 1e-3
    assert operator_A(generic).sup_norm() > 1e-3


@settings(max_examples=15, deadline=None)
@given(seed=seeds)
def test_lie_formula_on_t2(seed):
    spec = GridSpec(dimension=2, points_per_axis=32)
    v = random_vector_field(spec, [seed, seed + 1], active_modes=5)
    w = random_vector_field(spec, [seed + 2, seed + 3], active_modes=5)
    assert lie_formula_residual(v, w).sup_norm() <= 1e-9


def test_lie_formula_on_t1(spec1):
    v = random_vector_field(spec1, [1], active_modes=10)
    w = random_vector_field(spec1, [2], active_modes=10)
    assert lie_formula_residual(v, w).sup_norm() <= 1e-10


@settings(max_examples=15, deadline=None)
@given(seed=seeds)
def test_divergence_of_bracket(seed):
    spec = GridSpec(dimension=2, points_per_axis=32)
    x = random_vector_field(spec, [seed, seed + 1], active_modes=5)
    y = random_vector_field(spec, [seed + 2, seed + 3], active_modes=5)
    lhs = divergence(lie_bracket(x, y))
    rhs = contract(operator_A(x), y) - contract(operator_A(y), x)
    assert (lhs - rhs).sup_norm() <= 1e-10


def test_vector_field_component_count(spec2):
    with pytest.raises(DimensionError):
        VectorField((FourierScalar.zeros(spec2),))


def test_pointwise_inner_products(spec2):
    alpha = form(spec2, lambda x, y: np.cos(x) + 0 * y, lambda x, y: np.sin(y) + 0 * x)
    expected = scalar(spec2, lambda x, y: np.cos(x) ** 2 + np.sin(y) ** 2)
    assert close(form_inner(alpha, alpha), expected)
    omega = TwoForm(scalar(spec2, lambda x, y: np.sin(x) * np.cos(y)))
    assert two_form_inner(omega, omega).integral() == pytest.approx(np.pi ** 2)


def test_numpy_scalars_scale_fields(spec2):
    w = random_vector_field(spec2, [7, 8], active_modes=6)
    assert ((w * np.float32(2.0)) - (w + w)).sup_norm() <= 1e-15
    alpha = flat(w)
    assert ((alpha * np.int32(3)) - (alpha + alpha + alpha)).sup_norm() <= 1e-12
