"""Exterior Calculus

Vector fields and differential forms on the flat torus, built componentwise on
FourierScalar. With the flat metric ♭ and ♯ are the identity on components.

Sign conventions:
    d1(a dx + b dy)   = (∂x b − ∂y a) dx∧dy
    delta1(α)         = −div(α♯)
    delta2(h dx∧dy)   = (∂y h) dx − (∂x h) dy
These make d0/delta1 and d1/delta2 formal L² adjoints.

The operator A v = dδv♭ = −d div v has the divergence-free fields as kernel and
the exact forms as image; inv_A_exact returns the gradient representative.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.errors import DimensionError, GridMismatchError
from core.spectral_core import (
    FourierScalar,
    GridSpec,
    inverse_laplacian,
    l2_inner,
    partial_derivative,
    random_band_limited,
)


def _check_components(components: Tuple[FourierScalar, ...], kind: str) -> GridSpec:
    if not components:
        raise DimensionError(f"❌ {kind} needs at least one component")
    spec = components[0].spec
    if any(c.spec != spec for c in components):
        raise GridMismatchError(f"❌ {kind} components live on different grids")
    if len(components) != spec.dimension:
        raise DimensionError(
            f"❌ {kind} on T^{spec.dimension} needs {spec.dimension} components, got {len(components)}"
        )
    return spec


class _Componentwise:
    """Shared linear structure of VectorField and OneForm."""

    __slots__ = ()
    __array_ufunc__ = None
    components: Tuple[FourierScalar, ...]

    @property
    def spec(self) -> GridSpec:
        return self.components[0].spec

    def _check_same(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"❌ Cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.spec != self.spec:
            raise GridMismatchError(f"❌ Grid mismatch: {self.spec} vs {other.spec}")

    def __add__(self, other):
        self._check_same(other)
        return type(self)(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        self._check_same(other)
        return type(self)(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return type(self)(tuple(-a for a in self.components))

    def __mul__(self, other):
        """Scale by a number, or multiply pointwise by a scalar field (dealiased)."""
        if isinstance(other, FourierScalar):
            return type(self)(tuple(a * other for a in self.components))
        if isinstance(other, (int, float, np.floating, np.integer)):
            return type(self)(tuple(a * float(other) for a in self.components))
        return NotImplemented

    __rmul__ = __mul__

    def sup_norm(self) -> float:
        return max(c.sup_norm() for c in self.components)


@dataclass(frozen=True)
class VectorField(_Componentwise):
    components: Tuple[FourierScalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        _check_components(self.components, "VectorField")

    @classmethod
    def zeros(cls, spec: GridSpec) -> "VectorField":
        return cls(tuple(FourierScalar.zeros(spec) for _ in range(spec.dimension)))


@dataclass(frozen=True)
class OneForm(_Componentwise):
    components: Tuple[FourierScalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        _check_components(self.components, "OneForm")

    @classmethod
    def zeros(cls, spec: GridSpec) -> "OneForm":
        return cls(tuple(FourierScalar.zeros(spec) for _ in range(spec.dimension)))


@dataclass(frozen=True)
class TwoForm:
    """h dx∧dy on T²."""

    density: FourierScalar

    def __post_init__(self):
        _require_2d(self.density.spec, "TwoForm")

    @property
    def spec(self) -> GridSpec:
        return self.density.spec

    def __add__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(self.density + other.density)

    def __sub__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(self.density - other.density)

    def __neg__(self) -> "TwoForm":
        return TwoForm(-self.density)

    def sup_norm(self) -> float:
        return self.density.sup_norm()


def _require_2d(spec: GridSpec, what: str) -> None:
    if spec.dimension != 2:
        raise DimensionError(f"❌ {what} is only defined on T², got T^{spec.dimension}")


# ---------- Musical isomorphisms ----------
def flat(v: VectorField) -> OneForm:
    return OneForm(v.components)


def sharp(alpha: OneForm) -> VectorField:
    return VectorField(alpha.components)


# ---------- grad / div ----------
def gradient(f: FourierScalar) -> VectorField:
    return VectorField(tuple(partial_derivative(f, axis) for axis in range(f.spec.dimension)))


def divergence(v: VectorField) -> FourierScalar:
    return sum(
        (partial_derivative(c, axis) for axis, c in enumerate(v.components)),
        FourierScalar.zeros(v.spec),
    )


def contract(alpha: OneForm, v: VectorField) -> FourierScalar:
    """Pointwise α(v) = Σ α_i v_i (dealiased)."""
    if alpha.spec != v.spec:
        raise GridMismatchError(f"❌ Grid mismatch: {alpha.spec} vs {v.spec}")
    return sum((a * b for a, b in zip(alpha.components, v.components)), FourierScalar.zeros(v.spec))


def form_inner(alpha: OneForm, beta: OneForm) -> FourierScalar:
    """Pointwise ⟨α, β⟩ of two 1-forms."""
    return contract(alpha, sharp(beta))


def field_inner(v: VectorField, w: VectorField) -> FourierScalar:
    return contract(flat(v), w)


def integrated_pairing(alpha: OneForm, v: VectorField) -> float:
    """∫_M α(v) dμ evaluated componentwise by Parseval (no truncation)."""
    if alpha.spec != v.spec:
        raise GridMismatchError(f"❌ Grid mismatch: {alpha.spec} vs {v.spec}")
    return sum(l2_inner(a, b) for a, b in zip(alpha.components, v.components))


def two_form_inner(omega: TwoForm, eta: TwoForm) -> FourierScalar:
    return omega.density * eta.density


# ---------- d and δ ----------
def d0(f: FourierScalar) -> OneForm:
    return flat(gradient(f))


def d1(alpha: OneForm) -> TwoForm:
    _require_2d(alpha.spec, "d1")
    a, b = alpha.components
    return TwoForm(partial_derivative(b, 0) - partial_derivative(a, 1))


def delta1(alpha: OneForm) -> FourierScalar:
    return -divergence(sharp(alpha))


def delta2(omega: TwoForm) -> OneForm:
    _require_2d(omega.spec, "delta2")
    h = omega.density
    return OneForm((partial_derivative(h, 1), -partial_derivative(h, 0)))


def wedge11(alpha: OneForm, beta: OneForm) -> TwoForm:
    _require_2d(alpha.spec, "wedge11")
    if alpha.spec != beta.spec:
        raise GridMismatchError(f"❌ Grid mismatch: {alpha.spec} vs {beta.spec}")
    a, b = alpha.components
    c, e = beta.components
    return TwoForm(a * e - b * c)


# ---------- Lie bracket ----------
def lie_bracket(x: VectorField, y: VectorField) -> VectorField:
    """[X, Y] = DY·X − DX·Y, i.e. [X,Y]^i = X^j ∂_j Y^i − Y^j ∂_j X^i."""
    if x.spec != y.spec:
        raise GridMismatchError(f"❌ Grid mismatch: {x.spec} vs {y.spec}")
    n = x.spec.dimension
    components = []
    for i in range(n):
        acc = FourierScalar.zeros(x.spec)
        for j in range(n):
            acc = acc + x.components[j] * partial_derivative(y.components[i], j)
            acc = acc - y.components[j] * partial_derivative(x.components[i], j)
        components.append(acc)
    return VectorField(tuple(components))


def lie_formula_residual(v: VectorField, w: VectorField) -> OneForm:
    """[v,w]♭ − (div(w) v♭ − div(v) w♭ − δ(v♭ ∧ w♭)); the wedge term only exists on T²."""
    rhs = flat(v) * divergence(w) - flat(w) * divergence(v)
    if v.spec.dimension == 2:
        rhs = rhs - delta2(wedge11(flat(v), flat(w)))
    return flat(lie_bracket(v, w)) - rhs


# ---------- The operator A ----------
def operator_A(v: VectorField) -> OneForm:
    return -d0(divergence(v))


def inv_A_exact(f: FourierScalar) -> VectorField:
    """Gradient field w with A w = df; div w = −f + mean(f)."""
    return gradient(inverse_laplacian(-f))


# ---------- Hodge decomposition ----------
@dataclass(frozen=True)
class HodgeParts:
    exact_potential: FourierScalar
    coexact: OneForm
    harmonic: OneForm

    @property
    def exact(self) -> OneForm:
        return d0(self.exact_potential)

    def resum(self) -> OneForm:
        return self.exact + self.coexact + self.harmonic


def hodge_split(alpha: OneForm) -> HodgeParts:
    spec = alpha.spec
    potential = inverse_laplacian(divergence(sharp(alpha)))
    harmonic = OneForm(tuple(FourierScalar.constant(spec, c.mean()) for c in alpha.components))
    coexact = alpha - d0(potential) - harmonic
    return HodgeParts(exact_potential=potential, coexact=coexact, harmonic=harmonic)


# ---------- Sampling helpers ----------
def random_vector_field(
    spec: GridSpec,
    seeds,
    active_modes: int,
    decay: float = 2.0,
    include_constant: bool = True,
) -> VectorField:
    """One seeded random band-limited component per axis; `seeds` holds one int per axis."""
    seeds = list(seeds)
    if len(seeds) != spec.dimension:
        raise DimensionError(f"❌ Need {spec.dimension} seeds for a vector field, got {len(seeds)}")
    return VectorField(
        tuple(random_band_limited(spec, int(s), active_modes, decay, include_constant) for s in seeds)
    )


def skew_gradient(psi: FourierScalar) -> VectorField:
    """(∂y ψ, −∂x ψ): a divergence-free, mean-free field on T²."""
    _require_2d(psi.spec, "skew_gradient")
    return VectorField((partial_derivative(psi, 1), -partial_derivative(psi, 0)))
