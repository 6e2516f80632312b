"""Semidirect Algebra

The algebra T_eG ≅ 𝔛(M) × C^∞(M) of the semidirect product Diff(M) Ⓢ C^∞(M):
commutator, the degenerate right-invariant metric

    ⟨⟨u, v⟩⟩ = ¼ ∫_M [div(u₁) div(v₁) + u₂ v₂] dμ,

the adjoint action, the descent condition for the volume-preserving subgroup,
and the bilinear operator B of the Euler equation u_t = B(u, u).

The metric does not see ker A (divergence-free fields), so B₁ is only exposed
through div B₁ (BRep) or through the exact one-form A B₁ (b_one_form).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from core.errors import GridMismatchError
from core.exterior_calculus import (
    OneForm,
    VectorField,
    contract,
    d0,
    divergence,
    field_inner,
    gradient,
    integrated_pairing,
    lie_bracket,
    operator_A,
    random_vector_field,
)
from core.spectral_core import FourierScalar, GridSpec, l2_inner, random_band_limited, remove_mean


@dataclass(frozen=True)
class AlgebraVector:
    v1: VectorField
    v2: FourierScalar

    __array_ufunc__ = None

    def __post_init__(self):
        if self.v1.spec != self.v2.spec:
            raise GridMismatchError(f"❌ AlgebraVector slots on different grids: {self.v1.spec} vs {self.v2.spec}")

    @property
    def spec(self) -> GridSpec:
        return self.v2.spec

    @classmethod
    def zeros(cls, spec: GridSpec) -> "AlgebraVector":
        return cls(VectorField.zeros(spec), FourierScalar.zeros(spec))

    def _check_same(self, other: "AlgebraVector") -> None:
        if not isinstance(other, AlgebraVector):
            raise TypeError(f"❌ Expected AlgebraVector, got {type(other).__name__}")
        if other.spec != self.spec:
            raise GridMismatchError(f"❌ Grid mismatch: {self.spec} vs {other.spec}")

    def __add__(self, other: "AlgebraVector") -> "AlgebraVector":
        self._check_same(other)
        return AlgebraVector(self.v1 + other.v1, self.v2 + other.v2)

    def __sub__(self, other: "AlgebraVector") -> "AlgebraVector":
        self._check_same(other)
        return AlgebraVector(self.v1 - other.v1, self.v2 - other.v2)

    def __neg__(self) -> "AlgebraVector":
        return AlgebraVector(-self.v1, -self.v2)

    def __mul__(self, scale):
        if isinstance(scale, (int, float, np.floating, np.integer)):
            return AlgebraVector(self.v1 * float(scale), self.v2 * float(scale))
        return NotImplemented

    __rmul__ = __mul__


@dataclass(frozen=True)
class BRep:
    """Divergence-level data (div B₁, B₂) of a B-type algebra element."""

    div_b1: FourierScalar
    b2: FourierScalar

    def __add__(self, other: "BRep") -> "BRep":
        return BRep(self.div_b1 + other.div_b1, self.b2 + other.b2)

    def __sub__(self, other: "BRep") -> "BRep":
        return BRep(self.div_b1 - other.div_b1, self.b2 - other.b2)

    def __neg__(self) -> "BRep":
        return BRep(-self.div_b1, -self.b2)

    def sup_norm(self) -> float:
        return max(self.div_b1.sup_norm(), self.b2.sup_norm())


def _check_pair(u: AlgebraVector, v: AlgebraVector) -> None:
    if u.spec != v.spec:
        raise GridMismatchError(f"❌ Grid mismatch: {u.spec} vs {v.spec}")


def _a_inner(x: VectorField, y: VectorField) -> FourierScalar:
    """Pointwise ⟨A x, y⟩."""
    return contract(operator_A(x), y)


def commutator(u: AlgebraVector, v: AlgebraVector) -> AlgebraVector:
    """[u, v] = ([u₁, v₁], dv₂(u₁) − du₂(v₁))."""
    _check_pair(u, v)
    second = field_inner(u.v1, gradient(v.v2)) - field_inner(v.v1, gradient(u.v2))
    return AlgebraVector(lie_bracket(u.v1, v.v1), second)


def pairing(u: AlgebraVector, v: AlgebraVector) -> float:
    _check_pair(u, v)
    return 0.25 * (l2_inner(divergence(u.v1), divergence(v.v1)) + l2_inner(u.v2, v.v2))


def pair_brep(b: BRep, w: AlgebraVector) -> float:
    """⟨⟨B, w⟩⟩ for B known only through its divergence-level data."""
    return 0.25 * (l2_inner(b.div_b1, divergence(w.v1)) + l2_inner(b.b2, w.v2))


def ad(w: AlgebraVector, u: AlgebraVector) -> AlgebraVector:
    return -commutator(w, u)


def descent_residual(u: AlgebraVector, v: AlgebraVector, w: AlgebraVector) -> float:
    """⟨⟨ad_w u, v⟩⟩ + ⟨⟨u, ad_w v⟩⟩; vanishes when div w₁ = 0 and w₂ = 0."""
    return pairing(ad(w, u), v) + pairing(u, ad(w, v))


def b_diag(u: AlgebraVector) -> BRep:
    q = _a_inner(u.v1, u.v1) - 0.5 * (divergence(u.v1) * divergence(u.v1)) + 0.5 * (u.v2 * u.v2)
    return BRep(div_b1=remove_mean(q), b2=-divergence(u.v1 * u.v2))


def b_sym(u: AlgebraVector, v: AlgebraVector) -> BRep:
    """Divergence-level data of δ = ½(B(u,v) + B(v,u)); div∘A⁻¹∘d is applied exactly."""
    _check_pair(u, v)
    q = (
        _a_inner(u.v1, v.v1)
        + _a_inner(v.v1, u.v1)
        - divergence(v.v1) * divergence(u.v1)
        + u.v2 * v.v2
    )
    b2 = -0.5 * divergence(v.v1 * u.v2 + u.v1 * v.v2)
    return BRep(div_b1=remove_mean(0.5 * q), b2=b2)


def b_one_form(u: AlgebraVector, v: AlgebraVector) -> OneForm:
    """A B₁(u, v) = −d⟨Au₁, v₁⟩ − div(v₁)·Au₁ − u₂·dv₂.

    Exact only for special inputs; it is paired against fields, never inverted.
    """
    _check_pair(u, v)
    return -d0(_a_inner(u.v1, v.v1)) - operator_A(u.v1) * divergence(v.v1) - d0(v.v2) * u.v2


def b_second(u: AlgebraVector, v: AlgebraVector) -> FourierScalar:
    """B₂(u, v) = −div(u₂ v₁)."""
    _check_pair(u, v)
    return -divergence(v.v1 * u.v2)


def b_condition_residual(u: AlgebraVector, v: AlgebraVector, w: AlgebraVector) -> float:
    """∫⟨AB₁(u,v), w₁⟩ + ∫B₂(u,v)w₂ − ∫⟨Au₁, [v,w]₁⟩ − ∫u₂[v,w]₂ (4× the defining condition of B)."""
    bracket = commutator(v, w)
    lhs = integrated_pairing(b_one_form(u, v), w.v1) + l2_inner(b_second(u, v), w.v2)
    rhs = integrated_pairing(operator_A(u.v1), bracket.v1) + l2_inner(u.v2, bracket.v2)
    return lhs - rhs


def random_algebra_vector(
    spec: GridSpec,
    seed: int,
    active_modes: int,
    decay: float = 2.0,
) -> AlgebraVector:
    """Random element with generic (non-gradient) u₁ and a u₂ that carries a constant mode."""
    seeds = np.random.SeedSequence(int(seed)).generate_state(spec.dimension + 1)
    v1 = random_vector_field(spec, seeds[: spec.dimension], active_modes, decay, include_constant=True)
    v2 = random_band_limited(spec, int(seeds[-1]), active_modes, decay, include_constant=True)
    return AlgebraVector(v1, v2)
