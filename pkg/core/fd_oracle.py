"""Finite-Difference Oracle

A second, independent implementation of the operators used by the spectral
stack: 4th-order periodic central differences, rectangle-rule quadrature, the
four-term curvature numerator, and a literal integrator for the 1D two-component
Hunter–Saxton system

    u_txx = −(u u_xx + ½u_x² − ½ρ²)_x,    ρ_t = −(ρu)_x.

Only field sampling is shared with the spectral code (FourierScalar.sample);
differentiation, quadrature and products are done here on plain grids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.errors import BlowupError, DimensionError, GridMismatchError, GridSpecError
from core.semidirect_algebra import AlgebraVector
from core.spectral_core import FourierScalar
from utils.logger import logDebug, logWarn

MIN_FD_POINTS = 8
DEFAULT_BLOWUP_THRESHOLD = 1e6


@dataclass(frozen=True)
class FdField:
    """Real grid values on a uniform periodic M or M×M grid over [0, 2π)^n."""

    values: np.ndarray

    __array_ufunc__ = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim not in (1, 2) or len(set(values.shape)) != 1:
            raise GridSpecError(f"❌ FdField needs an M or M×M grid, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    @property
    def dimension(self) -> int:
        return self.values.ndim

    @property
    def points(self) -> int:
        return self.values.shape[0]

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.points

    @property
    def volume(self) -> float:
        return (2.0 * math.pi) ** self.dimension

    @classmethod
    def sampled(cls, f: FourierScalar, points: int) -> "FdField":
        return cls(f.sample(points))

    @classmethod
    def constant_like(cls, other: "FdField", value: float) -> "FdField":
        return cls(np.full(other.values.shape, float(value)))

    def _other_values(self, other):
        if isinstance(other, FdField):
            if other.values.shape != self.values.shape:
                raise GridMismatchError(f"❌ FD grid mismatch: {self.values.shape} vs {other.values.shape}")
            return other.values
        if isinstance(other, (int, float, np.floating, np.integer)):
            return float(other)
        return None

    def __add__(self, other):
        v = self._other_values(other)
        return NotImplemented if v is None else FdField(self.values + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other_values(other)
        return NotImplemented if v is None else FdField(self.values - v)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FdField(-self.values)

    def __mul__(self, other):
        v = self._other_values(other)
        return NotImplemented if v is None else FdField(self.values * v)

    __rmul__ = __mul__

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class FdAlgebraVector:
    v1: Tuple[FdField, ...]
    v2: FdField


def sample_algebra_vector(u: AlgebraVector, points: int) -> FdAlgebraVector:
    return FdAlgebraVector(
        v1=tuple(FdField.sampled(c, points) for c in u.v1.components),
        v2=FdField.sampled(u.v2, points),
    )


# ---------- Stencils ----------
def _check_axis(f: FdField, axis: int) -> None:
    if f.points < MIN_FD_POINTS:
        raise GridSpecError(f"❌ FD stencils need at least {MIN_FD_POINTS} points per axis, got {f.points}")
    if not 0 <= axis < f.dimension:
        raise DimensionError(f"❌ Axis {axis} out of range for a {f.dimension}D grid")


def fd_derivative(f: FdField, axis: int = 0) -> FdField:
    """(−f[i+2] + 8f[i+1] − 8f[i−1] + f[i−2]) / 12h, periodic."""
    _check_axis(f, axis)
    v = f.values
    out = (
        -np.roll(v, -2, axis=axis)
        + 8.0 * np.roll(v, -1, axis=axis)
        - 8.0 * np.roll(v, 1, axis=axis)
        + np.roll(v, 2, axis=axis)
    ) / (12.0 * f.spacing)
    return FdField(out)


def fd_second_derivative(f: FdField, axis: int = 0) -> FdField:
    """(−f[i+2] + 16f[i+1] − 30f[i] + 16f[i−1] − f[i−2]) / 12h², periodic."""
    _check_axis(f, axis)
    v = f.values
    out = (
        -np.roll(v, -2, axis=axis)
        + 16.0 * np.roll(v, -1, axis=axis)
        - 30.0 * v
        + 16.0 * np.roll(v, 1, axis=axis)
        - np.roll(v, 2, axis=axis)
    ) / (12.0 * f.spacing ** 2)
    return FdField(out)


def _second_difference_symbol(points: int) -> np.ndarray:
    h = 2.0 * math.pi / points
    kh = np.arange(points) * h
    return (-2.0 * np.cos(2.0 * kh) + 32.0 * np.cos(kh) - 30.0) / (12.0 * h * h)


def fd_solve_second_derivative(f: FdField) -> FdField:
    """Zero-mean g with fd_second_derivative(g) = f − mean(f) (1D, circulant inverse)."""
    if f.dimension != 1:
        raise DimensionError("❌ The literal second-derivative solve is 1D only")
    _check_axis(f, 0)
    symbol = _second_difference_symbol(f.points)
    coeffs = np.fft.fft(f.values)
    coeffs[0] = 0.0
    safe = np.where(symbol == 0.0, 1.0, symbol)
    return FdField(np.fft.ifft(np.where(symbol == 0.0, 0.0, coeffs / safe)).real)


def fd_quadrature(f: FdField) -> float:
    return float(f.spacing ** f.dimension * np.sum(f.values))


def fd_remove_mean(f: FdField) -> FdField:
    return f - fd_quadrature(f) / f.volume


# ---------- Vector calculus on FD grids ----------
def _div(v: Tuple[FdField, ...]) -> FdField:
    out = fd_derivative(v[0], 0)
    for axis in range(1, len(v)):
        out = out + fd_derivative(v[axis], axis)
    return out


def _grad(f: FdField) -> Tuple[FdField, ...]:
    return tuple(fd_derivative(f, axis) for axis in range(f.dimension))


def _dot(a: Tuple[FdField, ...], b: Tuple[FdField, ...]) -> FdField:
    out = a[0] * b[0]
    for x, y in zip(a[1:], b[1:]):
        out = out + x * y
    return out


def _scale(a: Tuple[FdField, ...], f) -> Tuple[FdField, ...]:
    return tuple(c * f for c in a)


def _combine(a: Tuple[FdField, ...], b: Tuple[FdField, ...], sign: float = 1.0) -> Tuple[FdField, ...]:
    return tuple(x + sign * y for x, y in zip(a, b))


def _op_a(v: Tuple[FdField, ...]) -> Tuple[FdField, ...]:
    return tuple(-g for g in _grad(_div(v)))


def _a_inner(x: Tuple[FdField, ...], y: Tuple[FdField, ...]) -> FdField:
    return _dot(_op_a(x), y)


def _lie_bracket(x: Tuple[FdField, ...], y: Tuple[FdField, ...]) -> Tuple[FdField, ...]:
    n = len(x)
    out = []
    for i in range(n):
        acc = FdField.constant_like(x[0], 0.0)
        for j in range(n):
            acc = acc + x[j] * fd_derivative(y[i], j) - y[j] * fd_derivative(x[i], j)
        out.append(acc)
    return tuple(out)


def _commutator(u: FdAlgebraVector, v: FdAlgebraVector) -> FdAlgebraVector:
    second = _dot(u.v1, _grad(v.v2)) - _dot(v.v1, _grad(u.v2))
    return FdAlgebraVector(_lie_bracket(u.v1, v.v1), second)


def _pairing(u: FdAlgebraVector, v: FdAlgebraVector) -> float:
    return 0.25 * (fd_quadrature(_div(u.v1) * _div(v.v1)) + fd_quadrature(u.v2 * v.v2))


def _b_sym(u: FdAlgebraVector, v: FdAlgebraVector) -> Tuple[FdField, FdField]:
    q = _a_inner(u.v1, v.v1) + _a_inner(v.v1, u.v1) - _div(v.v1) * _div(u.v1) + u.v2 * v.v2
    b2 = -0.5 * _div(_combine(_scale(v.v1, u.v2), _scale(u.v1, v.v2)))
    return fd_remove_mean(0.5 * q), b2


def _b_one_form(u: FdAlgebraVector, v: FdAlgebraVector) -> Tuple[FdField, ...]:
    first = tuple(-g for g in _grad(_a_inner(u.v1, v.v1)))
    second = _scale(_op_a(u.v1), _div(v.v1))
    third = _scale(_grad(v.v2), u.v2)
    return tuple(a - b - c for a, b, c in zip(first, second, third))


def fd_curvature_terms(u: FdAlgebraVector, v: FdAlgebraVector) -> Tuple[float, float, float, float]:
    """(δ-term, β-term, bracket term, diagonal term) from FD operators only."""
    d_div, d_b2 = _b_sym(u, v)
    t_delta = 0.25 * (fd_quadrature(d_div * d_div) + fd_quadrature(d_b2 * d_b2))

    bracket = _commutator(u, v)
    one_form = _combine(_b_one_form(v, u), _b_one_form(u, v), -1.0)
    flux = _combine(_scale(v.v1, u.v2), _scale(u.v1, v.v2), -1.0)
    t_beta = -0.125 * fd_quadrature(_dot(one_form, bracket.v1)) - 0.125 * fd_quadrature(bracket.v2 * _div(flux))

    t_bracket = -0.75 * _pairing(bracket, bracket)

    uu, vv = _b_sym(u, u), _b_sym(v, v)
    t_diag = -0.25 * (fd_quadrature(uu[0] * vv[0]) + fd_quadrature(uu[1] * vv[1]))
    return t_delta, t_beta, t_bracket, t_diag


def fd_curvature_numerator(u: FdAlgebraVector, v: FdAlgebraVector) -> float:
    return float(sum(fd_curvature_terms(u, v)))


# ---------- Literal 1D two-component Hunter–Saxton ----------
@dataclass(frozen=True)
class Hs2State:
    t: float
    u: FdField
    rho: FdField

    @property
    def sigma(self) -> FdField:
        return fd_derivative(self.u)


@dataclass
class Hs2Run:
    state: Hs2State
    status: str
    blowup_time: Optional[float] = None


def hs2_rhs(u: FdField, rho: FdField) -> Tuple[FdField, FdField]:
    u_x = fd_derivative(u)
    flux = u * fd_second_derivative(u) + 0.5 * (u_x * u_x) - 0.5 * (rho * rho)
    u_t = fd_solve_second_derivative(-fd_derivative(flux))
    rho_t = -fd_derivative(rho * u)
    return u_t, rho_t


def hs2_literal_step(
    u: FdField,
    rho: FdField,
    dt: float,
    blowup_threshold: float = DEFAULT_BLOWUP_THRESHOLD,
    t: float = 0.0,
) -> Tuple[FdField, FdField]:
    if u.dimension != 1:
        raise DimensionError("❌ The literal two-component Hunter–Saxton step is 1D only")
    k1 = hs2_rhs(u, rho)
    k2 = hs2_rhs(u + 0.5 * dt * k1[0], rho + 0.5 * dt * k1[1])
    k3 = hs2_rhs(u + 0.5 * dt * k2[0], rho + 0.5 * dt * k2[1])
    k4 = hs2_rhs(u + dt * k3[0], rho + dt * k3[1])
    w = dt / 6.0
    u_new = u + w * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    rho_new = rho + w * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])

    for name, f in (("u_x", fd_derivative(u_new)), ("rho", rho_new)):
        if not np.all(np.isfinite(f.values)) or f.sup_norm() > blowup_threshold:
            raise BlowupError(
                f"❌ FD {name} left the finite regime (threshold {blowup_threshold:.1e}) at t={t + dt:.6g}",
                t=t,
                last_state=Hs2State(t=t, u=u, rho=rho),
            )
    return u_new, rho_new


def hs2_literal_run(
    u0: FdField,
    rho0: FdField,
    dt: float,
    t_end: float,
    blowup_threshold: float = DEFAULT_BLOWUP_THRESHOLD,
) -> Hs2Run:
    n_full = int(math.floor(t_end / dt + 1e-9))
    steps = [dt] * n_full
    remainder = t_end - n_full * dt
    if remainder > 1e-12 * max(1.0, t_end):
        steps.append(remainder)

    state = Hs2State(t=0.0, u=u0, rho=rho0)
    logDebug(f"   FD run: M={u0.points}, dt={dt}, t_end={t_end}, steps={len(steps)}")
    for h in steps:
        try:
            u, rho = hs2_literal_step(state.u, state.rho, h, blowup_threshold, t=state.t)
        except BlowupError as exc:
            logWarn(f"⚠️  {exc}")
            return Hs2Run(state=state, status="blowup", blowup_time=exc.t + h)
        state = Hs2State(t=state.t + h, u=u, rho=rho)
    return Hs2Run(state=state, status="completed")


def fd_energy(u: FdField, rho: FdField) -> float:
    """¼∫(u_x² + ρ²) on the FD grid."""
    u_x = fd_derivative(u)
    return 0.25 * (fd_quadrature(u_x * u_x) + fd_quadrature(rho * rho))
