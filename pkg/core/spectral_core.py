"""Spectral Core

Band-limited real scalar fields on the flat tori T¹ = [0, 2π) and T² = [0, 2π)².

A field is stored as its full (complex) Fourier coefficient array ĉ(k), normalized
so that f(x) = Σ_k ĉ(k) exp(i k·x). Real-valuedness is carried by Hermitian
symmetry ĉ(−k) = conj(ĉ(k)). Products are formed on the grid and truncated
with the 2/3 rule, so quadratic expressions of fields that already sit inside
the cutoff are exact.

Usage:
    spec = GridSpec(dimension=1, points_per_axis=128)
    f = FourierScalar.from_function(spec, lambda x: np.sin(x))
    g = partial_derivative(f, 0)          # cos x
    energy = l2_inner(f, f)               # π
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Tuple

import numpy as np

from core.errors import AxisError, BandLimitError, GridMismatchError, GridSpecError


@dataclass(frozen=True)
class GridSpec:
    dimension: int
    points_per_axis: int

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise GridSpecError(f"❌ Unsupported torus dimension: {self.dimension} (expected 1 or 2)")
        m = self.points_per_axis
        if not isinstance(m, (int, np.integer)) or m < 16 or (m & (m - 1)) != 0:
            raise GridSpecError(f"❌ points_per_axis must be a power of two >= 16, got {m}")

    @property
    def dealias_cutoff(self) -> int:
        return self.points_per_axis // 3

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points_per_axis,) * self.dimension

    @property
    def volume(self) -> float:
        """μ(M) for the flat torus of side 2π."""
        return (2.0 * math.pi) ** self.dimension

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.points_per_axis

    def wavenumbers(self) -> Tuple[np.ndarray, ...]:
        """Integer wavevector components broadcast to the full coefficient shape."""
        return _wavenumber_grids(self.dimension, self.points_per_axis)

    def dealias_mask(self) -> np.ndarray:
        return _dealias_mask(self.dimension, self.points_per_axis)

    def coordinates(self) -> Tuple[np.ndarray, ...]:
        return _coordinate_grids(self.dimension, self.points_per_axis)


@lru_cache(maxsize=None)
def _wavenumber_grids(dimension: int, points: int) -> Tuple[np.ndarray, ...]:
    k1d = np.fft.fftfreq(points, d=1.0 / points)
    grids = np.meshgrid(*([k1d] * dimension), indexing="ij")
    for grid in grids:
        grid.setflags(write=False)
    return tuple(grids)


@lru_cache(maxsize=None)
def _derivative_symbols(dimension: int, points: int) -> Tuple[np.ndarray, ...]:
    # Nyquist wavenumber has no sign; differentiating it would break Hermitian symmetry.
    k1d = np.fft.fftfreq(points, d=1.0 / points)
    k1d[points // 2] = 0.0
    grids = np.meshgrid(*([k1d] * dimension), indexing="ij")
    symbols = []
    for grid in grids:
        symbol = 1j * grid
        symbol.setflags(write=False)
        symbols.append(symbol)
    return tuple(symbols)


@lru_cache(maxsize=None)
def _dealias_mask(dimension: int, points: int) -> np.ndarray:
    cutoff = points // 3
    mask = np.ones((points,) * dimension, dtype=bool)
    for grid in _wavenumber_grids(dimension, points):
        mask &= np.abs(grid) <= cutoff
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=None)
def _squared_wavenumber(dimension: int, points: int) -> np.ndarray:
    k2 = sum(grid ** 2 for grid in _wavenumber_grids(dimension, points))
    k2.setflags(write=False)
    return k2


@lru_cache(maxsize=None)
def _coordinate_grids(dimension: int, points: int) -> Tuple[np.ndarray, ...]:
    x1d = 2.0 * np.pi * np.arange(points) / points
    grids = np.meshgrid(*([x1d] * dimension), indexing="ij")
    for grid in grids:
        grid.setflags(write=False)
    return tuple(grids)


def _reflected(coefficients: np.ndarray) -> np.ndarray:
    """Array whose entry at k is the input's entry at −k."""
    axes = tuple(range(coefficients.ndim))
    return np.roll(np.flip(coefficients, axis=axes), shift=(1,) * coefficients.ndim, axis=axes)


def hermitian_symmetrize(coefficients: np.ndarray) -> np.ndarray:
    return 0.5 * (coefficients + np.conj(_reflected(coefficients)))


class FourierScalar:
    """Immutable real scalar field held as Fourier coefficients."""

    __slots__ = ("spec", "coefficients")
    __array_ufunc__ = None

    def __init__(self, spec: GridSpec, coefficients: np.ndarray, symmetrize: bool = False):
        coeffs = np.array(coefficients, dtype=np.complex128, copy=True)
        if coeffs.shape != spec.shape:
            raise GridSpecError(f"❌ Coefficient shape {coeffs.shape} does not match grid {spec.shape}")
        if symmetrize:
            coeffs = hermitian_symmetrize(coeffs)
        coeffs.setflags(write=False)
        self.spec = spec
        self.coefficients = coeffs

    # ---------- Constructors ----------
    @classmethod
    def zeros(cls, spec: GridSpec) -> "FourierScalar":
        return cls(spec, np.zeros(spec.shape, dtype=np.complex128))

    @classmethod
    def constant(cls, spec: GridSpec, value: float) -> "FourierScalar":
        coeffs = np.zeros(spec.shape, dtype=np.complex128)
        coeffs[(0,) * spec.dimension] = float(value)
        return cls(spec, coeffs)

    @classmethod
    def from_grid(cls, spec: GridSpec, values: np.ndarray) -> "FourierScalar":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != spec.shape:
            raise GridSpecError(f"❌ Grid values shape {values.shape} does not match grid {spec.shape}")
        return cls(spec, np.fft.fftn(values) / values.size)

    @classmethod
    def from_function(cls, spec: GridSpec, fn: Callable[..., np.ndarray]) -> "FourierScalar":
        """Sample fn(x) or fn(x, y) on the grid and transform."""
        values = np.broadcast_to(fn(*spec.coordinates()), spec.shape)
        return cls.from_grid(spec, values)

    @classmethod
    def from_coefficients(cls, spec: GridSpec, entries: Iterable[Sequence[float]]) -> "FourierScalar":
        """Build from [[k_1, ..., k_n, re, im], ...]; ĉ(−k) is filled with the conjugate.

        A later entry for k or −k overwrites an earlier one.
        """
        n = spec.dimension
        m = spec.points_per_axis
        coeffs = np.zeros(spec.shape, dtype=np.complex128)
        for entry in entries:
            entry = list(entry)
            if len(entry) != n + 2:
                raise GridSpecError(f"❌ Coefficient entry {entry} needs {n} wavenumbers plus re, im")
            k = [int(v) for v in entry[:n]]
            if any(float(v) != int(v) for v in entry[:n]):
                raise GridSpecError(f"❌ Wavenumbers must be integers: {entry[:n]}")
            if max(abs(v) for v in k) > spec.dealias_cutoff:
                raise BandLimitError(
                    f"❌ Wavevector {k} lies beyond the dealias cutoff {spec.dealias_cutoff}"
                )
            value = complex(float(entry[n]), float(entry[n + 1]))
            index = tuple(v % m for v in k)
            mirror = tuple((-v) % m for v in k)
            if index == mirror and value.imag != 0.0:
                raise GridSpecError(f"❌ Self-conjugate mode {k} must have a real coefficient")
            coeffs[index] = value
            coeffs[mirror] = value.conjugate()
        return cls(spec, coeffs)

    # ---------- Views ----------
    def grid_values(self) -> np.ndarray:
        return np.fft.ifftn(self.coefficients).real * self.coefficients.size

    def sample(self, points_per_axis: int) -> np.ndarray:
        """Evaluate the Fourier series on a uniform grid with another resolution.

        Modes with |k_i| >= points_per_axis / 2 are dropped when downsampling.
        """
        n = self.spec.dimension
        src = self.spec.points_per_axis
        dst = int(points_per_axis)
        k_src = np.fft.fftfreq(src, d=1.0 / src).astype(int)
        keep = np.abs(k_src) < dst / 2.0
        out = np.zeros((dst,) * n, dtype=np.complex128)
        src_idx = np.nonzero(keep)[0]
        dst_idx = k_src[keep] % dst
        if n == 1:
            out[dst_idx] = self.coefficients[src_idx]
        else:
            out[np.ix_(dst_idx, dst_idx)] = self.coefficients[np.ix_(src_idx, src_idx)]
        return np.fft.ifftn(out).real * out.size

    def mean(self) -> float:
        return float(self.coefficients[(0,) * self.spec.dimension].real)

    def integral(self) -> float:
        return self.spec.volume * self.mean()

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.grid_values())))

    # ---------- Arithmetic ----------
    def _check_compatible(self, other: "FourierScalar") -> None:
        if not isinstance(other, FourierScalar):
            raise TypeError(f"❌ Expected FourierScalar, got {type(other).__name__}")
        if other.spec != self.spec:
            raise GridMismatchError(f"❌ Grid mismatch: {self.spec} vs {other.spec}")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            return self + FourierScalar.constant(self.spec, other)
        self._check_compatible(other)
        return FourierScalar(self.spec, self.coefficients + other.coefficients)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            return self - FourierScalar.constant(self.spec, other)
        self._check_compatible(other)
        return FourierScalar(self.spec, self.coefficients - other.coefficients)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FourierScalar(self.spec, -self.coefficients)

    def __mul__(self, other):
        if isinstance(other, FourierScalar):
            return product(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return FourierScalar(self.spec, self.coefficients * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return FourierScalar(self.spec, self.coefficients / float(other))
        return NotImplemented

    def __repr__(self) -> str:
        return (
            f"FourierScalar(dim={self.spec.dimension}, M={self.spec.points_per_axis}, "
            f"mean={self.mean():.6g}, sup={self.sup_norm():.6g})"
        )


def transform_roundtrip(f: FourierScalar) -> FourierScalar:
    return FourierScalar.from_grid(f.spec, f.grid_values())


def partial_derivative(f: FourierScalar, axis: int) -> FourierScalar:
    if not 0 <= axis < f.spec.dimension:
        raise AxisError(f"❌ Axis {axis} out of range for dimension {f.spec.dimension}")
    symbol = _derivative_symbols(f.spec.dimension, f.spec.points_per_axis)[axis]
    return FourierScalar(f.spec, f.coefficients * symbol)


def product(f: FourierScalar, g: FourierScalar) -> FourierScalar:
    f._check_compatible(g)
    values = f.grid_values() * g.grid_values()
    coeffs = np.fft.fftn(values) / values.size
    return FourierScalar(f.spec, np.where(f.spec.dealias_mask(), coeffs, 0.0))


def mean(f: FourierScalar) -> float:
    return f.mean()


def integral(f: FourierScalar) -> float:
    return f.integral()


def grid_integral(f: FourierScalar) -> float:
    """Trapezoid (rectangle) rule on the grid; cross-check for the spectral integral."""
    return f.spec.volume * float(np.mean(f.grid_values()))


def l2_inner(f: FourierScalar, g: FourierScalar) -> float:
    f._check_compatible(g)
    return f.spec.volume * float(np.sum(f.coefficients * np.conj(g.coefficients)).real)


def remove_mean(f: FourierScalar) -> FourierScalar:
    coeffs = np.array(f.coefficients)
    coeffs[(0,) * f.spec.dimension] = 0.0
    return FourierScalar(f.spec, coeffs)


def laplacian(f: FourierScalar) -> FourierScalar:
    k2 = _squared_wavenumber(f.spec.dimension, f.spec.points_per_axis)
    return FourierScalar(f.spec, -k2 * f.coefficients)


def inverse_laplacian(f: FourierScalar) -> FourierScalar:
    """Zero-mean g with Δg = f − mean(f)."""
    k2 = _squared_wavenumber(f.spec.dimension, f.spec.points_per_axis)
    safe = np.where(k2 == 0.0, 1.0, k2)
    coeffs = np.where(k2 == 0.0, 0.0, -f.coefficients / safe)
    return FourierScalar(f.spec, coeffs)


def random_band_limited(
    spec: GridSpec,
    seed: int,
    active_modes: int,
    decay: float,
    include_constant: bool = False,
) -> FourierScalar:
    """Seeded random field with modes 1 <= max_i |k_i| <= active_modes.

    Draw order (kept stable for reproducibility): real parts, imaginary parts,
    then the constant mode if requested. Amplitudes are scaled by |k|^(−decay).
    """
    if active_modes < 1 or active_modes > spec.dealias_cutoff:
        raise BandLimitError(
            f"❌ active_modes={active_modes} must lie in [1, {spec.dealias_cutoff}] for M={spec.points_per_axis}"
        )
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal(spec.shape) + 1j * rng.standard_normal(spec.shape)
    grids = spec.wavenumbers()
    k_max = np.max(np.abs(np.stack(grids)), axis=0)
    k_abs = np.sqrt(_squared_wavenumber(spec.dimension, spec.points_per_axis))
    active = (k_max >= 1) & (k_max <= active_modes)
    scale = np.zeros(spec.shape)
    scale[active] = k_abs[active] ** (-float(decay))
    coeffs = hermitian_symmetrize(draws * scale)
    if include_constant:
        coeffs[(0,) * spec.dimension] = rng.standard_normal()
    return FourierScalar(spec, coeffs)
