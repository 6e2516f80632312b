"""Geodesic Flow

Time integration of the Euler equation u_t = B(u, u) on the coset space, written
in divergence variables σ = div u₁ and ρ:

    σ_t = −(⟨u, grad σ⟩ + ½σ² − ½ρ²) + c(t),    c(t) = mean of the bracket
    ρ_t = −div(ρ u)

with u = grad g, Δg = σ (the horizontal/gradient representative). The constant
c(t) is the one lost by the exterior derivative in d div u_t = −d(...); it keeps
mean(σ) = 0. On T¹ this is the two-component Hunter–Saxton system; ρ ≡ 0 gives
the one-component equation.

Energy ¼∫(σ² + ρ²)dμ = ⟨⟨u,u⟩⟩ and mass ∫ρ dμ are monitored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from core.errors import BlowupError, ConfigError, NonzeroMeanError
from core.exterior_calculus import VectorField, divergence, field_inner, gradient
from core.spectral_core import FourierScalar, GridSpec, inverse_laplacian, l2_inner, remove_mean
from utils.logger import logInfo, logWarn

MEAN_TOLERANCE = 1e-12
DEFAULT_BLOWUP_THRESHOLD = 1e6
VELOCITY_REPRESENTATIVE = "gradient"
DEALIAS_RULE = "2/3"

CSV_COLUMNS = ("t", "energy", "mass", "mean_sigma", "max_abs_sigma", "max_abs_rho")

# Initial data presets as Fourier coefficient lists [[k..., re, im], ...].
INITIAL_DATA_PRESETS: Dict[str, Dict[str, object]] = {
    "hs_cosine": {
        "dimension": 1,
        "sigma": [[1, 0.5, 0.0]],
        "rho": [[0, 0.5, 0.0]],
    },
    "stationary_rho": {
        "dimension": 1,
        "sigma": [],
        "rho": [[0, 1.0, 0.0]],
    },
    "hunter_saxton": {
        "dimension": 1,
        "sigma": [[1, 0.5, 0.0]],
        "rho": [],
    },
    "torus_2d": {
        "dimension": 2,
        "sigma": [[1, 0, 0.5, 0.0], [0, 1, 0.5, 0.0]],
        "rho": [[0, 0, 1.0, 0.0], [1, -1, 0.125, 0.0], [1, 1, -0.125, 0.0]],
    },
}


@dataclass(frozen=True)
class GeodesicState:
    t: float
    sigma: FourierScalar
    rho: FourierScalar

    @property
    def spec(self) -> GridSpec:
        return self.sigma.spec


@dataclass
class SimConfig:
    dimension: int
    points_per_axis: int
    dt: float
    t_end: float
    output_every: int = 1
    sigma_coeffs: Optional[List[List[float]]] = None
    rho_coeffs: Optional[List[List[float]]] = None
    preset: Optional[str] = None
    blowup_threshold: float = DEFAULT_BLOWUP_THRESHOLD

    def validate(self) -> None:
        if not self.dt > 0:
            raise ConfigError(f"❌ dt must be > 0, got {self.dt}")
        if self.dt > self.t_end:
            raise ConfigError(f"❌ dt={self.dt} exceeds t_end={self.t_end}")
        if self.output_every < 1:
            raise ConfigError(f"❌ output_every must be >= 1, got {self.output_every}")
        if not self.blowup_threshold > 0:
            raise ConfigError(f"❌ blowup_threshold must be > 0, got {self.blowup_threshold}")
        if self.preset is None and self.sigma_coeffs is None and self.rho_coeffs is None:
            raise ConfigError("❌ Initial data needs a preset or sigma/rho coefficient lists")
        if self.preset is not None:
            if self.preset not in INITIAL_DATA_PRESETS:
                raise ConfigError(
                    f"❌ Unknown preset '{self.preset}'. Valid: {', '.join(sorted(INITIAL_DATA_PRESETS))}"
                )
            preset_dim = INITIAL_DATA_PRESETS[self.preset]["dimension"]
            if preset_dim != self.dimension:
                raise ConfigError(f"❌ Preset '{self.preset}' is defined on T^{preset_dim}, config asks for T^{self.dimension}")


@dataclass(frozen=True)
class MonitorRow:
    t: float
    energy: float
    mass: float
    mean_sigma: float
    max_abs_sigma: float
    max_abs_rho: float

    def as_tuple(self) -> Tuple[float, ...]:
        return tuple(getattr(self, name) for name in CSV_COLUMNS)


@dataclass
class TimeSeries:
    rows: List[MonitorRow]
    status: str
    final_state: GeodesicState
    blowup_time: Optional[float] = None
    metadata: Dict[str, object] = field(default_factory=dict)

    def energy_drift(self) -> float:
        e0 = self.rows[0].energy
        return max(abs(r.energy - e0) for r in self.rows) / e0 if e0 else 0.0

    def mass_drift(self) -> float:
        m0 = self.rows[0].mass
        scale = abs(m0) if m0 else 1.0
        return max(abs(r.mass - m0) for r in self.rows) / scale


# ---------- State helpers ----------
def energy(state: GeodesicState) -> float:
    return 0.25 * (l2_inner(state.sigma, state.sigma) + l2_inner(state.rho, state.rho))


def mass(state: GeodesicState) -> float:
    return state.rho.integral()


def monitor(state: GeodesicState) -> MonitorRow:
    return MonitorRow(
        t=float(state.t),
        energy=energy(state),
        mass=mass(state),
        mean_sigma=state.sigma.mean(),
        max_abs_sigma=state.sigma.sup_norm(),
        max_abs_rho=state.rho.sup_norm(),
    )


def initial_state(config: SimConfig) -> GeodesicState:
    spec = GridSpec(dimension=config.dimension, points_per_axis=config.points_per_axis)
    if config.preset is not None:
        preset = INITIAL_DATA_PRESETS[config.preset]
        sigma_entries, rho_entries = preset["sigma"], preset["rho"]
    else:
        sigma_entries, rho_entries = config.sigma_coeffs or [], config.rho_coeffs or []
    sigma = FourierScalar.from_coefficients(spec, sigma_entries)
    if abs(sigma.mean()) > MEAN_TOLERANCE:
        raise ConfigError(f"❌ Initial sigma must have zero mean (it is a divergence), got {sigma.mean():.3e}")
    rho = FourierScalar.from_coefficients(spec, rho_entries)
    return GeodesicState(t=0.0, sigma=remove_mean(sigma), rho=rho)


# ---------- Operators ----------
def reconstruct_velocity(sigma: FourierScalar) -> VectorField:
    """Gradient field u₁ = grad g with Δg = σ."""
    m = sigma.mean()
    if abs(m) > MEAN_TOLERANCE:
        raise NonzeroMeanError(f"❌ sigma must have zero mean to be a divergence, got mean={m:.3e}")
    return gradient(inverse_laplacian(sigma))


def euler_rhs(state: GeodesicState) -> Tuple[FourierScalar, FourierScalar]:
    sigma, rho = state.sigma, state.rho
    u = reconstruct_velocity(sigma)
    flux = field_inner(u, gradient(sigma)) + 0.5 * (sigma * sigma) - 0.5 * (rho * rho)
    sigma_dot = remove_mean(-flux)
    rho_dot = -divergence(u * rho)
    return sigma_dot, rho_dot


def _check_finite(state: GeodesicState, threshold: float, previous: GeodesicState) -> None:
    for name, f in (("sigma", state.sigma), ("rho", state.rho)):
        values = f.grid_values()
        if not np.all(np.isfinite(values)):
            raise BlowupError(
                f"❌ Non-finite {name} at t={state.t:.6g}", t=previous.t, last_state=previous, failed_t=state.t
            )
        peak = float(np.max(np.abs(values)))
        if peak > threshold:
            raise BlowupError(
                f"❌ max|{name}|={peak:.3e} exceeded blowup threshold {threshold:.1e} at t={state.t:.6g}",
                t=previous.t,
                last_state=previous,
                failed_t=state.t,
            )


def rk4_step(
    state: GeodesicState,
    dt: float,
    blowup_threshold: float = DEFAULT_BLOWUP_THRESHOLD,
) -> GeodesicState:
    if not dt > 0:
        raise ValueError(f"❌ dt must be > 0, got {dt}")

    def stage(base: GeodesicState, k: Tuple[FourierScalar, FourierScalar], h: float) -> GeodesicState:
        return GeodesicState(t=base.t + h, sigma=base.sigma + h * k[0], rho=base.rho + h * k[1])

    k1 = euler_rhs(state)
    k2 = euler_rhs(stage(state, k1, 0.5 * dt))
    k3 = euler_rhs(stage(state, k2, 0.5 * dt))
    k4 = euler_rhs(stage(state, k3, dt))
    w = dt / 6.0
    sigma = state.sigma + w * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    rho = state.rho + w * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
    new_state = GeodesicState(t=state.t + dt, sigma=remove_mean(sigma), rho=rho)
    _check_finite(new_state, blowup_threshold, state)
    return new_state


def _step_sizes(dt: float, t_end: float) -> List[float]:
    n_full = int(math.floor(t_end / dt + 1e-9))
    steps = [dt] * n_full
    remainder = t_end - n_full * dt
    if remainder > 1e-12 * max(1.0, t_end):
        steps.append(remainder)
    return steps


def integrate(
    state: GeodesicState,
    t_end: float,
    dt: float,
    blowup_threshold: float = DEFAULT_BLOWUP_THRESHOLD,
) -> GeodesicState:
    """Advance to t_end with fixed steps (last step shortened if needed)."""
    for h in _step_sizes(dt, t_end - state.t):
        state = rk4_step(state, h, blowup_threshold)
    return state


def simulate(config: SimConfig, show_progress: bool = False) -> TimeSeries:
    config.validate()
    state = initial_state(config)
    steps = _step_sizes(config.dt, config.t_end)
    metadata = {
        "dimension": config.dimension,
        "points_per_axis": config.points_per_axis,
        "dt": config.dt,
        "t_end": config.t_end,
        "preset": config.preset,
        "velocity_representative": VELOCITY_REPRESENTATIVE,
        "dealias": DEALIAS_RULE,
    }
    logInfo(
        f"🌀 Simulating on T^{config.dimension}: M={config.points_per_axis}, dt={config.dt}, "
        f"t_end={config.t_end}, steps={len(steps)}"
    )

    rows = [monitor(state)]
    status = "completed"
    blowup_time = None
    last_logged = 0
    for index, h in enumerate(tqdm(steps, desc="steps", disable=not show_progress), start=1):
        try:
            state = rk4_step(state, h, config.blowup_threshold)
        except BlowupError as exc:
            logWarn(f"⚠️  {exc}")
            status = "blowup"
            blowup_time = exc.failed_t
            if last_logged != index - 1:
                rows.append(monitor(state))
            break
        if index % config.output_every == 0 or index == len(steps):
            rows.append(monitor(state))
            last_logged = index

    series = TimeSeries(rows=rows, status=status, final_state=state, blowup_time=blowup_time, metadata=metadata)
    logInfo(
        f"✅ Simulation {status} at t={state.t:.6g}: energy drift={series.energy_drift():.3e}, "
        f"mass drift={series.mass_drift():.3e}"
    )
    return series


def rk4_convergence_order(
    state: GeodesicState,
    t_end: float,
    dts: Sequence[float] = (4e-3, 2e-3, 1e-3),
) -> List[float]:
    """Observed orders from successive refinements, using sup-norm differences of σ(t_end)."""
    if len(dts) < 3:
        raise ValueError("❌ Need at least three step sizes for an order estimate")
    finals = [integrate(state, t_end, dt).sigma for dt in dts]
    diffs = [(finals[i] - finals[i + 1]).sup_norm() for i in range(len(finals) - 1)]
    orders = []
    for i in range(len(diffs) - 1):
        ratio = dts[i] / dts[i + 1]
        orders.append(math.log(diffs[i] / diffs[i + 1]) / math.log(ratio))
    return orders
