"""Identity Suite

Seeded numerical checks of the exact identities the curvature computation rests
on. Every check reports a residual measured relative to 1 + the size of the
quantities compared, so one tolerance serves all of them.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from core.curvature_engine import DEFAULT_SURVEY_GRID, DEFAULT_SURVEY_MODES
from core.errors import ConfigError
from core.exterior_calculus import (
    TwoForm,
    VectorField,
    contract,
    d0,
    d1,
    delta1,
    delta2,
    divergence,
    flat,
    hodge_split,
    integrated_pairing,
    inv_A_exact,
    lie_bracket,
    lie_formula_residual,
    operator_A,
    skew_gradient,
    wedge11,
)
from core.geodesic_flow import GeodesicState, euler_rhs, reconstruct_velocity
from core.semidirect_algebra import (
    AlgebraVector,
    b_condition_residual,
    b_diag,
    b_sym,
    commutator,
    descent_residual,
    pair_brep,
    pairing,
    random_algebra_vector,
)
from core.spectral_core import FourierScalar, GridSpec, l2_inner, random_band_limited, remove_mean
from utils.logger import logDebug, logInfo, logWarn

IDENTITY_DECAY = 2.0


@dataclass
class IdentityCheck:
    name: str
    max_residual: float
    threshold: float
    passed: bool
    expected: Optional[float] = None


@dataclass
class IdentityReport:
    dimension: int
    seed: int
    samples: int
    points_per_axis: int
    active_modes: int
    tolerance: float
    checks: List[IdentityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[IdentityCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["passed"] = self.passed
        return data


@dataclass(frozen=True)
class _Sample:
    """One seeded draw of everything the checks need."""

    spec: GridSpec
    f: FourierScalar
    h: FourierScalar
    u: AlgebraVector
    v: AlgebraVector
    w: AlgebraVector
    w_div_free: AlgebraVector


def _rel(a: float, b: float) -> float:
    return abs(a - b) / (1.0 + max(abs(a), abs(b)))


def _field_rel(residual, reference) -> float:
    return residual.sup_norm() / (1.0 + reference.sup_norm())


def divergence_free_field(spec: GridSpec, seed: int, active_modes: int) -> VectorField:
    """Constant field on T¹; skew gradient plus constants on T²."""
    seeds = np.random.SeedSequence(int(seed)).generate_state(3)
    rng = np.random.default_rng(int(seeds[0]))
    constants = tuple(FourierScalar.constant(spec, c) for c in rng.standard_normal(spec.dimension))
    if spec.dimension == 1:
        return VectorField(constants)
    psi = random_band_limited(spec, int(seeds[1]), active_modes, IDENTITY_DECAY)
    return skew_gradient(psi) + VectorField(constants)


def _draw(spec: GridSpec, master_seed: int, index: int, active_modes: int) -> _Sample:
    s = np.random.SeedSequence([int(master_seed), int(index)]).generate_state(6)
    return _Sample(
        spec=spec,
        f=random_band_limited(spec, int(s[0]), active_modes, IDENTITY_DECAY, include_constant=True),
        h=random_band_limited(spec, int(s[1]), active_modes, IDENTITY_DECAY, include_constant=True),
        u=random_algebra_vector(spec, int(s[2]), active_modes, IDENTITY_DECAY),
        v=random_algebra_vector(spec, int(s[3]), active_modes, IDENTITY_DECAY),
        w=random_algebra_vector(spec, int(s[4]), active_modes, IDENTITY_DECAY),
        w_div_free=AlgebraVector(
            divergence_free_field(spec, int(s[5]), active_modes), FourierScalar.zeros(spec)
        ),
    )


# ---------- Checks ----------
def check_inverse_A(s: _Sample) -> float:
    w = inv_A_exact(s.f)
    target = -s.f + s.f.mean()
    return max(_field_rel(divergence(w) - target, target), _field_rel(operator_A(w) - d0(s.f), d0(s.f)))


def check_kernel_of_A(s: _Sample) -> float:
    # A kills divergence-free fields, and ∫⟨Av, v⟩ = ‖div v‖² shows nothing else is killed.
    killed = operator_A(s.w_div_free.v1).sup_norm() / (1.0 + s.w_div_free.v1.sup_norm())
    v = s.u.v1
    energy = integrated_pairing(operator_A(v), v)
    div_v = divergence(v)
    return max(killed, _rel(energy, l2_inner(div_v, div_v)))


def check_image_of_A(s: _Sample) -> float:
    alpha = operator_A(s.u.v1)
    parts = hodge_split(alpha)
    return (parts.coexact.sup_norm() + parts.harmonic.sup_norm()) / (1.0 + alpha.sup_norm())


def check_hodge(s: _Sample) -> float:
    alpha = flat(s.u.v1)
    parts = hodge_split(alpha)
    exact = parts.exact
    resum = _field_rel(parts.resum() - alpha, alpha)
    ortho = max(
        _rel(integrated_pairing(exact, VectorField(parts.coexact.components)), 0.0),
        _rel(integrated_pairing(exact, VectorField(parts.harmonic.components)), 0.0),
        _rel(integrated_pairing(parts.coexact, VectorField(parts.harmonic.components)), 0.0),
    )
    return max(resum, ortho)


def check_d_delta_adjoint(s: _Sample) -> float:
    alpha = flat(s.u.v1)
    residual = _rel(integrated_pairing(d0(s.f), VectorField(alpha.components)), l2_inner(s.f, delta1(alpha)))
    if s.spec.dimension == 2:
        omega = TwoForm(s.h)
        lhs = l2_inner(d1(alpha).density, omega.density)
        rhs = integrated_pairing(alpha, VectorField(delta2(omega).components))
        residual = max(residual, _rel(lhs, rhs))
    return residual


def check_dd_zero(s: _Sample) -> float:
    scale = 1.0 + d0(s.f).sup_norm()
    dd = d1(d0(s.f)).sup_norm() / scale
    deltadelta = delta1(delta2(TwoForm(s.h))).sup_norm() / (1.0 + s.h.sup_norm())
    return max(dd, deltadelta)


def check_lie_formula(s: _Sample) -> float:
    bracket = lie_bracket(s.u.v1, s.v.v1)
    return _field_rel(lie_formula_residual(s.u.v1, s.v.v1), bracket)


def check_divergence_of_bracket(s: _Sample) -> float:
    x, y = s.u.v1, s.v.v1
    lhs = divergence(lie_bracket(x, y))
    rhs = contract(operator_A(x), y) - contract(operator_A(y), x)
    return _field_rel(lhs - rhs, lhs)


def check_descent(s: _Sample) -> float:
    scale = math.sqrt(abs(pairing(s.u, s.u) * pairing(s.v, s.v)))
    return abs(descent_residual(s.u, s.v, s.w_div_free)) / (1.0 + scale)


def check_b_condition_symmetric(s: _Sample) -> float:
    """⟨⟨δ(u,v), w⟩⟩ = ½(⟨⟨u,[v,w]⟩⟩ + ⟨⟨v,[u,w]⟩⟩) and ⟨⟨B(u,u), w⟩⟩ = ⟨⟨u,[u,w]⟩⟩."""
    sym = _rel(
        pair_brep(b_sym(s.u, s.v), s.w),
        0.5 * (pairing(s.u, commutator(s.v, s.w)) + pairing(s.v, commutator(s.u, s.w))),
    )
    diag = _rel(pair_brep(b_diag(s.u), s.w), pairing(s.u, commutator(s.u, s.w)))
    return max(sym, diag)


def check_b_condition_one_form(s: _Sample) -> float:
    scale = abs(integrated_pairing(operator_A(s.u.v1), commutator(s.v, s.w).v1))
    return abs(b_condition_residual(s.u, s.v, s.w)) / (1.0 + scale)


def check_wedge_identities(s: _Sample) -> float:
    u1, v1 = s.u.v1, s.v.v1
    u2, v2 = s.u.v2, s.v.v2
    codiff = VectorField(delta2(wedge11(flat(u1), flat(v1))).components)
    au, av = operator_A(u1), operator_A(v1)

    lhs_a = integrated_pairing(au * divergence(v1) - av * divergence(u1), codiff)
    rhs_a = 2.0 * (
        l2_inner(contract(au, u1), contract(av, v1)) - l2_inner(contract(av, u1), contract(au, v1))
    )

    du2, dv2 = d0(u2), d0(v2)
    lhs_b = integrated_pairing(dv2 * u2 - du2 * v2, codiff)
    rhs_b = 2.0 * (
        l2_inner(contract(du2, u1), contract(dv2, v1)) - l2_inner(contract(dv2, u1), contract(du2, v1))
    )
    return max(_rel(lhs_a, rhs_a), _rel(lhs_b, rhs_b))


def check_euler_consistency(s: _Sample) -> float:
    state = GeodesicState(t=0.0, sigma=remove_mean(s.f), rho=s.h)
    sigma_dot, rho_dot = euler_rhs(state)
    b = b_diag(AlgebraVector(reconstruct_velocity(state.sigma), state.rho))
    return max(_field_rel(sigma_dot - b.div_b1, sigma_dot), _field_rel(rho_dot - b.b2, rho_dot))


# name, check, dimensions it applies to
IDENTITY_CHECKS: List[Tuple[str, Callable[[_Sample], float], Tuple[int, ...]]] = [
    ("inverse_A", check_inverse_A, (1, 2)),
    ("kernel_of_A", check_kernel_of_A, (1, 2)),
    ("image_of_A", check_image_of_A, (1, 2)),
    ("hodge_decomposition", check_hodge, (1, 2)),
    ("d_delta_adjoint", check_d_delta_adjoint, (1, 2)),
    ("dd_zero", check_dd_zero, (2,)),
    ("lie_formula", check_lie_formula, (1, 2)),
    ("divergence_of_bracket", check_divergence_of_bracket, (1, 2)),
    ("descent_divergence_free", check_descent, (1, 2)),
    ("b_condition_symmetric", check_b_condition_symmetric, (1, 2)),
    ("b_condition_one_form", check_b_condition_one_form, (1, 2)),
    ("wedge_identities", check_wedge_identities, (2,)),
    ("euler_consistency", check_euler_consistency, (1, 2)),
]


def descent_violation_triple(spec: GridSpec) -> Tuple[AlgebraVector, AlgebraVector, AlgebraVector]:
    """w = cos x ∂x, u = sin 2x ∂x, v = −cos x ∂x (x-only fields, no function slot)."""

    def along_x(fn) -> AlgebraVector:
        first = FourierScalar.from_function(spec, lambda *xs: fn(xs[0]))
        rest = [FourierScalar.zeros(spec)] * (spec.dimension - 1)
        return AlgebraVector(VectorField((first, *rest)), FourierScalar.zeros(spec))

    w = along_x(np.cos)
    u = along_x(lambda x: np.sin(2.0 * x))
    v = along_x(lambda x: -np.cos(x))
    return u, v, w


def descent_violation_expected(spec: GridSpec) -> float:
    """3π/8 on T¹; the y-integral contributes a factor 2π on T²."""
    return 3.0 * math.pi / 8.0 * spec.volume / (2.0 * math.pi)


def run_identity_suite(
    dimension: int,
    seed: int,
    samples: int,
    tolerance: float,
    points_per_axis: Optional[int] = None,
    active_modes: Optional[int] = None,
    show_progress: bool = False,
) -> IdentityReport:
    if samples < 1:
        raise ConfigError(f"❌ samples must be >= 1, got {samples}")
    if not tolerance > 0:
        raise ConfigError(f"❌ tolerance must be > 0, got {tolerance}")
    points = points_per_axis or DEFAULT_SURVEY_GRID[dimension]
    modes = active_modes or DEFAULT_SURVEY_MODES[dimension]
    spec = GridSpec(dimension=dimension, points_per_axis=points)
    logInfo(f"🧪 Identity suite on T^{dimension}: M={points}, modes={modes}, samples={samples}, seed={seed}")

    active = [(name, fn) for name, fn, dims in IDENTITY_CHECKS if dimension in dims]
    worst: Dict[str, float] = {name: 0.0 for name, _ in active}
    for index in tqdm(range(samples), desc="samples", disable=not show_progress):
        sample = _draw(spec, seed, index, modes)
        for name, fn in active:
            worst[name] = max(worst[name], float(fn(sample)))

    checks = [
        IdentityCheck(name=name, max_residual=worst[name], threshold=tolerance, passed=worst[name] <= tolerance)
        for name, _ in active
    ]

    u, v, w = descent_violation_triple(spec)
    expected = descent_violation_expected(spec)
    observed = descent_residual(u, v, w)
    miss = _rel(observed, expected)
    checks.append(
        IdentityCheck(
            name="descent_violation_triple",
            max_residual=miss,
            threshold=tolerance,
            passed=miss <= tolerance,
            expected=expected,
        )
    )

    report = IdentityReport(
        dimension=dimension,
        seed=seed,
        samples=samples,
        points_per_axis=points,
        active_modes=modes,
        tolerance=tolerance,
        checks=checks,
    )
    for check in checks:
        logDebug(f"   {check.name}: {check.max_residual:.3e} (threshold {check.threshold:.0e})")
    if report.passed:
        logInfo(f"✅ All {len(checks)} identity checks passed")
    else:
        for check in report.failures():
            logWarn(f"⚠️  {check.name} failed: residual {check.max_residual:.3e} > {check.threshold:.0e}")
    return report
