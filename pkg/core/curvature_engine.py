"""Curvature Engine

Unnormalized sectional curvature ⟨⟨R(u,v)v, u⟩⟩ of the coset space
[Diff(M) Ⓢ C^∞(M)] / Diff_μ(M), evaluated at the identity coset by three
independent routes:

    terms       δ-term + β-term − ¾‖[u,v]‖² − ⟨⟨B(u,u), B(v,v)⟩⟩
    simplified  I₁ + I₂ written with six scalar integrals
    closed      (⟨⟨u,u⟩⟩⟨⟨v,v⟩⟩ − ⟨⟨u,v⟩⟩²) / μ(M)

with δ = ½(B(u,v) + B(v,u)) and β = ½(B(u,v) − B(v,u)). The β-term is the
integrated-by-parts pairing, so A⁻¹ is never applied to a non-exact form.
The sectional curvature is the terms-route numerator over the Gram determinant;
right-invariance makes the identity coset exhaustive.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import numpy as np
from tqdm import tqdm

from core.errors import ConfigError, DegeneratePlaneError
from core.exterior_calculus import divergence, integrated_pairing
from core.semidirect_algebra import (
    AlgebraVector,
    BRep,
    b_diag,
    b_one_form,
    b_sym,
    commutator,
    pairing,
    random_algebra_vector,
)
from core.spectral_core import GridSpec, l2_inner
from utils.logger import logDebug, logInfo, logWarn

DEGENERATE_PLANE_THRESHOLD = 1e-8
SURVEY_DECAY = 2.0
MAX_REJECTION_FACTOR = 100

DEFAULT_SURVEY_GRID = {1: 128, 2: 64}
DEFAULT_SURVEY_MODES = {1: 21, 2: 10}


@dataclass(frozen=True)
class CurvatureBreakdown:
    term_delta: float
    term_beta: float
    term_bracket: float
    term_diag: float
    numerator_terms: float
    numerator_simplified: float
    numerator_closed: float
    gram: float
    sectional: float

    def route_spread(self) -> float:
        """Largest pairwise disagreement of the three numerator routes, relative to 1 + |closed|."""
        values = (self.numerator_terms, self.numerator_simplified, self.numerator_closed)
        return (max(values) - min(values)) / (1.0 + abs(self.numerator_closed))

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def term_delta(u: AlgebraVector, v: AlgebraVector) -> float:
    delta = b_sym(u, v)
    return 0.25 * (l2_inner(delta.div_b1, delta.div_b1) + l2_inner(delta.b2, delta.b2))


def term_beta(u: AlgebraVector, v: AlgebraVector) -> float:
    # The one-form paired with [u₁, v₁] equals A B₁(v,u) − A B₁(u,v).
    bracket = commutator(u, v)
    one_form = b_one_form(v, u) - b_one_form(u, v)
    first = integrated_pairing(one_form, bracket.v1)
    second = l2_inner(bracket.v2, divergence(v.v1 * u.v2 - u.v1 * v.v2))
    return -0.125 * first - 0.125 * second


def term_bracket(u: AlgebraVector, v: AlgebraVector) -> float:
    bracket = commutator(u, v)
    return -0.75 * pairing(bracket, bracket)


def term_diag(u: AlgebraVector, v: AlgebraVector) -> float:
    bu = b_diag(u)
    bv = b_diag(v)
    return -0.25 * (l2_inner(bu.div_b1, bv.div_b1) + l2_inner(bu.b2, bv.b2))


def numerator_terms(u: AlgebraVector, v: AlgebraVector) -> float:
    return term_delta(u, v) + term_beta(u, v) + term_bracket(u, v) + term_diag(u, v)


def simplified_parts(u: AlgebraVector, v: AlgebraVector) -> tuple:
    """(I₁, I₂): the parts without / with the function slots."""
    mu = u.spec.volume
    div_u = divergence(u.v1)
    div_v = divergence(v.v1)
    s_uu = l2_inner(div_u, div_u)
    s_vv = l2_inner(div_v, div_v)
    s_uv = l2_inner(div_u, div_v)
    p_uu = l2_inner(u.v2, u.v2)
    p_vv = l2_inner(v.v2, v.v2)
    p_uv = l2_inner(u.v2, v.v2)

    i1 = (s_uu * s_vv - s_uv ** 2) / (16.0 * mu)
    i2 = (
        -s_uv * p_uv / (8.0 * mu)
        - p_uv ** 2 / (16.0 * mu)
        + s_uu * p_vv / (16.0 * mu)
        + s_vv * p_uu / (16.0 * mu)
        + p_uu * p_vv / (16.0 * mu)
    )
    return i1, i2


def numerator_simplified(u: AlgebraVector, v: AlgebraVector) -> float:
    i1, i2 = simplified_parts(u, v)
    return i1 + i2


def gram_determinant(u: AlgebraVector, v: AlgebraVector) -> float:
    return pairing(u, u) * pairing(v, v) - pairing(u, v) ** 2


def numerator_closed(u: AlgebraVector, v: AlgebraVector) -> float:
    return gram_determinant(u, v) / u.spec.volume


def sectional_curvature(u: AlgebraVector, v: AlgebraVector) -> CurvatureBreakdown:
    p_uu = pairing(u, u)
    p_vv = pairing(v, v)
    p_uv = pairing(u, v)
    gram = p_uu * p_vv - p_uv ** 2
    threshold = DEGENERATE_PLANE_THRESHOLD * p_uu * p_vv
    if gram < threshold or gram <= 0.0:
        raise DegeneratePlaneError(
            f"❌ Degenerate 2-plane: gram={gram:.3e} below {DEGENERATE_PLANE_THRESHOLD:.0e}·‖u‖²‖v‖²={threshold:.3e}"
        )

    t_delta = term_delta(u, v)
    t_beta = term_beta(u, v)
    t_bracket = term_bracket(u, v)
    t_diag = term_diag(u, v)
    total = t_delta + t_beta + t_bracket + t_diag
    return CurvatureBreakdown(
        term_delta=t_delta,
        term_beta=t_beta,
        term_bracket=t_bracket,
        term_diag=t_diag,
        numerator_terms=total,
        numerator_simplified=numerator_simplified(u, v),
        numerator_closed=gram / u.spec.volume,
        gram=gram,
        sectional=total / gram,
    )


def nabla_identity(u: AlgebraVector, v: AlgebraVector) -> BRep:
    """Divergence-level data of −½[u,v] − ½(B(u,v) + B(v,u))."""
    bracket = commutator(u, v)
    delta = b_sym(u, v)
    return BRep(
        div_b1=-0.5 * divergence(bracket.v1) - delta.div_b1,
        b2=-0.5 * bracket.v2 - delta.b2,
    )


# ---------- Survey ----------
@dataclass
class SurveyReport:
    dimension: int
    points_per_axis: int
    active_modes: int
    samples: int
    seed: int
    mu: float
    expected_curvature: float
    max_rel_error: float
    route_spread_max: float
    rejected: int
    per_term_stats: Dict[str, Dict[str, float]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


def sample_seed(master_seed: int, attempt: int) -> int:
    """Per-attempt seed; independent of evaluation order."""
    return int(np.random.SeedSequence([int(master_seed), int(attempt)]).generate_state(1)[0])


def _evaluate_attempt(spec: GridSpec, master_seed: int, attempt: int, active_modes: int) -> Optional[CurvatureBreakdown]:
    seeds = np.random.SeedSequence(sample_seed(master_seed, attempt)).generate_state(2)
    u = random_algebra_vector(spec, int(seeds[0]), active_modes, SURVEY_DECAY)
    v = random_algebra_vector(spec, int(seeds[1]), active_modes, SURVEY_DECAY)
    try:
        return sectional_curvature(u, v)
    except DegeneratePlaneError as exc:
        logDebug(f"   attempt {attempt}: {exc}")
        return None


def _term_stats(values: List[float]) -> Dict[str, float]:
    arr = np.asarray(values, dtype=float)
    return {"min": float(arr.min()), "max": float(arr.max()), "mean": float(arr.mean())}


def curvature_survey(
    dimension: int,
    samples: int,
    seed: int,
    active_modes: Optional[int] = None,
    points_per_axis: Optional[int] = None,
    threads: int = 1,
    show_progress: bool = False,
) -> SurveyReport:
    """Sample random 2-planes and compare the sectional curvature with 1/μ(M).

    Attempts are numbered; attempt i always uses the same seed, and planes are
    accepted in attempt order, so the report does not depend on `threads`.
    """
    if samples < 1:
        raise ConfigError(f"❌ samples must be >= 1, got {samples}")
    points = points_per_axis or DEFAULT_SURVEY_GRID[dimension]
    modes = active_modes or DEFAULT_SURVEY_MODES[dimension]
    spec = GridSpec(dimension=dimension, points_per_axis=points)
    mu = spec.volume
    expected = 1.0 / mu

    logInfo(
        f"🧮 Curvature survey on T^{dimension}: M={points}, modes={modes}, samples={samples}, "
        f"seed={seed}, threads={threads}"
    )

    accepted: List[CurvatureBreakdown] = []
    attempt = 0
    rejected = 0
    max_attempts = MAX_REJECTION_FACTOR * samples
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool, tqdm(
        total=samples, desc="planes", disable=not show_progress
    ) as progress:
        while len(accepted) < samples:
            if attempt >= max_attempts:
                raise DegeneratePlaneError(
                    f"❌ Rejected {rejected} degenerate planes in {attempt} attempts; giving up"
                )
            batch = range(attempt, min(attempt + samples - len(accepted), max_attempts))
            for result in pool.map(lambda i: _evaluate_attempt(spec, seed, i, modes), batch):
                attempt += 1
                if result is None:
                    rejected += 1
                    continue
                if len(accepted) < samples:
                    accepted.append(result)
                    progress.update(1)

    if rejected:
        logWarn(f"⚠️  Rejected {rejected} degenerate planes")

    rel_errors = [abs(b.sectional - expected) / expected for b in accepted]
    spreads = [b.route_spread() for b in accepted]
    stats = {
        name: _term_stats([getattr(b, name) for b in accepted])
        for name in ("term_delta", "term_beta", "term_bracket", "term_diag", "numerator_terms", "sectional")
    }
    report = SurveyReport(
        dimension=dimension,
        points_per_axis=points,
        active_modes=modes,
        samples=samples,
        seed=seed,
        mu=mu,
        expected_curvature=expected,
        max_rel_error=float(max(rel_errors)),
        route_spread_max=float(max(spreads)),
        rejected=rejected,
        per_term_stats=stats,
    )
    logInfo(
        f"✅ Survey done: max_rel_error={report.max_rel_error:.3e}, "
        f"route_spread_max={report.route_spread_max:.3e}, expected K={expected:.10f}"
    )
    return report


def expected_curvature(dimension: int) -> float:
    return 1.0 / (2.0 * math.pi) ** dimension
