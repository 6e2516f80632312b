import math

import pytest

from core.errors import ConfigError
from core.identity_suite import (
    IDENTITY_CHECKS,
    descent_violation_expected,
    divergence_free_field,
    run_identity_suite,
)
from core.exterior_calculus import divergence
from core.spectral_core import GridSpec


def check_names(report):
    return [c.name for c in report.checks]


def test_suite_passes_on_t1():
    report = run_identity_suite(dimension=1, seed=42, samples=3, tolerance=1e-9)
    assert report.passed, [(c.name, c.max_residual) for c in report.failures()]
    assert "wedge_identities" not in check_names(report)
    assert "dd_zero" not in check_names(report)
    assert check_names(report)[-1] == "descent_violation_triple"


def test_suite_passes_on_t2():
    report = run_identity_suite(dimension=2, seed=42, samples=2, tolerance=1e-9)
    assert report.passed, [(c.name, c.max_residual) for c in report.failures()]
    assert len(report.checks) == len(IDENTITY_CHECKS) + 1


def test_violating_triple_reports_expected_value():
    report = run_identity_suite(dimension=1, seed=1, samples=1, tolerance=1e-9)
    triple = report.checks[-1]
    assert triple.expected == pytest.approx(3 * math.pi / 8)
    assert triple.passed


def test_expected_violation_scales_with_volume():
    assert descent_violation_expected(GridSpec(2, 32)) == pytest.approx(3 * math.pi ** 2 / 4)


def test_impossible_tolerance_fails():
    report = run_identity_suite(dimension=1, seed=42, samples=2, tolerance=1e-30)
    assert not report.passed
    assert report.failures()
    assert report.to_dict()["passed"] is False


def test_report_is_reproducible():
    a = run_identity_suite(dimension=2, seed=5, samples=1, tolerance=1e-9).to_dict()
    b = run_identity_suite(dimension=2, seed=5, samples=1, tolerance=1e-9).to_dict()
    assert a == b


@pytest.mark.parametrize("kwargs", [{"samples": 0}, {"tolerance": 0.0}, {"tolerance": -1.0}])
def test_suite_rejects_bad_arguments(kwargs):
    args = dict(dimension=1, seed=1, samples=1, tolerance=1e-9)
    args.update(kwargs)
    with pytest.raises(ConfigError):
        run_identity_suite(**args)


@pytest.mark.parametrize("dimension", [1, 2])
def test_divergence_free_field_is_divergence_free(dimension):
    spec = GridSpec(dimension, 32)
    assert divergence(divergence_free_field(spec, 3, active_modes=6)).sup_norm() <= 1e-12
