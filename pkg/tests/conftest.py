import logging

import numpy as np
import pytest

from core.exterior_calculus import VectorField
from core.semidirect_algebra import AlgebraVector
from core.spectral_core import FourierScalar, GridSpec


@pytest.fixture
def spec1():
    return GridSpec(dimension=1, points_per_axis=64)


@pytest.fixture
def spec2():
    return GridSpec(dimension=2, points_per_axis=32)


@pytest.fixture
def survey_spec1():
    return GridSpec(dimension=1, points_per_axis=128)


@pytest.fixture
def survey_spec2():
    return GridSpec(dimension=2, points_per_axis=64)


def scalar(spec, fn):
    """FourierScalar from fn(x) on T¹ or fn(x, y) on T²."""
    return FourierScalar.from_function(spec, fn)


def field_x(spec, fn, second=None):
    """Algebra element (fn(x) ∂x, second(x)) with zero y-component on T²."""
    first = FourierScalar.from_function(spec, lambda *xs: fn(xs[0]))
    rest = [FourierScalar.zeros(spec)] * (spec.dimension - 1)
    v2 = FourierScalar.zeros(spec) if second is None else FourierScalar.from_function(spec, lambda *xs: second(xs[0]))
    return AlgebraVector(VectorField((first, *rest)), v2)


@pytest.fixture
def sin_cos_pair(spec1):
    """u = (sin x ∂x, 0), v = (cos x ∂x, 0)."""
    return field_x(spec1, np.sin), field_x(spec1, np.cos)


@pytest.fixture(autouse=True)
def isolated_run_logs(tmp_path, monkeypatch):
    """Keep run logs of CLI tests out of the project tree."""
    monkeypatch.setenv("GEOFLOW_LOG_FILE", str(tmp_path / "logs" / "geoflow_{timestamp}.log"))
    monkeypatch.setenv("GEOFLOW_OUTPUT_ROOT", str(tmp_path / "reports"))
    monkeypatch.delenv("GEOFLOW_THREADS", raising=False)
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_geoflow", False):
            root.removeHandler(handler)
            handler.close()
