import sys

import numpy as np
import pytest

from apkit.group import FineLattice, FiniteCyclic, LatticeWindow
from apkit.gauges import SupGauge
from apkit.points import SampledFunction
from apkit.space import Instance


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def alternating(W=20, window=None):
    """(-1)^n on Z with a sup gauge over ``window`` (defaults to W)."""
    G = LatticeWindow(1, W)
    spec = SupGauge(G, window=W if window is None else window)
    x = SampledFunction.from_formula(G, lambda c: np.where(c[..., 0] % 2 == 0, 1.0, -1.0))
    return Instance(G, [spec], "SampledFunction", complete=True), spec, x


def cyclic_function(values, complete=True):
    G = FiniteCyclic(len(values))
    spec = SupGauge(G)
    x = SampledFunction.from_values(G, np.asarray(values, dtype=float))
    return Instance(G, [spec], "SampledFunction", complete=complete), spec, x


@pytest.fixture
def alt():
    return alternating()


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance lines (one per criterion) at the end of the run."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])


__all__ = ["alternating", "cyclic_function", "FineLattice", "FiniteCyclic", "LatticeWindow"]
