"""Gauges (pseudometrics) on lattice fields.

Each gauge maps a point to a feature array and measures the distance of two
feature arrays.  Features of all translates of a point can be extracted in
one vectorised call, which is what keeps the detectors fast on windows of
10^4 elements.

Exact gauges (measure norm, vague, product on integer weights, and the
autocorrelation density) also expose ``raw_distance``: an integer whose
quotient by ``scale`` is the gauge value.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import UsageError
from .group import CYCLIC, Group, as_fraction
from .points import Field, PointMeasure, PointSet, SampledFunction
from .testfns import integer_kernels, parse_test_function

ZERO_TOL = 1e-12


def box_sites(G: Group, k: int):
    """Coordinates (N, d) and grid shape of the analysis box of radius k steps."""
    if G.kind == CYCLIC:
        return np.arange(G.n, dtype=np.int64).reshape(-1, 1), (G.n,)
    axis = np.arange(-k, k + 1, dtype=np.int64)
    if G.d == 1:
        return axis.reshape(-1, 1), (axis.size,)
    grids = np.meshgrid(*([axis] * G.d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1), (axis.size,) * G.d


def _window_sum(a: np.ndarray, k: int, ndim: int, cyclic: bool, mean: bool) -> np.ndarray:
    """Sums (or means) over all k^ndim boxes of the trailing ``ndim`` axes."""
    if cyclic and k > 1:
        a = np.concatenate([a, a[..., : k - 1]], axis=-1)
    axes = tuple(range(a.ndim - ndim, a.ndim))
    view = sliding_window_view(a, (k,) * ndim, axis=axes)
    red = tuple(range(view.ndim - ndim, view.ndim))
    return view.mean(axis=red) if mean else view.sum(axis=red)


class Gauge:
    """Base class; subclasses define ``sites``, ``_prepare`` and ``distance``."""

    name = "gauge"
    kind = "pseudometric"
    point_type = Field
    exact = False

    def __init__(self, group: Group):
        self.group = group

    # -- features -------------------------------------------------------
    def sites(self) -> np.ndarray:
        raise NotImplementedError

    def _prepare(self, vals: np.ndarray) -> np.ndarray:
        return vals

    def check_point(self, x):
        if not isinstance(x, self.point_type):
            raise UsageError(f"{self.name} gauge needs {self.point_type.point_kind}, got {type(x).__name__}")
        if x.group != self.group:
            raise UsageError(f"point lives on {x.group!r}, gauge on {self.group!r}")

    def features(self, x) -> np.ndarray:
        self.check_point(x)
        return self._prepare(x.at(self.sites()))

    def features_shifted(self, x, shifts) -> np.ndarray:
        """Features of T_t x for every row t of ``shifts``."""
        self.check_point(x)
        return self._prepare(x.at_shifted(self.sites(), shifts))

    # -- distances ------------------------------------------------------
    def distance(self, fa, fb):
        raise NotImplementedError

    def __call__(self, x, y) -> float:
        return float(self.distance(self.features(x), self.features(y)))

    def is_zero_features(self, fa, fb):
        return np.asarray(self.distance(fa, fb)) < ZERO_TOL

    def exact_value(self, x, y):
        """Exact rational gauge value when available, else the float as a Fraction."""
        return Fraction(self(x, y))

    @property
    def params(self) -> dict:
        return {}

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind, **self.params}

    def __repr__(self):
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{type(self).__name__}({args})"


class _ExactMixin:
    """Integer raw distances with a rational scale."""

    exact = True
    scale = Fraction(1)

    def raw_distance(self, fa, fb):
        raise NotImplementedError

    def distance(self, fa, fb):
        raw = self.raw_distance(fa, fb)
        return np.asarray(raw, dtype=float) / float(self.scale)

    def is_zero_features(self, fa, fb):
        raw = np.asarray(self.raw_distance(fa, fb))
        if np.issubdtype(raw.dtype, np.integer):
            return raw == 0
        return raw / float(self.scale) < ZERO_TOL

    def exact_value(self, x, y):
        raw = self.raw_distance(self.features(x), self.features(y))
        raw = np.asarray(raw)
        if np.issubdtype(raw.dtype, np.integer):
            return Fraction(int(raw)) / self.scale
        return Fraction(float(raw)) / self.scale


class SupGauge(Gauge):
    """max over the window of the codomain distance |f(s) - g(s)|."""

    name = "sup"
    kind = "metric"
    point_type = SampledFunction

    def __init__(self, group: Group, window=None, codomain: str = "euclidean"):
        super().__init__(group)
        self.window_steps = group.window_steps(window)
        if codomain not in ("euclidean", "circle"):
            raise UsageError(f"unknown codomain {codomain!r}")
        self.codomain = codomain
        self._sites, self.grid = box_sites(group, self.window_steps)

    def sites(self):
        return self._sites

    def _prepare(self, vals):
        return np.asarray(vals, dtype=float)

    def pointwise(self, fa, fb):
        diff = fa - fb
        if self.codomain == "circle":
            diff = np.mod(diff + np.pi, 2 * np.pi) - np.pi
        if diff.shape[-1] == 1:
            return np.abs(diff[..., 0])
        return np.sqrt((diff * diff).sum(axis=-1))

    def distance(self, fa, fb):
        return self.pointwise(fa, fb).max(axis=-1)

    @property
    def params(self):
        return {"window": self.window_steps * float(self.group.h), "codomain": self.codomain}


class StepanovGauge(SupGauge):
    """sup_y ( mean over y+K of |f - g|^p )^(1/p), K a box of ``K`` cells per axis."""

    name = "stepanov"
    kind = "metric"

    def __init__(self, group: Group, K: int = 2, p: float = 1.0, window=None, codomain="euclidean"):
        super().__init__(group, window, codomain)
        self.K = int(K)
        self.p = float(p)
        if self.K < 1:
            raise UsageError("Stepanov cell count K must be >= 1")
        if not (1 <= self.p < np.inf):
            raise UsageError("Stepanov exponent must satisfy 1 <= p < inf")
        if self.K > self.grid[0]:
            raise UsageError(f"Stepanov cell K={self.K} larger than the window ({self.grid[0]} sites)")

    def distance(self, fa, fb):
        a = self.pointwise(fa, fb) ** self.p
        a = a.reshape(a.shape[:-1] + self.grid)
        means = _window_sum(a, self.K, self.group.d, self.group.kind == CYCLIC, mean=True)
        flat = means.reshape(means.shape[: means.ndim - self.group.d] + (-1,))
        return flat.max(axis=-1) ** (1.0 / self.p)

    @property
    def params(self):
        return {**super().params, "K": self.K, "p": self.p}


class AutocorrelationGauge(_ExactMixin, Gauge):
    """card((A delta B) in A_n) / |A_n| along centred boxes A_n; reports the largest n."""

    name = "autocorrelation"
    kind = "pseudometric"
    point_type = PointSet

    def __init__(self, group: Group, n=None):
        super().__init__(group)
        if n is None:
            n = [group.radius]
        ns = sorted({int(v) for v in (n if isinstance(n, (list, tuple)) else [n])})
        if ns[0] < 0:
            raise UsageError("autocorrelation box radius must be >= 0")
        self.ns = ns
        self._sites, _ = box_sites(group, ns[-1])
        norms = np.rint(group.norm_array(self._sites) / float(group.h)).astype(np.int64)
        self.masks = [norms <= k for k in ns]
        hd = group.h ** group.d
        self.scales = [int(m.sum()) * hd for m in self.masks]
        self.scale = self.scales[-1]

    def sites(self):
        return self._sites

    def _prepare(self, vals):
        return np.asarray(vals, dtype=bool)

    def raw_distance(self, fa, fb, which: int = -1):
        return (np.logical_xor(fa, fb) & self.masks[which]).sum(axis=-1)

    def sequence(self, x, y):
        """[(n, card((x delta y) in A_n)/|A_n|)] for every configured n."""
        fa, fb = self.features(x), self.features(y)
        return [(n, Fraction(int(self.raw_distance(fa, fb, i))) / self.scales[i])
                for i, n in enumerate(self.ns)]

    @property
    def params(self):
        return {"n": list(self.ns)}


class MeasureNormGauge(_ExactMixin, Gauge):
    """sup over the window of |mu - nu|(t + K), K = {0..K-1}^d cells."""

    name = "measure_norm"
    kind = "metric"
    point_type = PointMeasure

    def __init__(self, group: Group, K: int = 1, window=None):
        super().__init__(group)
        self.K = int(K)
        if self.K < 1:
            raise UsageError("norm cell count K must be >= 1")
        self.window_steps = group.window_steps(window)
        self._sites, self.grid = box_sites(group, self.window_steps)
        if self.K > self.grid[0]:
            raise UsageError("norm cell larger than the window")

    def sites(self):
        return self._sites

    def raw_distance(self, fa, fb):
        a = np.abs(fa - fb)
        a = a.reshape(a.shape[:-1] + self.grid)
        sums = _window_sum(a, self.K, self.group.d, self.group.kind == CYCLIC, mean=False)
        return sums.reshape(sums.shape[: sums.ndim - self.group.d] + (-1,)).max(axis=-1)

    @property
    def params(self):
        return {"K": self.K, "window": self.window_steps * float(self.group.h)}


class _TestFunctionGauge(_ExactMixin, Gauge):
    point_type = PointMeasure
    kind = "family"

    def __init__(self, group: Group, test_functions):
        super().__init__(group)
        if group.d != 1:
            raise UsageError("test-function gauges are implemented for one-dimensional groups")
        if not test_functions:
            raise UsageError("a gauge family needs at least one test function")
        self.test_functions = [parse_test_function(t) for t in test_functions]
        self.kernels, D = integer_kernels(self.test_functions, group.h)
        self.scale = Fraction(D)

    @property
    def members(self):
        return list(self.test_functions)


class VagueGauge(_TestFunctionGauge):
    """max_j |mu(phi_j) - nu(phi_j)| over a finite list of test functions."""

    name = "vague"

    def __init__(self, group: Group, test_functions):
        super().__init__(group, test_functions)
        parts = [c for c, _ in self.kernels]
        self._sites = np.concatenate(parts).reshape(-1, 1) if parts else np.zeros((0, 1), np.int64)
        self._bounds = np.cumsum([0] + [len(c) for c in parts])

    def sites(self):
        return self._sites

    def _prepare(self, vals):
        out = []
        for j, (_, k) in enumerate(self.kernels):
            seg = vals[..., self._bounds[j]:self._bounds[j + 1]]
            out.append((seg * k).sum(axis=-1))
        return np.stack(out, axis=-1)

    def raw_distance(self, fa, fb):
        return np.abs(fa - fb).max(axis=-1)

    def support_window(self):
        """Smallest integer box containing every test-function support."""
        return int(self._sites.min()), int(self._sites.max())

    @property
    def params(self):
        return {"test_functions": [t.to_dict() for t in self.test_functions]}


class ProductGauge(_TestFunctionGauge):
    """max_j sup_y |((mu - nu) * phi_j)(y)| over the window."""

    name = "product"

    def __init__(self, group: Group, test_functions, window=None):
        super().__init__(group, test_functions)
        self.window_steps = group.window_steps(window)
        self.umin = min(int(c.min()) for c, _ in self.kernels if len(c))
        self.umax = max(int(c.max()) for c, _ in self.kernels if len(c))
        if group.kind == CYCLIC:
            self._sites = np.arange(group.n, dtype=np.int64).reshape(-1, 1)
            self.L = group.n
        else:
            W = self.window_steps
            self._sites = np.arange(-W - self.umax, W - self.umin + 1, dtype=np.int64).reshape(-1, 1)
            self.L = 2 * W + 1

    def sites(self):
        return self._sites

    def _prepare(self, vals):
        out = []
        for coords, k in self.kernels:
            acc = np.zeros(vals.shape[:-1] + (self.L,), dtype=np.result_type(vals.dtype, np.int64))
            for u, ku in zip(coords.tolist(), k.tolist()):
                if self.group.kind == CYCLIC:
                    acc = acc + ku * np.roll(vals, u, axis=-1)
                else:
                    start = self.umax - u
                    acc = acc + ku * vals[..., start:start + self.L]
            out.append(acc)
        return np.stack(out, axis=-2)

    def raw_distance(self, fa, fb):
        return np.abs(fa - fb).max(axis=(-2, -1))

    @property
    def params(self):
        return {"test_functions": [t.to_dict() for t in self.test_functions],
                "window": self.window_steps * float(self.group.h)}


GAUGES = {
    "sup": SupGauge,
    "stepanov": StepanovGauge,
    "autocorrelation": AutocorrelationGauge,
    "measure_norm": MeasureNormGauge,
    "vague": VagueGauge,
    "product": ProductGauge,
}


def make_gauge(group: Group, cfg: dict) -> Gauge:
    """Build a gauge from a config block ``{"name": ..., **params}``."""
    if not isinstance(cfg, dict) or "name" not in cfg:
        raise UsageError("gauge config needs a 'name'")
    params = {k: v for k, v in cfg.items() if k not in ("name", "kind")}
    cls = GAUGES.get(cfg["name"])
    if cls is None:
        raise UsageError(f"unknown gauge {cfg['name']!r}; choose from {sorted(GAUGES)}")
    if "window" in params and params["window"] is not None:
        params["window"] = as_fraction(params["window"])
    try:
        return cls(group, **params)
    except TypeError as exc:
        raise UsageError(f"bad parameters for gauge {cfg['name']!r}: {exc}") from exc
