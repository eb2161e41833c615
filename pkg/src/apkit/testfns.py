"""Compactly supported test functions with rational parameters.

Only hats and indicators are provided; both take exact rational values at
lattice points, which is what makes the vague and product gauges exact on
integer-weighted measures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UsageError
from .group import as_fraction


@dataclass(frozen=True)
class Hat:
    """peak * max(0, 1 - |x - center| / radius); support is (center - radius, center + radius)."""

    center: Fraction
    radius: Fraction
    peak: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("center", "radius", "peak"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.radius <= 0:
            raise UsageError("hat radius must be > 0")

    @property
    def support(self):
        return self.center - self.radius, self.center + self.radius

    @property
    def lipschitz(self) -> Fraction:
        return abs(self.peak) / self.radius

    def value(self, x: Fraction) -> Fraction:
        u = 1 - abs(as_fraction(x) - self.center) / self.radius
        return self.peak * u if u > 0 else Fraction(0)

    def to_dict(self):
        return {"type": "hat", "center": str(self.center), "radius": str(self.radius), "peak": str(self.peak)}


@dataclass(frozen=True)
class Indicator:
    """Indicator of the half-open interval [lo, hi)."""

    lo: Fraction
    hi: Fraction
    height: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("lo", "hi", "height"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.hi <= self.lo:
            raise UsageError("indicator needs lo < hi")

    @property
    def support(self):
        return self.lo, self.hi

    @property
    def lipschitz(self):
        return math.inf

    def value(self, x: Fraction) -> Fraction:
        x = as_fraction(x)
        return self.height if self.lo <= x < self.hi else Fraction(0)

    def to_dict(self):
        return {"type": "indicator", "lo": str(self.lo), "hi": str(self.hi), "height": str(self.height)}


def parse_test_function(cfg):
    if isinstance(cfg, (Hat, Indicator)):
        return cfg
    kind = cfg.get("type")
    if kind == "hat":
        return Hat(cfg["center"], cfg["radius"], cfg.get("peak", 1))
    if kind == "indicator":
        return Indicator(cfg["lo"], cfg["hi"], cfg.get("height", 1))
    raise UsageError(f"unknown test function type {kind!r}")


def lattice_kernel(phi, h: Fraction):
    """Lattice sites where ``phi`` may be nonzero and its exact values there.

    Returns ``(coords, values)`` with ``coords`` an int64 array and ``values`` a
    list of Fractions; x = coords * h.
    """
    a, b = phi.support
    lo = math.floor(a / h)
    hi = math.ceil(b / h)
    coords = np.arange(lo, hi + 1, dtype=np.int64)
    values = [phi.value(int(c) * h) for c in coords]
    keep = [i for i, v in enumerate(values) if v != 0]
    if not keep:
        return np.zeros(0, dtype=np.int64), []
    i0, i1 = keep[0], keep[-1] + 1
    return coords[i0:i1], values[i0:i1]


def integer_kernels(phis, h: Fraction):
    """Kernels of all test functions scaled to a common integer denominator.

    Returns ``(kernels, D)`` where each kernel is ``(coords, int64 values)``
    and phi(c * h) == values / D exactly.
    """
    raw = [lattice_kernel(p, h) for p in phis]
    D = 1
    for _, vals in raw:
        for v in vals:
            D = D * v.denominator // math.gcd(D, v.denominator)
    kernels = []
    for coords, vals in raw:
        ints = np.array([int(v * D) for v in vals], dtype=np.int64)
        kernels.append((coords, ints))
    return kernels, D
