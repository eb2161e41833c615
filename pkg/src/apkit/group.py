"""Discrete abelian groups acting on the point spaces.

Three models are supported:

* ``FiniteCyclic(n)`` -- the cyclic group Z/nZ with the word metric.
* ``LatticeWindow(d, R)`` -- Z^d with the sup metric, analysed on the box
  of radius R.
* ``FineLattice(h, R)`` -- the lattice hZ standing in for the real line;
  distances are measured in real units, so d_G(t, 0) = h|t|.

Group elements carry integer coordinates.  All enumerations are
lexicographic, so reports and greedy tie-breaking are reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ResourceError, UsageError

INT64_MAX = 2**63 - 1

DEFAULT_CAP = 10**7

CYCLIC = "cyclic"
LATTICE = "lattice"
FINE = "fine"


def as_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float literal."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise UsageError(f"expected a finite number, got {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"cannot parse {value!r} as a rational") from exc
    raise UsageError(f"cannot interpret {value!r} as a rational number")


@dataclass(frozen=True)
class Group:
    kind: str
    n: int = 0
    d: int = 1
    radius: int = field(default=0, compare=False)
    h: Fraction = Fraction(1)
    cap: int = field(default=DEFAULT_CAP, compare=False)

    def __post_init__(self):
        if self.kind not in (CYCLIC, LATTICE, FINE):
            raise UsageError(f"unknown group kind {self.kind!r}")
        if self.kind == CYCLIC and self.n < 1:
            raise UsageError("cyclic group order must be >= 1")
        if self.d < 1:
            raise UsageError("dimension must be >= 1")
        if self.radius < 0:
            raise UsageError("window radius must be >= 0")
        if self.h <= 0:
            raise UsageError("lattice step must be > 0")

    # -- classification -------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.kind == CYCLIC

    @property
    def is_discrete(self) -> bool:
        """True unless the group is a fine lattice standing in for R."""
        return self.kind != FINE

    @property
    def step(self) -> float:
        return float(self.h)

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise UsageError("only finite groups have an order")
        return self.n

    def __repr__(self):
        if self.kind == CYCLIC:
            return f"FiniteCyclic({self.n})"
        if self.kind == LATTICE:
            return f"LatticeWindow(d={self.d}, R={self.radius})"
        return f"FineLattice(h={self.h}, R={self.radius * self.h})"

    # -- elements -------------------------------------------------------
    def element(self, coords) -> "GroupElement":
        if isinstance(coords, GroupElement):
            if coords.group != self:
                raise UsageError(f"element of {coords.group!r} used in {self!r}")
            return coords
        if isinstance(coords, (int, np.integer)):
            coords = (int(coords),)
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.d:
            raise UsageError(f"expected {self.d} coordinates, got {len(coords)}")
        if self.kind == CYCLIC:
            coords = tuple(c % self.n for c in coords)
        else:
            for c in coords:
                if abs(c) > INT64_MAX:
                    raise ArithmeticError("group coordinate exceeds 64-bit range")
        return GroupElement(coords, self)

    @property
    def zero(self) -> "GroupElement":
        return GroupElement((0,) * self.d, self)

    # -- metric ---------------------------------------------------------
    def norm_steps(self, coords) -> int:
        """Integer length of an element in lattice steps (word metric)."""
        if self.kind == CYCLIC:
            return max(min(c % self.n, -c % self.n) for c in coords)
        return max(abs(int(c)) for c in coords)

    def norm(self, t) -> float:
        """d_G(t, 0) in group units (real units on a fine lattice)."""
        coords = t.coords if isinstance(t, GroupElement) else _coords(t)
        return self.norm_steps(coords) * float(self.h)

    def dist(self, a, b) -> float:
        a, b = self.element(a), self.element(b)
        return self.norm(add(a, neg(b)))

    def norm_array(self, coords: np.ndarray) -> np.ndarray:
        """Vectorised d_G(t, 0) for an (N, d) integer array."""
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.d)
        if self.kind == CYCLIC:
            r = np.mod(coords, self.n)
            steps = np.minimum(r, self.n - r).max(axis=1)
        else:
            steps = np.abs(coords).max(axis=1)
        return steps * float(self.h)

    def radius_steps(self, r, strict: bool) -> int:
        """Largest k with k*h < r (strict) or k*h <= r, as an integer."""
        r = as_fraction(r)
        if r < 0:
            raise UsageError("radius must be >= 0")
        q = r / self.h
        k = math.floor(q)
        if strict and k == q:
            k -= 1
        return k

    def window_steps(self, W=None) -> int:
        if W is None:
            return self.radius
        return max(self.radius_steps(W, strict=False), 0)

    def to_real(self, coords):
        return np.asarray(coords, dtype=float) * float(self.h)

    def to_dict(self) -> dict:
        if self.kind == CYCLIC:
            return {"kind": "Zn", "n": self.n}
        if self.kind == LATTICE:
            out = {"kind": "Z", "window": self.radius}
            if self.d != 1:
                out["d"] = self.d
            return out
        return {"kind": "R", "h": str(self.h), "window": str(self.radius * self.h)}


@dataclass(frozen=True)
class GroupElement:
    coords: tuple
    group: Group

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return neg(self)

    def __sub__(self, other):
        return add(self, neg(other))

    def __lt__(self, other):
        _same_group(self, other)
        return self.coords < other.coords

    def __le__(self, other):
        _same_group(self, other)
        return self.coords <= other.coords

    def __int__(self):
        if len(self.coords) != 1:
            raise TypeError("only one-dimensional elements convert to int")
        return self.coords[0]

    def __index__(self):
        return self.__int__()

    @property
    def real(self):
        """Coordinates in real units (scaled by h)."""
        vals = tuple(c * self.group.h for c in self.coords)
        return vals[0] if len(vals) == 1 else vals

    def __repr__(self):
        c = self.coords[0] if len(self.coords) == 1 else self.coords
        return f"<{c}>"


def FiniteCyclic(n: int, cap: int = DEFAULT_CAP) -> Group:
    return Group(CYCLIC, n=int(n), cap=cap)


def LatticeWindow(d: int = 1, R: int = 0, cap: int = DEFAULT_CAP) -> Group:
    return Group(LATTICE, d=int(d), radius=int(R), cap=cap)


def FineLattice(h, R=0, cap: int = DEFAULT_CAP) -> Group:
    h = as_fraction(h)
    if h <= 0:
        raise UsageError("lattice step must be > 0")
    radius = math.floor(as_fraction(R) / h)
    return Group(FINE, h=h, radius=radius, cap=cap)


def _coords(t):
    if isinstance(t, GroupElement):
        return t.coords
    if isinstance(t, (int, np.integer)):
        return (int(t),)
    return tuple(int(c) for c in t)


def _same_group(a: GroupElement, b: GroupElement):
    if not isinstance(a, GroupElement) or not isinstance(b, GroupElement):
        raise UsageError("group arithmetic needs GroupElement operands")
    if a.group != b.group:
        raise UsageError(f"mixed-group operands: {a.group!r} and {b.group!r}")


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    _same_group(a, b)
    g = a.group
    coords = tuple(x + y for x, y in zip(a.coords, b.coords))
    if g.kind == CYCLIC:
        return GroupElement(tuple(c % g.n for c in coords), g)
    if any(abs(c) > INT64_MAX for c in coords):
        raise ArithmeticError("group addition overflows 64-bit coordinates")
    return GroupElement(coords, g)


def neg(a: GroupElement) -> GroupElement:
    g = a.group
    if g.kind == CYCLIC:
        return GroupElement(tuple(-c % g.n for c in a.coords), g)
    return GroupElement(tuple(-c for c in a.coords), g)


def zero(G: Group) -> GroupElement:
    return G.zero


def _check_radius(r):
    if isinstance(r, float) and not math.isfinite(r):
        raise UsageError(f"radius must be finite, got {r!r}")
    if as_fraction(r) < 0:
        raise UsageError("radius must be >= 0")


def _box(G: Group, k: int) -> np.ndarray:
    size = (2 * k + 1) ** G.d
    if size > G.cap:
        raise ResourceError(f"enumerating {size} elements exceeds cap {G.cap}")
    axis = np.arange(-k, k + 1, dtype=np.int64)
    if G.d == 1:
        return axis.reshape(-1, 1)
    grids = np.meshgrid(*([axis] * G.d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def window_coords(G: Group, W=None) -> np.ndarray:
    """Coordinates of ``window_elements`` as an (N, d) int64 array."""
    if G.kind == CYCLIC:
        if G.n > G.cap:
            raise ResourceError(f"group order {G.n} exceeds cap {G.cap}")
        return np.arange(G.n, dtype=np.int64).reshape(-1, 1)
    if W is not None:
        _check_radius(W)
    return _box(G, G.window_steps(W))


def window_elements(G: Group, W=None) -> list:
    """All elements with d_G(t, 0) <= W in lexicographic order.

    For a finite cyclic group the whole group is returned whatever W is.
    ``W=None`` uses the group's configured window radius.
    """
    return [GroupElement(tuple(int(c) for c in row), G) for row in window_coords(G, W)]


def ball_coords(G: Group, r) -> np.ndarray:
    _check_radius(r)
    if G.kind == CYCLIC:
        coords = np.arange(G.n, dtype=np.int64).reshape(-1, 1)
        return coords[G.norm_array(coords) < float(r)] if r else coords[:1]
    k = G.radius_steps(r, strict=True)
    if k < 0:
        # r == 0: the open ball is empty, but we keep 0 as a degenerate centre
        k = 0
    return _box(G, k)


def ball(G: Group, r) -> list:
    """Elements with d_G(t, 0) < r.  Always contains 0."""
    coords = ball_coords(G, r)
    out = [GroupElement(tuple(int(c) for c in row), G) for row in coords]
    if G.zero not in out:
        out.insert(0, G.zero)
    return out


def parse_group(cfg: dict, cap: int = DEFAULT_CAP) -> Group:
    """Build a group from ``{"kind": "Z"|"Zn"|"R", ...}``."""
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise UsageError("group config needs a 'kind'")
    kind = cfg["kind"]
    if kind == "Zn":
        if "n" not in cfg:
            raise UsageError("Zn group needs 'n'")
        return FiniteCyclic(int(cfg["n"]), cap=cap)
    if kind == "Z":
        return LatticeWindow(int(cfg.get("d", 1)), int(cfg.get("window", 0)), cap=cap)
    if kind == "R":
        if "h" not in cfg:
            raise UsageError("R group needs a lattice step 'h'")
        return FineLattice(cfg["h"], cfg.get("window", 0), cap=cap)
    raise UsageError(f"unknown group kind {kind!r}")

