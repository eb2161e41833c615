"""Points of the gauge spaces: lattice fields over a group.

Every point is a function on the group's lattice.  It is backed either by an
array over a box (``known`` data, optionally zero-filled outside) or by an
exact formula, and carries a translation offset.  Translating never copies
data; it only moves the offset, so ``act(s, act(t, x))`` and ``act(s+t, x)``
are the same representation.
"""
from __future__ import annotations

import numpy as np

from .errors import UsageError, WindowError
from .group import CYCLIC, Group, GroupElement


def _as_coords(G: Group, coords) -> np.ndarray:
    arr = np.asarray(coords, dtype=np.int64)
    if G.d == 1 and (arr.ndim == 0 or arr.shape[-1] != 1):
        arr = arr[..., None]
    if arr.shape[-1] != G.d:
        raise UsageError(f"coordinates must have trailing dimension {G.d}")
    return arr


def _offset_coords(G: Group, t) -> tuple:
    if isinstance(t, GroupElement):
        if t.group != G:
            raise UsageError(f"element of {t.group!r} cannot act on a point over {G!r}")
        return t.coords
    return G.element(t).coords


class ArraySource:
    """Samples on the box ``lo .. lo + shape - 1``.

    ``fill=None`` means values outside the box are unknown and querying them
    raises ``WindowError``; otherwise ``fill`` is returned there.
    """

    def __init__(self, lo, data: np.ndarray, value_ndim: int, fill=None, periodic=None):
        self.lo = np.asarray(lo, dtype=np.int64)
        self.data = np.asarray(data)
        self.data.setflags(write=False)
        self.value_ndim = value_ndim
        self.fill = fill
        self.periodic = periodic

    @property
    def grid_shape(self):
        nd = self.data.ndim - self.value_ndim
        return self.data.shape[:nd]

    @property
    def hi(self):
        return self.lo + np.asarray(self.grid_shape, dtype=np.int64) - 1

    def lookup(self, c: np.ndarray) -> np.ndarray:
        idx = c - self.lo
        if self.periodic is not None:
            idx = np.mod(idx, self.periodic)
            return self.data[tuple(np.moveaxis(idx, -1, 0))]
        shape = np.asarray(self.grid_shape, dtype=np.int64)
        inside = np.all((idx >= 0) & (idx < shape), axis=-1)
        if inside.all():
            return self.data[tuple(np.moveaxis(idx, -1, 0))]
        if self.fill is None:
            bad = c[~inside]
            raise WindowError(
                f"{bad.shape[0]} query point(s) outside known window "
                f"[{self.lo.tolist()}, {self.hi.tolist()}]",
                lo=bad.min(axis=0).tolist(), hi=bad.max(axis=0).tolist())
        value_shape = self.data.shape[self.data.ndim - self.value_ndim:]
        out = np.full(c.shape[:-1] + value_shape, self.fill, dtype=self.data.dtype)
        clipped = np.clip(idx, 0, shape - 1)
        vals = self.data[tuple(np.moveaxis(clipped, -1, 0))]
        out[inside] = vals[inside]
        return out


class FormulaSource:
    """Exact values from ``func(coords) -> values`` for any integer coordinates."""

    def __init__(self, func, name: str = "formula"):
        self.func = func
        self.name = name

    def lookup(self, c: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(c))


class Field:
    """A translated lattice field on ``group``."""

    point_kind = "Field"

    def __init__(self, group: Group, source, offset=None, label: str = ""):
        self.group = group
        self.source = source
        self.offset = tuple(offset) if offset is not None else (0,) * group.d
        self.label = label

    def _clone(self, offset):
        new = object.__new__(type(self))
        new.__dict__.update(self.__dict__)
        new.offset = offset
        return new

    def translate(self, t) -> "Field":
        """The translate T_t x, i.e. (T_t x)(s) = x(s - t)."""
        t = _offset_coords(self.group, t)
        off = tuple(a + b for a, b in zip(self.offset, t))
        if self.group.kind == CYCLIC:
            off = tuple(o % self.group.n for o in off)
        return self._clone(off)

    def at(self, coords) -> np.ndarray:
        """Values at integer coordinates of shape (..., d)."""
        c = _as_coords(self.group, coords) - np.asarray(self.offset, dtype=np.int64)
        if self.group.kind == CYCLIC:
            c = np.mod(c, self.group.n)
        return self.source.lookup(c)

    def at_shifted(self, coords, shifts) -> np.ndarray:
        """Values of every translate T_t x at ``coords``; leading axis runs over shifts."""
        coords = _as_coords(self.group, coords)
        shifts = _as_coords(self.group, shifts).reshape(-1, self.group.d)
        return self.at(coords[None, ...] - shifts.reshape((-1,) + (1,) * (coords.ndim - 1) + (self.group.d,)))

    def same_representation(self, other) -> bool:
        return self.source is other.source and self.offset == other.offset

    def __repr__(self):
        name = self.label or type(self).__name__
        return f"{name}@{self.offset if self.group.d > 1 else self.offset[0]}"


class SampledFunction(Field):
    """Real (or R^m / torus valued) function sampled on the lattice."""

    point_kind = "SampledFunction"

    def __init__(self, group, source, m: int = 1, codomain: str = "euclidean", offset=None, label=""):
        super().__init__(group, source, offset, label)
        if codomain not in ("euclidean", "circle"):
            raise UsageError(f"unknown codomain {codomain!r}")
        self.m = m
        self.codomain = codomain

    @classmethod
    def from_values(cls, group: Group, values, lo=None, codomain="euclidean", label=""):
        """Samples over a box; for 1-d groups ``lo`` defaults to a centred window."""
        vals = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(vals)):
            raise UsageError("sampled values must be finite")
        grid_ndim = group.d
        if vals.ndim == grid_ndim:
            vals = vals[..., None]
        m = vals.shape[-1]
        grid = vals.shape[:grid_ndim]
        if group.kind == CYCLIC:
            if grid != (group.n,):
                raise UsageError(f"need {group.n} samples on Z/{group.n}, got {grid}")
            src = ArraySource((0,), vals, 1, periodic=group.n)
        else:
            if lo is None:
                lo = tuple(-(s // 2) for s in grid)
            elif np.ndim(lo) == 0:
                lo = (int(lo),)
            src = ArraySource(lo, vals, 1)
        return cls(group, src, m=m, codomain=codomain, label=label)

    @classmethod
    def from_formula(cls, group: Group, func, m: int = 1, codomain="euclidean", label=""):
        """``func`` maps an integer coordinate array (..., d) to values (..., m).

        Scalar formulas may return shape (...,); the value axis is added.
        """

        def wrapped(c):
            v = np.asarray(func(c), dtype=float)
            if v.shape == c.shape[:-1]:
                v = v[..., None]
            if v.shape[-1] != m:
                raise UsageError(f"formula returned {v.shape[-1]} components, expected {m}")
            return v

        return cls(group, FormulaSource(wrapped, label or "formula"), m=m, codomain=codomain, label=label)


class PointMeasure(Field):
    """Pure point measure with atoms on lattice sites."""

    point_kind = "PointMeasure"

    @classmethod
    def from_support(cls, group: Group, support, weights, label=""):
        """Finite measure sum_i w_i delta_{s_i}; repeated sites are merged by adding weights."""
        sup = _as_coords(group, np.asarray(support, dtype=np.int64).reshape(-1, group.d) if len(support) else np.zeros((0, group.d), np.int64))
        w = np.asarray(weights)
        if w.shape[0] != sup.shape[0]:
            raise UsageError("support and weights differ in length")
        dtype = np.int64 if (w.size == 0 or np.issubdtype(w.dtype, np.integer)) else float
        w = w.astype(dtype)
        if group.kind == CYCLIC:
            data = np.zeros(group.n, dtype=dtype)
            np.add.at(data, np.mod(sup[:, 0], group.n), w)
            return cls(group, ArraySource((0,), data, 0, periodic=group.n), label=label)
        if sup.shape[0] == 0:
            lo = np.zeros(group.d, dtype=np.int64)
            data = np.zeros((1,) * group.d, dtype=dtype)
        else:
            lo = sup.min(axis=0)
            shape = tuple(sup.max(axis=0) - lo + 1)
            data = np.zeros(shape, dtype=dtype)
            np.add.at(data, tuple((sup - lo).T), w)
        return cls(group, ArraySource(lo, data, 0, fill=0), label=label)

    @classmethod
    def from_weights(cls, group: Group, weights, lo=None, known_only=False, label=""):
        """Dense weight array over a box; zero outside unless ``known_only``."""
        w = np.asarray(weights)
        if not np.issubdtype(w.dtype, np.integer):
            w = w.astype(float)
        if group.kind == CYCLIC:
            if w.shape != (group.n,):
                raise UsageError(f"need {group.n} weights on Z/{group.n}")
            return cls(group, ArraySource((0,), w, 0, periodic=group.n), label=label)
        if lo is None:
            lo = tuple(-(s // 2) for s in w.shape)
        elif np.ndim(lo) == 0:
            lo = (int(lo),)
        return cls(group, ArraySource(lo, w, 0, fill=None if known_only else 0), label=label)

    @classmethod
    def from_formula(cls, group: Group, func, label=""):
        return cls(group, FormulaSource(func, label or "formula"), label=label)

    def support_in(self, window_coords: np.ndarray):
        """Sorted atoms (coords, weights) of the measure inside the given sites."""
        vals = self.at(window_coords)
        nz = vals != 0
        return window_coords[nz], vals[nz]

    def to_dict(self, window_coords: np.ndarray) -> dict:
        sup, w = self.support_in(window_coords)
        support = [int(s[0]) if self.group.d == 1 else [int(c) for c in s] for s in sup]
        weights = [int(v) if np.issubdtype(np.asarray(w).dtype, np.integer) else float(v) for v in w]
        return {"support": support, "weights": weights}


class PointSet(Field):
    """Uniformly discrete subset of the lattice, stored as an indicator."""

    point_kind = "PointSet"

    @classmethod
    def from_elements(cls, group: Group, elements, window=None, label=""):
        """Finite point set; with ``window=(lo, hi)`` only that box is known."""
        pts = np.asarray(elements, dtype=np.int64).reshape(-1, group.d)
        if group.kind == CYCLIC:
            data = np.zeros(group.n, dtype=bool)
            data[np.mod(pts[:, 0], group.n)] = True
            return cls(group, ArraySource((0,), data, 0, periodic=group.n), label=label)
        if window is None:
            if pts.shape[0] == 0:
                return cls(group, ArraySource((0,) * group.d, np.zeros((1,) * group.d, bool), 0, fill=False), label=label)
            lo, hi = pts.min(axis=0), pts.max(axis=0)
            fill = False
        else:
            lo, hi = (np.broadcast_to(np.asarray(v, dtype=np.int64), (group.d,)) for v in window)
            fill = None
            if np.any((pts < lo) | (pts > hi)):
                raise UsageError("point set elements lie outside the declared window")
        data = np.zeros(tuple(hi - lo + 1), dtype=bool)
        data[tuple((pts - lo).T)] = True
        return cls(group, ArraySource(lo, data, 0, fill=fill), label=label)

    @classmethod
    def from_predicate(cls, group: Group, func, label=""):
        return cls(group, FormulaSource(func, label or "predicate"), label=label)

    def elements_in(self, window_coords: np.ndarray) -> np.ndarray:
        return window_coords[self.at(window_coords).astype(bool)]

    def min_separation(self, window_coords: np.ndarray) -> float:
        pts = self.elements_in(window_coords)
        if pts.shape[0] < 2:
            return float("inf")
        if self.group.d == 1:
            return float(np.diff(np.sort(pts[:, 0])).min()) * self.group.step
        from scipy.spatial import cKDTree
        dists, _ = cKDTree(pts).query(pts, k=2, p=np.inf)
        return float(dists[:, 1].min()) * self.group.step
