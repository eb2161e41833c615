"""Derived structures on a gauge space: the invariant metric, the mixed
gauge, the hull group of a point and its period subgroup.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DataError, UsageError
from .group import CYCLIC, Group, window_coords
from .space import INVARIANCE_TOL, WINDOWED, Instance


def _shift_repr(G: Group, row):
    return int(row[0]) if G.d == 1 else tuple(int(c) for c in row)


def _norm_order(G: Group, coords: np.ndarray) -> np.ndarray:
    """Indices of ``coords`` sorted by (norm, lexicographic) for reproducible growth."""
    norms = G.norm_array(coords)
    keys = [coords[:, k] for k in range(G.d - 1, -1, -1)] + [norms]
    return np.lexsort(keys)


# ---------------------------------------------------------------------------
# invariant metric
# ---------------------------------------------------------------------------

@dataclass
class InvariantMetricValue:
    dbar: object
    dprime: object
    converged: bool
    flags: list = field(default_factory=list)

    def to_dict(self):
        conv = lambda v: str(v) if isinstance(v, Fraction) else float(v)
        return {"dbar": conv(self.dbar), "dprime": conv(self.dprime),
                "converged": self.converged, "flags": list(self.flags)}


def _translate_distances(inst: Instance, spec, x, y, shifts, exact: bool):
    fx = inst.shifted_features(spec, x, shifts)
    fy = inst.shifted_features(spec, y, shifts)
    if exact:
        return np.asarray(spec.raw_distance(fx, fy))
    return np.asarray(spec.distance(fx, fy), dtype=float)


def invariant_metric_eval(inst: Instance, spec, x, y, W=None, tail: float = 0.25,
                          certificate=None) -> InvariantMetricValue:
    """sup_t gauge(T_t x, T_t y) over the window and its cap at 1.

    ``converged`` is True when the running sup, taken over translates in
    order of increasing |t|, stopped growing before the last ``tail``
    fraction of the window.  Exact gauges return Fractions.
    """
    spec = inst.resolve(spec)
    G = inst.group
    if not 0 < tail < 1:
        raise UsageError("tail fraction must lie in (0, 1)")
    coords = window_coords(G, W)
    coords = coords[_norm_order(G, coords)]
    exact = bool(getattr(spec, "exact", False))
    vals = _translate_distances(inst, spec, x, y, coords, exact)
    if exact and not np.issubdtype(vals.dtype, np.integer):
        exact = False
        vals = vals / float(spec.scale)
    k = int(np.argmax(vals))
    if exact:
        dbar = Fraction(int(vals[k])) / spec.scale
    else:
        dbar = float(vals[k])
    dprime = dbar if dbar < 1 else (Fraction(1) if exact else 1.0)
    flags = []
    if G.is_finite:
        converged = True
    else:
        flags.append(WINDOWED)
        head = max(1, int(np.ceil(len(vals) * (1 - tail))))
        converged = bool(vals[:head].max() >= vals[k])
    if certificate is not None and not (certificate.exact_invariant or certificate.pseudo_invariant):
        flags.append("NOT_PSEUDO_INVARIANT")
    return InvariantMetricValue(dbar, dprime, converged, flags)


def invariant_metric_matrix(inst: Instance, spec, points, W=None):
    """Pairwise d' over a list of points (exact Fractions when possible).

    Each point's translates are featurised once; pairs then only cost a
    distance evaluation over the shift axis.
    """
    spec = inst.resolve(spec)
    coords = window_coords(inst.group, W)
    feats = [inst.shifted_features(spec, p, coords) for p in points]
    exact = bool(getattr(spec, "exact", False))
    n = len(points)
    out = [[Fraction(0) if exact else 0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if exact:
                raw = np.asarray(spec.raw_distance(feats[i], feats[j]))
                v = Fraction(int(raw.max())) / spec.scale if np.issubdtype(raw.dtype, np.integer) \
                    else float(raw.max()) / float(spec.scale)
            else:
                v = float(np.asarray(spec.distance(feats[i], feats[j]), dtype=float).max())
            out[i][j] = out[j][i] = min(v, type(v)(1))
    return out


# ---------------------------------------------------------------------------
# mixed gauge
# ---------------------------------------------------------------------------

def _closed_ball_coords(G: Group, r) -> np.ndarray:
    if G.kind == CYCLIC:
        coords = np.arange(G.n, dtype=np.int64).reshape(-1, 1)
        return coords[G.norm_array(coords) <= float(r) + 1e-12]
    k = G.radius_steps(r, strict=False)
    axis = np.arange(-k, k + 1, dtype=np.int64)
    if G.d == 1:
        return axis.reshape(-1, 1)
    grids = np.meshgrid(*([axis] * G.d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def mixed_gauge_one_sided(inst: Instance, spec, x, y, r_max) -> float:
    """min over |t| <= r_max of max(|t|, gauge(T_{-t} x, y))."""
    spec = inst.resolve(spec)
    G = inst.group
    if not float(r_max) > 0:
        raise UsageError("r_max must be > 0")
    shifts = _closed_ball_coords(G, r_max)
    moved = inst.shifted_features(spec, x, -shifts)
    vals = np.asarray(spec.distance(moved, inst.features(spec, y)), dtype=float)
    return float(np.maximum(G.norm_array(shifts), vals).min())


def mixed_gauge_eval(inst: Instance, spec, x, y, r_max) -> float:
    """Symmetrised mixed gauge rho_sym(x, y) = max(rho(x, y), rho(y, x))."""
    return max(mixed_gauge_one_sided(inst, spec, x, y, r_max),
               mixed_gauge_one_sided(inst, spec, y, x, r_max))


def mixed_relation(act, gauge_table, nbhd, eps):
    """Pairs (a, b) of point indices in V[O, U_eps] = {(T_t p, q) : t in O, d(p, q) < eps}.

    ``act(t, p)`` is the index of T_t p, ``gauge_table`` an exact matrix and
    ``nbhd`` a set of group elements containing 0.
    """
    P = len(gauge_table)
    rel = set()
    for p in range(P):
        for q in range(P):
            if gauge_table[p][q] < eps:
                for t in nbhd:
                    rel.add((act(t, p), q))
    return frozenset(rel)


def mixed_entourage_axioms(act, gauge_table, eps_values, nbhds):
    """Entourage-base axioms of the mixed system, checked on explicit relations.

    For every V = V[O, U_eps] the function checks that V contains the
    diagonal, that some V' in the family has V'^{-1} inside V and some V''
    has V'' o V'' inside V, and that the family is directed (every pair has
    a member below both).  Neighbourhoods in ``nbhds`` must be closed under
    negation and each must contain 0.  Returns a list of failures.
    """
    P = len(gauge_table)
    fam = {(O, e): mixed_relation(act, gauge_table, O, e)
           for O in nbhds for e in eps_values}
    diag = {(p, p) for p in range(P)}
    failures = []
    for key, V in fam.items():
        if not diag <= V:
            failures.append(("diagonal", key))
        if not any({(b, a) for a, b in W} <= V for W in fam.values()):
            failures.append(("inverse", key))
        comp_ok = False
        for W in fam.values():
            succ = {}
            for a, b in W:
                succ.setdefault(a, set()).add(b)
            comp = {(a, c) for a, b in W for c in succ.get(b, ())}
            if comp <= V:
                comp_ok = True
                break
        if not comp_ok:
            failures.append(("composition", key))
    keys = list(fam)
    for k1, k2 in itertools.combinations(keys, 2):
        if not any(V <= fam[k1] and V <= fam[k2] for V in fam.values()):
            failures.append(("directed", (k1, k2)))
    return failures


# ---------------------------------------------------------------------------
# hull group
# ---------------------------------------------------------------------------

@dataclass
class HullGroup:
    """The orbit of x modulo gauge zero, with the addition inherited from G.

    ``elements[i]`` is the smallest shift t whose translate represents class
    i, ``class_of[t]`` the class of T_t x, and ``add_table[i][j]`` the class
    of the sum.
    """

    n: int
    elements: list
    add_table: list
    identity_index: int
    periods: list
    class_of: list
    certificate: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_order(self, i: int) -> int:
        k, cur = 1, i
        while cur != self.identity_index:
            cur = self.add_table[cur][i]
            k += 1
        return k

    def is_cyclic_of_order(self, k: int) -> bool:
        return self.order == k and any(self.element_order(i) == k for i in range(self.order))

    def to_dict(self) -> dict:
        return {"order": self.order, "elements": list(self.elements),
                "addTable": [list(r) for r in self.add_table],
                "identityIndex": self.identity_index, "periods": list(self.periods),
                "certificate": dict(self.certificate)}


def group_table_axioms(table) -> dict:
    """Exhaustive check of closure, associativity, identity, inverses and commutativity."""
    k = len(table)
    A = np.asarray(table, dtype=np.int64).reshape(k, k)
    closure = bool(k > 0 and A.min() >= 0 and A.max() < k)
    if not closure:
        return {"closure": False, "associative": False, "identity": False,
                "inverses": False, "commutative": False}
    idx = np.arange(k)
    left = A[A[:, :, None], idx[None, None, :]]      # (a+b)+c
    right = A[idx[:, None, None], A[None, :, :]]     # a+(b+c)
    assoc = bool(np.array_equal(left, right))
    ids = [e for e in range(k) if np.array_equal(A[e], np.arange(k)) and np.array_equal(A[:, e], np.arange(k))]
    identity = len(ids) == 1
    inverses = identity and all((A[i] == ids[0]).any() for i in range(k))
    commutative = bool(np.array_equal(A, A.T))
    return {"closure": closure, "associative": assoc, "identity": identity,
            "inverses": inverses, "commutative": commutative}


def _zero_matrix(inst: Instance, spec, x) -> np.ndarray:
    G = inst.group
    shifts = np.arange(G.n, dtype=np.int64).reshape(-1, 1)
    F = inst.shifted_features(spec, x, shifts)
    return np.asarray(spec.is_zero_features(F[:, None], F[None, :]), dtype=bool)


def build_hull_group(inst: Instance, spec, x) -> HullGroup:
    """Hull group of x on a finite cyclic group, with an exhaustive certificate."""
    spec = inst.resolve(spec)
    G = inst.group
    if G.kind != CYCLIC:
        raise UsageError("hull groups are only built on finite cyclic groups")
    n = G.n
    Z = _zero_matrix(inst, spec, x)
    if not (Z.diagonal().all() and np.array_equal(Z, Z.T)):
        raise DataError("gauge is not a pseudometric on the orbit (zero-distance relation not reflexive/symmetric)")
    if np.any((Z.astype(np.int64) @ Z.astype(np.int64) > 0) & ~Z):
        raise DataError("gauge is not a pseudometric on the orbit (zero-distance relation not transitive)")
    first = Z.argmax(axis=1)
    reps = sorted(set(first.tolist()))
    index = {t: i for i, t in enumerate(reps)}
    class_of = [index[int(f)] for f in first]
    k = len(reps)
    table = [[class_of[(reps[i] + reps[j]) % n] for j in range(k)] for i in range(k)]
    # well-definedness / homomorphism: F(s+t) = F(s) + F(t) for every pair
    cls = np.asarray(class_of)
    T = np.asarray(table)
    s = np.arange(n)
    hom = bool(np.array_equal(cls[(s[:, None] + s[None, :]) % n], T[cls[:, None], cls[None, :]]))
    if not hom:
        raise DataError("addition on the orbit is not well defined (gauge is not a pseudometric on the orbit)")
    identity = class_of[0]
    periods = [int(t) for t in range(n) if class_of[t] == identity]
    cert = group_table_axioms(table)
    cert["homomorphism"] = hom
    cert["surjective"] = sorted(set(class_of)) == list(range(k))
    cert["kernel_is_periods"] = periods == [t for t in range(n) if Z[t, 0]]
    cert["order_identity"] = k * len(periods) == n
    return HullGroup(n, reps, table, identity, periods, class_of, cert)


# ---------------------------------------------------------------------------
# period subgroup
# ---------------------------------------------------------------------------

@dataclass
class PeriodSubgroup:
    elements: list
    closed: bool | None
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {"elements": list(self.elements), "closed": self.closed, "flags": list(self.flags)}


def period_subgroup(inst: Instance, spec, x, W=None) -> PeriodSubgroup:
    """{t : gauge(T_t x, x) = 0} (exact gauges) or < 1e-12 (float gauges)."""
    spec = inst.resolve(spec)
    G = inst.group
    coords = window_coords(G, W)
    F = inst.shifted_features(spec, x, coords)
    fx = inst.features(spec, x)
    if getattr(spec, "exact", False):
        zero = np.asarray(spec.is_zero_features(F, fx), dtype=bool)
    else:
        zero = np.asarray(spec.distance(F, fx), dtype=float) < INVARIANCE_TOL
    per = coords[zero]
    elements = [_shift_repr(G, row) for row in per]
    if G.kind == CYCLIC:
        S = set(elements)
        closed = all((a + b) % G.n in S for a in S for b in S) and all((-a) % G.n in S for a in S)
        return PeriodSubgroup(elements, closed, [])
    return PeriodSubgroup(elements, None, [WINDOWED])


__all__ = [
    "HullGroup", "InvariantMetricValue", "PeriodSubgroup", "build_hull_group",
    "group_table_axioms", "invariant_metric_eval", "invariant_metric_matrix",
    "mixed_entourage_axioms", "mixed_gauge_eval", "mixed_gauge_one_sided",
    "mixed_relation", "period_subgroup",
]
