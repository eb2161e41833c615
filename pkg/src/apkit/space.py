"""Gauge spaces with a group action, plus invariance and equicontinuity probes.

A uniformity is handled only through its gauge basis: the entourage
``U_{gauge, eps} = {(x, y) : gauge(x, y) < eps}``.  Gauge families are
evaluated as the maximum over their members, which yields the basis element
``U[phi_1, ..., phi_n; eps]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .gauges import Gauge
from .group import Group, GroupElement, window_coords

PASS = "PASS"
FAIL = "FAIL"
DISCRETE = "DISCRETE"
INCONCLUSIVE = "INCONCLUSIVE"
WINDOWED = "WINDOWED"
EXACT_INVARIANT = "EXACT_INVARIANT"

FLOAT_TOL = 1e-9
INVARIANCE_TOL = 1e-12


@dataclass(frozen=True)
class Entourage:
    gauge: Gauge
    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise UsageError("entourage radius must be > 0")

    def contains(self, x, y) -> bool:
        return self.gauge(x, y) < self.eps


def as_shifts(G: Group, ts) -> np.ndarray:
    """Normalise a list of elements/ints/tuples to an (N, d) int64 array."""
    if isinstance(ts, np.ndarray):
        return ts.astype(np.int64).reshape(-1, G.d)
    rows = []
    for t in ts:
        if isinstance(t, GroupElement):
            rows.append(G.element(t).coords)
        elif isinstance(t, (int, np.integer)):
            rows.append((int(t),))
        else:
            rows.append(tuple(int(c) for c in t))
    return np.asarray(rows, dtype=np.int64).reshape(-1, G.d)


class Instance:
    """A group acting by translation on lattice fields, with named gauges.

    ``complete`` is a declared attribute: completeness of the ambient space is
    not verified.  ``compactness_probe``, when given, is a callable
    ``probe(x, W) -> (verdict, witness)`` that an instance can supply when
    its finite gauge data cannot see non-compactness of the hull (the vague
    topology on measures is the case in point).
    """

    def __init__(self, group: Group, gauges, point_kind: str, complete: bool = False,
                 name: str = "", compactness_probe=None, notes: str = ""):
        self.group = group
        if isinstance(gauges, Gauge):
            gauges = [gauges]
        if isinstance(gauges, dict):
            self.gauges = dict(gauges)
        else:
            self.gauges = {g.name: g for g in gauges}
        for g in self.gauges.values():
            if g.group != group:
                raise UsageError(f"gauge {g.name} is defined on {g.group!r}, instance on {group!r}")
        self.point_kind = point_kind
        self.complete = complete
        self.name = name
        self.compactness_probe = compactness_probe
        self.notes = notes

    def __repr__(self):
        return f"Instance({self.name or self.point_kind} on {self.group!r}, gauges={list(self.gauges)})"

    # -- plumbing -------------------------------------------------------
    def resolve(self, spec) -> Gauge:
        if isinstance(spec, str):
            if spec not in self.gauges:
                raise UsageError(f"gauge {spec!r} is not part of {self!r}")
            return self.gauges[spec]
        if spec not in self.gauges.values():
            raise UsageError(f"gauge {spec!r} is not part of {self!r}")
        return spec

    def check_point(self, x):
        kind = getattr(x, "point_kind", None)
        if kind != self.point_kind:
            raise UsageError(f"instance holds {self.point_kind} points, got {kind}")

    # -- action and gauges ----------------------------------------------
    def act(self, t, x):
        self.check_point(x)
        return x.translate(t)

    def gauge(self, spec, x, y) -> float:
        spec = self.resolve(spec)
        self.check_point(x)
        self.check_point(y)
        return spec(x, y)

    def features(self, spec, x):
        return self.resolve(spec).features(x)

    def shifted_features(self, spec, x, shifts):
        """Features of act(t, x) for every t in ``shifts`` (leading axis)."""
        spec = self.resolve(spec)
        self.check_point(x)
        return spec.features_shifted(x, as_shifts(self.group, shifts))

    def distance(self, spec, fa, fb):
        return self.resolve(spec).distance(fa, fb)

    def is_zero(self, spec, fa, fb):
        return self.resolve(spec).is_zero_features(fa, fb)


def gauge(inst: Instance, spec, x, y) -> float:
    return inst.gauge(spec, x, y)


def act(inst: Instance, t, x):
    return inst.act(t, x)


def orbit_samples(inst: Instance, x, W=None) -> list:
    """``[(t, act(t, x))]`` for t in the window, in lexicographic order."""
    G = inst.group
    return [(G.element(row), inst.act(G.element(row), x)) for row in window_coords(G, W)]


# ---------------------------------------------------------------------------
# invariance
# ---------------------------------------------------------------------------

@dataclass
class InvarianceCertificate:
    gauge: str
    eps_grid: list
    deltas: list
    exact_invariant: bool
    defect: float
    violation: dict | None
    flags: list = field(default_factory=list)

    @property
    def pseudo_invariant(self) -> bool:
        return all(d > 0 for d in self.deltas)

    @property
    def verdict(self) -> str:
        return EXACT_INVARIANT if self.exact_invariant else ("PSEUDO_INVARIANT" if self.pseudo_invariant else FAIL)


def check_invariance(inst: Instance, spec, eps_grid, samples, shifts=None) -> InvarianceCertificate:
    """Probe pseudo-invariance on all sample pairs and translations.

    For each eps the certificate holds the largest delta such that every
    probed (x, y, t) with gauge(x, y) < delta has gauge(tx, ty) < eps
    (``inf`` when no probed triple ever reaches eps).
    """
    spec = inst.resolve(spec)
    samples = list(samples)
    if not samples:
        raise UsageError("check_invariance needs at least one sample point")
    G = inst.group
    shifts = window_coords(G) if shifts is None else as_shifts(G, shifts)
    base = [inst.features(spec, x) for x in samples]
    moved = [inst.shifted_features(spec, x, shifts) for x in samples]
    eps_grid = [float(e) for e in eps_grid]
    deltas = [np.inf] * len(eps_grid)
    defect = 0.0
    worst = None
    for i in range(len(samples)):
        for j in range(i, len(samples)):
            d0 = float(spec.distance(base[i], base[j]))
            dt = np.asarray(spec.distance(moved[i], moved[j]), dtype=float)
            gap = np.abs(dt - d0)
            k = int(np.argmax(gap))
            if gap[k] > defect:
                defect = float(gap[k])
                worst = {"x": i, "y": j, "t": shifts[k].tolist() if G.d > 1 else int(shifts[k, 0]),
                         "gauge_xy": d0, "gauge_txty": float(dt[k])}
            dmax = float(dt.max())
            for e, eps in enumerate(eps_grid):
                if dmax >= eps:
                    deltas[e] = min(deltas[e], d0)
    exact = defect <= INVARIANCE_TOL
    flags = [] if G.is_finite else [WINDOWED]
    return InvarianceCertificate(spec.name, eps_grid, deltas, exact, defect,
                                 None if exact else worst, flags)


# ---------------------------------------------------------------------------
# equicontinuity
# ---------------------------------------------------------------------------

@dataclass
class EquicontinuityCertificate:
    gauge: str
    eps_grid: list
    radii: list
    verdicts: list
    witnesses: list
    flags: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v in (PASS, DISCRETE) for v in self.verdicts)


def equicontinuity_check(inst: Instance, spec, eps_grid, samples, max_steps: int = 64) -> EquicontinuityCertificate:
    """Largest closed neighbourhood radius r(eps) with gauge(act(s, x), x) < eps.

    Only meaningful on a fine lattice; on discrete groups every eps passes
    trivially with the DISCRETE flag.  The search is over radii k*h with
    k <= ``max_steps``; reaching that budget is recorded in ``flags``.
    """
    spec = inst.resolve(spec)
    eps_grid = [float(e) for e in eps_grid]
    G = inst.group
    samples = list(samples)
    if G.is_discrete:
        return EquicontinuityCertificate(spec.name, eps_grid, [None] * len(eps_grid),
                                         [DISCRETE] * len(eps_grid), [None] * len(eps_grid), [DISCRETE])
    if not samples:
        return EquicontinuityCertificate(spec.name, eps_grid, [None] * len(eps_grid),
                                         [INCONCLUSIVE] * len(eps_grid), [None] * len(eps_grid), [INCONCLUSIVE])
    ks = np.arange(1, max_steps + 1, dtype=np.int64)
    shifts = np.concatenate([ks, -ks]).reshape(-1, 1)
    # running[k-1] = worst gauge over samples and all |s| <= k*h
    worst_val = np.zeros(max_steps)
    worst_arg = [None] * max_steps
    for idx, x in enumerate(samples):
        fx = inst.features(spec, x)
        vals = np.asarray(spec.distance(inst.shifted_features(spec, x, shifts), fx), dtype=float)
        per_k = np.maximum(vals[:max_steps], vals[max_steps:])
        for k in range(max_steps):
            if worst_arg[k] is None or per_k[k] > worst_val[k]:
                sgn = 1 if vals[k] >= vals[max_steps + k] else -1
                worst_val[k] = per_k[k]
                worst_arg[k] = {"sample": idx, "s": sgn * (k + 1) * G.step, "gauge": float(per_k[k])}
    running = np.maximum.accumulate(worst_val)
    radii, verdicts, witnesses = [], [], []
    flags = []
    for eps in eps_grid:
        ok = running < eps
        if not ok[0]:
            radii.append(0.0)
            verdicts.append(FAIL)
            witnesses.append(worst_arg[0])
            continue
        k = max_steps if ok.all() else int(np.argmin(ok))
        if ok.all() and "RADIUS_AT_BUDGET" not in flags:
            flags.append("RADIUS_AT_BUDGET")
        radii.append(k * G.step)
        verdicts.append(PASS)
        witnesses.append(None if ok.all() else worst_arg[k])
    return EquicontinuityCertificate(spec.name, eps_grid, radii, verdicts, witnesses, flags)


# ---------------------------------------------------------------------------
# gauge axioms
# ---------------------------------------------------------------------------

def gauge_axiom_violations(spec: Gauge, feats, triples, tol: float = FLOAT_TOL, exact: bool = False):
    """Check reflexivity, symmetry and the triangle inequality on index triples.

    ``feats`` is a stacked feature array (one row per point).  With
    ``exact=True`` integer raw distances are compared with zero tolerance.
    Returns a list of violation descriptions (empty when all hold).
    """
    triples = np.asarray(triples, dtype=np.int64).reshape(-1, 3)
    i, j, k = triples.T
    dist = spec.raw_distance if exact else spec.distance
    dii = np.asarray(dist(feats[i], feats[i]))
    dij = np.asarray(dist(feats[i], feats[j]))
    dji = np.asarray(dist(feats[j], feats[i]))
    djk = np.asarray(dist(feats[j], feats[k]))
    dik = np.asarray(dist(feats[i], feats[k]))
    out = []
    t = 0 if exact else tol
    for name, bad in (("reflexivity", np.abs(dii) > t),
                      ("nonnegativity", dij < 0),
                      ("symmetry", np.abs(dij - dji) > t),
                      ("triangle", dik > dij + djk + t)):
        for n in np.flatnonzero(bad)[:5]:
            out.append({"axiom": name, "triple": triples[n].tolist()})
    return out

