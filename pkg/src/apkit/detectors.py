"""Almost-period sets, density verdicts, greedy nets and the classifier.

Everything here is computed from the profile ``g(t) = gauge(T_t x, x)`` or
from orbit features.  On a finite cyclic group the verdicts are exact;
on Z^d or a fine lattice they are window surrogates and carry WINDOWED.
"""
from __future__ import annotations

import csv
import heapq
import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import UsageError
from .group import CYCLIC, Group, as_fraction, window_coords
from .space import FAIL, INCONCLUSIVE, PASS, WINDOWED, Instance, equicontinuity_check

CHUNK = 4096


def _repr(G: Group, row):
    return int(row[0]) if G.d == 1 else tuple(int(c) for c in row)


def _steps_box(G: Group, k: int) -> np.ndarray:
    """All shifts with |t| <= k lattice steps."""
    return window_coords(G, k * G.h)


def _num(v):
    return str(v) if isinstance(v, Fraction) else v


# ---------------------------------------------------------------------------
# comparisons against eps, exact whenever the gauge is
# ---------------------------------------------------------------------------

class Threshold:
    """``below(values)`` decides ``gauge < eps`` for raw or float distances."""

    def __init__(self, spec, eps):
        self.eps = as_fraction(eps) if not isinstance(eps, Fraction) else eps
        if self.eps <= 0:
            raise UsageError("eps must be > 0")
        self.exact = bool(getattr(spec, "exact", False))
        self.spec = spec
        if self.exact:
            q = self.eps * spec.scale
            self.num, self.den = q.numerator, q.denominator

    def dist(self, fa, fb):
        return self.spec.raw_distance(fa, fb) if self.exact else self.spec.distance(fa, fb)

    def below(self, vals) -> np.ndarray:
        vals = np.asarray(vals)
        if self.exact and np.issubdtype(vals.dtype, np.integer):
            if self.num < 2**62 // max(1, self.den) and (vals.size == 0 or int(np.abs(vals).max()) < 2**62 // self.den):
                return vals * self.den < self.num
            return np.array([int(v) * self.den < self.num for v in vals.ravel()], dtype=bool).reshape(vals.shape)
        if self.exact:
            return vals / float(self.spec.scale) < float(self.eps)
        return vals < float(self.eps)


# ---------------------------------------------------------------------------
# profile g(t) = gauge(T_t x, x)
# ---------------------------------------------------------------------------

@dataclass
class Profile:
    group: Group
    coords: np.ndarray
    values: np.ndarray
    raw: np.ndarray | None
    scale: Fraction
    window_steps: int | None

    def below(self, eps) -> np.ndarray:
        eps = as_fraction(eps)
        if self.raw is None:
            return self.values < float(eps)
        q = eps * self.scale
        if self.raw.size and int(self.raw.max()) > 2**62 // q.denominator:
            return np.array([int(r) * q.denominator < q.numerator for r in self.raw], dtype=bool)
        return self.raw * q.denominator < q.numerator

    def value_at(self, i):
        if self.raw is not None:
            return Fraction(int(self.raw[i])) / self.scale
        return float(self.values[i])

    def max_value(self):
        if self.raw is not None:
            return Fraction(int(self.raw.max())) / self.scale
        return float(self.values.max())

    def index_of(self, coords: np.ndarray) -> np.ndarray:
        """Row indices of the given shifts inside the profile box (or -1)."""
        G = self.group
        c = np.asarray(coords, dtype=np.int64).reshape(-1, G.d)
        if G.kind == CYCLIC:
            return np.mod(c[:, 0], G.n)
        W = self.window_steps
        inside = np.all(np.abs(c) <= W, axis=1)
        idx = np.zeros(c.shape[0], dtype=np.int64)
        side = 2 * W + 1
        for k in range(G.d):
            idx = idx * side + (c[:, k] + W)
        return np.where(inside, idx, -1)


def profile(inst: Instance, spec, x, W=None) -> Profile:
    """g(t) = gauge(T_t x, x) for every t in the window (lexicographic)."""
    spec = inst.resolve(spec)
    G = inst.group
    coords = window_coords(G, W)
    fx = inst.features(spec, x)
    exact = bool(getattr(spec, "exact", False))
    parts = []
    for a in range(0, coords.shape[0], CHUNK):
        F = inst.shifted_features(spec, x, coords[a:a + CHUNK])
        parts.append(np.asarray(spec.raw_distance(F, fx) if exact else spec.distance(F, fx)))
    vals = np.concatenate(parts) if parts else np.zeros(0)
    raw = None
    scale = getattr(spec, "scale", Fraction(1))
    if exact and np.issubdtype(vals.dtype, np.integer):
        raw = vals.astype(np.int64)
        fvals = raw / float(scale)
    else:
        fvals = vals.astype(float) / (float(scale) if exact else 1.0)
    Ws = None if G.kind == CYCLIC else G.window_steps(W)
    return Profile(G, coords, fvals, raw, scale, Ws)


def default_eps_grid(prof: Profile, levels: int = 5) -> list:
    """{1, 1/2, ..., 1/2^(levels-1)} times the orbit diameter seen by the profile."""
    diam = prof.max_value()
    if diam == 0:
        diam = Fraction(1) if isinstance(diam, Fraction) else 1.0
    return [diam / 2**k for k in range(levels)]


# ---------------------------------------------------------------------------
# almost periods and density verdicts
# ---------------------------------------------------------------------------

@dataclass
class RelDenseVerdict:
    verdict: str
    R: int | None
    R_min: int | None
    flags: list = field(default_factory=list)

    def to_dict(self, h=1):
        real = lambda v: None if v is None else float(v * h)
        return {"verdict": self.verdict, "R": self.R, "R_min": self.R_min,
                "R_min_real": real(self.R_min), "flags": list(self.flags)}


@dataclass
class FinRelDenseVerdict:
    verdict: str
    F: list | None
    flags: list = field(default_factory=list)

    @property
    def size(self):
        return None if self.F is None else len(self.F)

    def to_dict(self):
        return {"verdict": self.verdict, "size": self.size, "F": self.F, "flags": list(self.flags)}


@dataclass
class AlmostPeriodReport:
    group: Group
    eps: object
    window_steps: int | None
    periods: np.ndarray
    gauge_values: list
    max_gap: int
    rel_dense: RelDenseVerdict | None = None
    fin_rel_dense: FinRelDenseVerdict | None = None
    flags: list = field(default_factory=list)

    @classmethod
    def from_periods(cls, G: Group, periods, W=None, eps=None):
        """Report for an explicitly given period set (no gauge involved)."""
        P = np.asarray(periods, dtype=np.int64).reshape(-1, G.d)
        Ws = None if G.kind == CYCLIC else G.window_steps(W)
        rep = cls(G, eps, Ws, _sort_rows(P), [None] * len(P), 0,
                  flags=[] if G.kind == CYCLIC else [WINDOWED])
        rep.max_gap = _max_gap(G, rep.periods, Ws)
        return rep

    @property
    def period_list(self) -> list:
        return [_repr(self.group, r) for r in self.periods]

    @property
    def covering_radius(self):
        return None if self.rel_dense is None else self.rel_dense.R_min

    def to_dict(self) -> dict:
        h = self.group.h
        return {"eps": _num(self.eps), "window": self.window_steps,
                "periods": self.period_list, "maxGap": self.max_gap,
                "maxGap_real": float(self.max_gap * h),
                "relDense": None if self.rel_dense is None else self.rel_dense.to_dict(h),
                "finRelDense": None if self.fin_rel_dense is None else self.fin_rel_dense.to_dict(),
                "flags": list(self.flags)}


def _sort_rows(P: np.ndarray) -> np.ndarray:
    if P.shape[0] == 0:
        return P
    order = np.lexsort([P[:, k] for k in range(P.shape[1] - 1, -1, -1)])
    return P[order]


def _max_gap(G: Group, P: np.ndarray, Ws) -> int:
    """Largest gap between consecutive periods; covering radius for d > 1."""
    if G.kind == CYCLIC:
        p = np.unique(np.mod(P[:, 0], G.n))
        if p.size == 0:
            return G.n
        gaps = np.diff(np.concatenate([p, [p[0] + G.n]]))
        return int(gaps.max())
    sentinel = 2 * Ws + 1
    if P.shape[0] <= 1:
        return sentinel
    if G.d == 1:
        return int(np.diff(np.sort(P[:, 0])).max())
    from scipy.spatial import cKDTree
    pts = _steps_box(G, Ws)
    dist, _ = cKDTree(P).query(pts, p=np.inf)
    return int(np.ceil(dist.max()))


def _nearest_period_distance(G: Group, P: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Sup-norm distance (in steps) from each point to the nearest period."""
    if P.shape[0] == 0:
        return np.full(pts.shape[0], np.iinfo(np.int64).max // 4, dtype=np.int64)
    if G.d == 1:
        p = np.sort(P[:, 0])
        q = pts[:, 0]
        i = np.searchsorted(p, q)
        right = np.abs(p[np.minimum(i, p.size - 1)] - q)
        left = np.abs(q - p[np.maximum(i - 1, 0)])
        return np.minimum(left, right)
    from scipy.spatial import cKDTree
    dist, _ = cKDTree(P).query(pts, p=np.inf)
    return np.rint(dist).astype(np.int64)


def relative_density(report: AlmostPeriodReport, R=None) -> RelDenseVerdict:
    """Decide P + ball(R) covering the edge-trimmed window.

    The reported ``R_min`` is the least R' >= ceil(maxGap / 2) for which every
    window point with |t| <= W - R' lies within R' of a period.  The verdict
    is PASS iff R_min exists and R_min <= R.  Radii are in lattice steps.
    """
    G = report.group
    P = report.periods
    if G.kind == CYCLIC:
        n = G.n
        R = n // 2 if R is None else int(R)
        pts = np.arange(n)
        if P.shape[0] == 0:
            return RelDenseVerdict(FAIL, R, None)
        p = np.unique(np.mod(P[:, 0], n))
        diff = np.abs(pts[:, None] - p[None, :])
        cov = int(np.minimum(diff, n - diff).min(axis=1).max())
        return RelDenseVerdict(PASS if cov <= R else FAIL, R, cov)
    Ws = report.window_steps
    R = Ws // 4 if R is None else int(R)
    if R > Ws:
        raise UsageError(f"covering radius R={R} exceeds the window radius W={Ws}")
    if R < 0:
        raise UsageError("R must be >= 0")
    r_star = -(-report.max_gap // 2)
    pts = _steps_box(G, Ws)
    dist = _nearest_period_distance(G, P, pts)
    norms = np.abs(pts).max(axis=1)
    # reach[m] = worst distance to a period among points with |t| <= m
    reach = np.zeros(Ws + 1, dtype=np.int64)
    np.maximum.at(reach, norms, dist)
    reach = np.maximum.accumulate(reach)
    R_min = None
    for Rp in range(max(r_star, 0), Ws + 1):
        if reach[Ws - Rp] <= Rp:
            R_min = Rp
            break
    ok = R_min is not None and R_min <= R
    return RelDenseVerdict(PASS if ok else FAIL, R, R_min, [WINDOWED])


def min_cover_cyclic(n: int, P) -> list:
    """A minimum F with P + F = Z/n, found by 0/1 integer programming (HiGHS)."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    p = sorted({int(v) % n for v in P})
    if not p:
        raise UsageError("cannot cover with an empty period set")
    if len(p) == n:
        return [0]
    # stabiliser m Z/n of P: the problem lives on the quotient Z/m
    m = next(d for d in range(1, n + 1) if n % d == 0 and all((v + d) % n in set(p) for v in p))
    q = sorted({v % m for v in p})
    if len(q) == 1:
        return [(f - q[0]) % m for f in range(m)]
    A = np.zeros((m, m))
    for f in range(m):
        for v in q:
            A[(v + f) % m, f] = 1
    res = milp(c=np.ones(m), integrality=np.ones(m), bounds=Bounds(0, 1),
               constraints=LinearConstraint(A, lb=1, ub=np.inf))
    if not res.success:  # pragma: no cover - HiGHS always solves these
        raise RuntimeError(f"set-cover solver failed: {res.message}")
    F = [f for f in range(m) if res.x[f] > 0.5]
    covered = {(v + f) % m for v in q for f in F}
    assert len(covered) == m, "solver returned a non-cover"
    return F


def _greedy_window_cover(G: Group, P: np.ndarray, Ws: int, R: int) -> list:
    """Lazy greedy F within ball(R) so that P + F covers the trimmed window."""
    T = _steps_box(G, Ws - R)
    side = 2 * (Ws - R) + 1
    if G.d == 1:
        tindex = lambda c: c[:, 0] + (Ws - R)
    else:
        def tindex(c):
            idx = np.zeros(c.shape[0], dtype=np.int64)
            for k in range(G.d):
                idx = idx * side + (c[:, k] + Ws - R)
            return idx
    uncovered = np.ones(T.shape[0], dtype=bool)
    cands = _steps_box(G, R)

    def hits(f):
        pts = P + f
        inside = np.all(np.abs(pts) <= Ws - R, axis=1)
        return tindex(pts[inside])

    heap = [(-int(uncovered[hits(f)].sum()), i) for i, f in enumerate(cands)]
    heapq.heapify(heap)
    F = []
    while uncovered.any() and heap:
        neg, i = heapq.heappop(heap)
        gain = int(uncovered[hits(cands[i])].sum())
        if gain == 0:
            continue
        if heap and gain < -heap[0][0]:
            heapq.heappush(heap, (-gain, i))
            continue
        F.append(_repr(G, cands[i]))
        uncovered[hits(cands[i])] = False
    if uncovered.any():
        return None
    return sorted(F)


def finite_relative_density(inst: Instance, report: AlmostPeriodReport) -> FinRelDenseVerdict:
    """Minimal F with P + F = G (exact) or a greedy window cover (WINDOWED)."""
    G = report.group
    if G.kind == CYCLIC:
        if report.periods.shape[0] == 0:
            return FinRelDenseVerdict(FAIL, None)
        return FinRelDenseVerdict(PASS, min_cover_cyclic(G.n, report.periods[:, 0]))
    rel = report.rel_dense or relative_density(report)
    if rel.R_min is None:
        return FinRelDenseVerdict(FAIL, None, [WINDOWED])
    F = _greedy_window_cover(G, report.periods, report.window_steps, rel.R_min)
    return FinRelDenseVerdict(PASS if F is not None else FAIL, F, [WINDOWED])


def almost_periods(inst: Instance, spec, x, eps, W=None, prof: Profile | None = None,
                   R=None, with_cover: bool = True) -> AlmostPeriodReport:
    """P_eps(x) within the window plus its density verdicts."""
    spec = inst.resolve(spec)
    G = inst.group
    if prof is None:
        prof = profile(inst, spec, x, W)
    mask = prof.below(eps)
    P = prof.coords[mask]
    vals = [prof.value_at(i) for i in np.flatnonzero(mask)]
    rep = AlmostPeriodReport(G, eps, prof.window_steps, P, vals, _max_gap(G, P, prof.window_steps),
                             flags=[] if G.kind == CYCLIC else [WINDOWED])
    rep.rel_dense = relative_density(rep, R)
    if with_cover:
        rep.fin_rel_dense = finite_relative_density(inst, rep)
    return rep


def report_rows(report: AlmostPeriodReport):
    """CSV rows (eps, t, gauge value) for t in P_eps."""
    for t, v in zip(report.period_list, report.gauge_values):
        yield (_num(report.eps), t if not isinstance(t, tuple) else " ".join(map(str, t)), _num(v))


def reports_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eps", "t", "gauge_value"])
    for rep in reports:
        w.writerows(report_rows(rep))
    return buf.getvalue()


# ---------------------------------------------------------------------------
# greedy eps-nets
# ---------------------------------------------------------------------------

@dataclass
class EpsNet:
    group: Group
    eps: object
    center_coords: np.ndarray
    sample_coords: np.ndarray
    assignments: np.ndarray
    covered: bool

    @property
    def centers(self) -> list:
        return [_repr(self.group, r) for r in self.center_coords]

    @property
    def size(self) -> int:
        return self.center_coords.shape[0]

    def size_within(self, Ws: int) -> int:
        """Net size the same scan would have produced on the smaller window."""
        if self.group.kind == CYCLIC:
            return self.size
        return int((np.abs(self.center_coords).max(axis=1) <= Ws).sum())

    def restrict(self, Ws: int) -> "EpsNet":
        """The net of the same centre-out scan on the smaller window.

        Centres are a prefix of this scan.  Samples whose nearest centre lies
        outside the smaller window get assignment -1.
        """
        if self.group.kind == CYCLIC:
            return self
        keep_c = np.abs(self.center_coords).max(axis=1) <= Ws
        keep_s = np.abs(self.sample_coords).max(axis=1) <= Ws
        renum = np.cumsum(keep_c) - 1
        a = self.assignments[keep_s]
        assign = np.where(keep_c[a], renum[a], -1)
        return EpsNet(self.group, self.eps, self.center_coords[keep_c], self.sample_coords[keep_s],
                      assign, self.covered)

    def to_dict(self):
        return {"eps": _num(self.eps), "size": self.size, "centers": self.centers,
                "covered": self.covered}


def center_out_order(G: Group, coords: np.ndarray) -> np.ndarray:
    """Indices sorting shifts by (|t|, lexicographic); a window scan extends any smaller one."""
    norms = np.abs(coords).max(axis=1) if G.kind != CYCLIC else np.minimum(coords[:, 0] % G.n, -coords[:, 0] % G.n)
    keys = [coords[:, k] for k in range(G.d - 1, -1, -1)] + [norms]
    return np.lexsort(keys)


def greedy_eps_net(inst: Instance, spec, x, eps, W=None) -> EpsNet:
    """Greedy eps-net over the orbit samples, scanned centre-out.

    A sample becomes a new centre iff its gauge distance to every existing
    centre is >= eps; every other sample is assigned to its nearest centre.
    """
    spec = inst.resolve(spec)
    G = inst.group
    thr = Threshold(spec, eps)
    coords = window_coords(G, W)
    coords = coords[center_out_order(G, coords)]
    N = coords.shape[0]
    centers_idx = []
    cfeat = None
    assign = np.full(N, -1, dtype=np.int64)
    for a in range(0, N, CHUNK):
        block = coords[a:a + CHUNK]
        F = inst.shifted_features(spec, x, block)
        fsize = max(1, int(np.prod(F.shape[1:])))
        B = F.shape[0]
        covered = np.zeros(B, dtype=bool)
        best = np.full(B, -1, dtype=np.int64)
        if cfeat is not None:
            k = cfeat.shape[0]
            step = max(1, int(4e6 // max(1, k * fsize)))
            for b in range(0, B, step):
                D = np.asarray(thr.dist(F[b:b + step, None], cfeat[None]))
                covered[b:b + step] = thr.below(D).any(axis=1)
                best[b:b + step] = np.argmin(D, axis=1)
        new_local = []
        for i in np.flatnonzero(~covered):
            if new_local:
                D = np.asarray(thr.dist(F[i][None], F[new_local]))
                if thr.below(D).any():
                    # old centres are all >= eps away, so the nearest is new
                    best[i] = len(centers_idx) + int(np.argmin(D))
                    continue
            new_local.append(i)
            best[i] = len(centers_idx) + len(new_local) - 1
        # nearest-centre assignment for covered samples against new centres
        if new_local and cfeat is not None and covered.any():
            idx = np.flatnonzero(covered)
            newf = F[new_local]
            step = max(1, int(4e6 // max(1, (cfeat.shape[0] + len(new_local)) * fsize)))
            for b in range(0, idx.size, step):
                sub = idx[b:b + step]
                Dold = np.asarray(thr.dist(F[sub][:, None], cfeat[None])).min(axis=1)
                Dnew = np.asarray(thr.dist(F[sub][:, None], newf[None]))
                better = Dnew.min(axis=1) < Dold
                best[sub[better]] = len(centers_idx) + np.argmin(Dnew[better], axis=1)
        centers_idx.extend(a + i for i in new_local)
        newf = F[new_local]
        cfeat = newf if cfeat is None else np.concatenate([cfeat, newf])
        assign[a:a + B] = best
    ccoords = coords[centers_idx]
    # coverage certificate: every sample strictly within eps of its centre
    ok = True
    for a in range(0, N, CHUNK):
        F = inst.shifted_features(spec, x, coords[a:a + CHUNK])
        D = np.asarray(thr.dist(F, cfeat[assign[a:a + CHUNK]]))
        ok = ok and bool(thr.below(D).all())
    return EpsNet(G, eps, ccoords, coords, assign, ok)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class Classification:
    bohr: str
    pseudo_bochner: str
    bochner: str
    complete: bool
    eps_grid: list
    witnesses: dict
    flags: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    nets: list = field(default_factory=list)

    @property
    def verdicts(self):
        return self.bohr, self.pseudo_bochner, self.bochner

    def to_dict(self) -> dict:
        return {"bohr": self.bohr, "pseudoBochner": self.pseudo_bochner, "bochner": self.bochner,
                "completeDeclared": self.complete, "epsGrid": [_num(e) for e in self.eps_grid],
                "witnesses": self.witnesses, "flags": list(self.flags)}


def _bochner(pb: str, complete: bool):
    if pb != PASS:
        return pb
    return PASS if complete else INCONCLUSIVE


def classify(inst: Instance, spec, x, eps_grid=None, W=None, R=None) -> Classification:
    """Bohr, pseudo-Bochner and Bochner verdicts over an eps grid.

    Exact on finite cyclic groups.  On infinite groups relative density is
    judged on the trimmed window W, and pseudo-Bochner requires equal greedy
    net sizes on W and 2W (and a passing compactness probe when the instance
    supplies one).
    """
    spec = inst.resolve(spec)
    G = inst.group
    prof = profile(inst, spec, x, W)
    if eps_grid is None:
        eps_grid = default_eps_grid(prof)
    eps_grid = list(eps_grid)
    if not eps_grid:
        raise UsageError("eps grid must be nonempty")
    if any(as_fraction(e) <= 0 for e in eps_grid):
        raise UsageError("eps grid must be strictly positive")
    reports = [almost_periods(inst, spec, x, e, prof=prof, R=R, with_cover=G.kind == CYCLIC)
               for e in eps_grid]
    bohr_w = [{"eps": _num(r.eps), "R_min": r.rel_dense.R_min, "maxGap": r.max_gap,
               "verdict": r.rel_dense.verdict} for r in reports]
    bohr = PASS if all(r.rel_dense.verdict == PASS for r in reports) else FAIL
    flags = []
    witnesses = {"bohr": bohr_w}
    if G.kind == CYCLIC:
        from .constructions import build_hull_group
        pb_w = [{"eps": _num(r.eps), "F": r.fin_rel_dense.F, "size": r.fin_rel_dense.size,
                 "verdict": r.fin_rel_dense.verdict} for r in reports]
        pb = PASS if all(r.fin_rel_dense.verdict == PASS for r in reports) else FAIL
        try:
            hull = build_hull_group(inst, spec, x)
            witnesses["hull_order"] = hull.order
        except Exception as exc:  # non-pseudometric orbit data
            witnesses["hull_order"] = None
            witnesses["hull_error"] = str(exc)
    else:
        flags.append(WINDOWED)
        Ws = G.window_steps(W)
        pb_w = []
        pb = PASS
        nets = []
        for e in eps_grid:
            net = greedy_eps_net(inst, spec, x, e, W=2 * Ws * G.h)
            nets.append(net)
            small, large = net.size_within(Ws), net.size
            ok = small == large
            pb_w.append({"eps": _num(e), "net_W": small, "net_2W": large,
                         "verdict": PASS if ok else FAIL})
            if not ok:
                pb = FAIL
        if inst.compactness_probe is not None:
            verdict, wit = inst.compactness_probe(x, Ws)
            witnesses["compactness_probe"] = {"verdict": verdict, "witness": wit}
            if verdict != PASS:
                pb = FAIL
    witnesses["pseudoBochner"] = pb_w
    bochner = _bochner(pb, inst.complete)
    witnesses["bochner"] = {"completeDeclared": inst.complete}
    if bochner == INCONCLUSIVE:
        flags.append("COMPLETENESS_NOT_DECLARED")
    return Classification(bohr, pb, bochner, inst.complete, eps_grid, witnesses, flags, reports,
                          nets if G.kind != CYCLIC else [])


# ---------------------------------------------------------------------------
# bridges between the detectors
# ---------------------------------------------------------------------------

@dataclass
class BridgeResult:
    name: str
    checked: int
    violations: list
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def net_cover_bridge(inst: Instance, spec, x, eps, W=None, tol: float = 1e-9, net: EpsNet | None = None) -> BridgeResult:
    """Every window shift t lies in t_j + P_{2 eps + tol}(x) for a net centre t_j."""
    spec = inst.resolve(spec)
    G = inst.group
    if net is None:
        net = greedy_eps_net(inst, spec, x, eps, W)
    Ws = None if G.kind == CYCLIC else G.window_steps(W)
    prof = profile(inst, spec, x, None if Ws is None else 2 * Ws * G.h)
    bound = 2 * float(eps) + tol
    g = prof.values
    C = net.center_coords
    T = net.sample_coords
    assigned = net.assignments >= 0
    first = np.zeros(T.shape[0], dtype=bool)
    first[assigned] = g[prof.index_of(T[assigned] - C[net.assignments[assigned]])] < bound
    bad = np.flatnonzero(~first)
    violations = []
    for i in bad:
        diffs = prof.index_of(T[i][None, :] - C)
        if not (g[diffs] < bound).any():
            violations.append({"t": _repr(G, T[i])})
    return BridgeResult("net_cover", T.shape[0], violations,
                        {"eps": _num(eps), "centers": net.size, "fallback_searches": int(bad.size)})


def density_cover_bridge(inst: Instance, spec, x, eps, W=None, R=None, samples=None) -> BridgeResult:
    """Constructive check of P_eps + F covering the trimmed window (fine lattice).

    Uses eps' = eps/2 for relative density with radius R, the equicontinuity
    radius r = k h at eps/2, and F the grid of spacing 2k+1 steps over ball(R).
    """
    spec = inst.resolve(spec)
    G = inst.group
    if G.is_discrete:
        raise UsageError("the equicontinuity bridge needs a fine lattice")
    half = as_fraction(eps) / 2
    Ws = G.window_steps(W)
    rep = almost_periods(inst, spec, x, half, W, R=R, with_cover=False)
    if rep.rel_dense.verdict != PASS:
        return BridgeResult("density_cover", 0, [{"reason": "relative density failed at eps/2"}],
                            {"R_min": rep.rel_dense.R_min})
    Rm = rep.rel_dense.R_min
    samples = [x] if samples is None else samples
    cert = equicontinuity_check(inst, spec, [float(half)], samples)
    if cert.verdicts[0] != PASS:
        return BridgeResult("density_cover", 0, [{"reason": "equicontinuity failed", "witness": cert.witnesses[0]}])
    k = int(round(cert.radii[0] / G.step))
    spacing = 2 * k + 1
    n_side = -(-(2 * Rm + 1) // spacing)
    F = np.array([-Rm + k + spacing * i for i in range(n_side)], dtype=np.int64).reshape(-1, 1)
    prof = profile(inst, spec, x, (Ws + k) * G.h)
    good = prof.below(eps)
    T = window_coords(G, (Ws - Rm) * G.h)
    idx = prof.index_of((T[:, None, :] - F[None, :, :]).reshape(-1, 1)).reshape(T.shape[0], F.shape[0])
    hit = np.where(idx >= 0, good[np.maximum(idx, 0)], False).any(axis=1)
    viol = [{"t": _repr(G, T[i])} for i in np.flatnonzero(~hit)]
    return BridgeResult("density_cover", T.shape[0], viol,
                        {"eps": _num(eps), "R_min": Rm, "r_steps": k, "F_size": F.shape[0]})


def mixed_almost_periods(inst: Instance, spec, x, eta, r, W=None) -> np.ndarray:
    """Shifts t in the window with rho_sym(T_t x, x) < eta (mixed gauge, radius r)."""
    spec = inst.resolve(spec)
    G = inst.group
    from .constructions import _closed_ball_coords

    S = _closed_ball_coords(G, r)
    snorm = G.norm_array(S)
    coords = window_coords(G, W)
    fx = inst.features(spec, x)
    Fs = inst.shifted_features(spec, x, -S)            # T_{-s} x
    out = np.zeros(coords.shape[0], dtype=bool)
    for a in range(0, coords.shape[0], CHUNK):
        block = coords[a:a + CHUNK]
        # rho(T_t x, x): gauge(T_{t-s} x, x)
        moved = inst.shifted_features(spec, x, (block[:, None, :] - S[None, :, :]).reshape(-1, G.d))
        d1 = np.asarray(spec.distance(moved, fx), dtype=float).reshape(block.shape[0], S.shape[0])
        rho1 = np.maximum(d1, snorm[None, :]).min(axis=1)
        # rho(x, T_t x): gauge(T_{-s} x, T_t x)
        Ft = inst.shifted_features(spec, x, block)
        d2 = np.asarray(spec.distance(Fs[None], Ft[:, None]), dtype=float)
        rho2 = np.maximum(d2, snorm[None, :]).min(axis=1)
        out[a:a + block.shape[0]] = np.maximum(rho1, rho2) < float(eta)
    return coords[out]


def mixed_containment(inst: Instance, spec, x, eps, r, W=None, delta_inv: float = 0.0) -> BridgeResult:
    """P^mixed_{min(r, eps)}(x) is inside P^plain_{eps + delta_inv}(x) + ball(r)."""
    spec = inst.resolve(spec)
    G = inst.group
    eta = min(float(r), float(eps))
    Pm = mixed_almost_periods(inst, spec, x, eta, r, W)
    if G.kind == CYCLIC:
        prof = profile(inst, spec, x)
    else:
        prof = profile(inst, spec, x, (G.window_steps(W) + G.radius_steps(r, strict=False)) * G.h)
    plain = prof.values < float(eps) + float(delta_inv)
    from .group import ball_coords

    B = ball_coords(G, r)  # open ball, always holds 0
    viol = []
    for t in Pm:
        idx = prof.index_of(t[None, :] - B)
        if not ((idx >= 0) & plain[np.maximum(idx, 0)]).any():
            viol.append({"t": _repr(G, t)})
    return BridgeResult("mixed", Pm.shape[0], viol, {"eps": float(eps), "r": float(r), "eta": eta})
