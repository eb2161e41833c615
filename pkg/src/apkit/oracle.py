"""Exhaustive ground truth on finite fixtures.

A fixture is a finite set of points permuted by Z/n together with an
explicit integer gauge table (the gauge is ``table / denom``).  Points are
disjoint orbits Z/n -> Z/d_i, so the action is a group action by design.
Gauge tables are shortest-path metrics of random weighted graphs; the
invariant variant averages the table over the group.

The functions ``oracle_*`` use only Python integers, Fractions and
itertools.  They share no code with the detectors, which is the point.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DataError, ResourceError, UsageError
from .gauges import Gauge, _ExactMixin
from .group import FiniteCyclic
from .space import PASS, Instance


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

@dataclass
class FiniteFixture:
    n: int
    orbit_sizes: list
    table: list                     # integer gauge table, gauge = table / denom
    denom: int = 1
    invariant: bool = False
    labels: list = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [(i, r) for i, d in enumerate(self.orbit_sizes) for r in range(d)]
        for d in self.orbit_sizes:
            if d < 1 or self.n % d:
                raise UsageError(f"orbit size {d} does not divide n={self.n}")
        self._index = {lab: k for k, lab in enumerate(self.labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    def act(self, t: int, p: int) -> int:
        i, r = self.labels[p]
        return self._index[(i, (r + t) % self.orbit_sizes[i])]

    def action_table(self) -> list:
        return [[self.act(t, p) for p in range(self.size)] for t in range(self.n)]

    def gauge(self, p: int, q: int) -> Fraction:
        return Fraction(self.table[p][q], self.denom)

    def to_dict(self) -> dict:
        return {"n": self.n, "orbit_sizes": list(self.orbit_sizes), "denom": self.denom,
                "invariant": self.invariant, "table": [list(map(int, r)) for r in self.table]}

    @classmethod
    def from_dict(cls, d: dict) -> "FiniteFixture":
        return cls(int(d["n"]), list(d["orbit_sizes"]), [list(map(int, r)) for r in d["table"]],
                   int(d.get("denom", 1)), bool(d.get("invariant", False)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def validate_fixture(fix: FiniteFixture) -> list:
    """Exact checks: symmetric, zero diagonal, triangle inequality, action laws."""
    P = fix.size
    T = fix.table
    problems = []
    for p in range(P):
        if T[p][p] != 0:
            problems.append(("diagonal", p))
        for q in range(P):
            if T[p][q] != T[q][p] or T[p][q] < 0:
                problems.append(("symmetry", p, q))
    for p, q, r in itertools.product(range(P), repeat=3):
        if T[p][r] > T[p][q] + T[q][r]:
            problems.append(("triangle", p, q, r))
            break
    for p in range(P):
        if fix.act(0, p) != p:
            problems.append(("identity", p))
    for s, t in itertools.product(range(fix.n), repeat=2):
        for p in range(P):
            if fix.act(s, fix.act(t, p)) != fix.act((s + t) % fix.n, p):
                problems.append(("composition", s, t, p))
                return problems
    return problems


def _divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


def _shortest_paths(P: int, edges) -> np.ndarray:
    big = 10**9
    D = np.full((P, P), big, dtype=np.int64)
    np.fill_diagonal(D, 0)
    for a, b, w in edges:
        if w < D[a, b]:
            D[a, b] = D[b, a] = w
    for k in range(P):
        D = np.minimum(D, D[:, k:k + 1] + D[k:k + 1, :])
    return D


def random_fixture(rng: np.random.Generator, n_max: int = 64, invariant: bool = True,
                   max_orbits: int = 3, zero_glue: bool = True, max_weight: int = 9) -> FiniteFixture:
    """Random orbits, random connected weighted graph, shortest-path gauge.

    With ``zero_glue`` an orbit may get zero-weight edges r ~ r + k for all
    r, so the gauge is a genuine pseudometric with nontrivial period groups.
    With ``invariant`` the table is averaged over the group.
    """
    n = int(rng.integers(1, n_max + 1))
    k = int(rng.integers(1, max_orbits + 1))
    divs = _divisors(n)
    sizes = [int(rng.choice(divs)) for _ in range(k)]
    labels = [(i, r) for i, d in enumerate(sizes) for r in range(d)]
    P = len(labels)
    index = {lab: j for j, lab in enumerate(labels)}
    order = rng.permutation(P)
    edges = []
    for a in range(1, P):  # random spanning tree
        b = int(rng.integers(0, a))
        edges.append((int(order[a]), int(order[b]), int(rng.integers(1, max_weight + 1))))
    for _ in range(int(rng.integers(0, P + 1))):
        a, b = (int(v) for v in rng.integers(0, P, size=2))
        if a != b:
            edges.append((a, b, int(rng.integers(1, max_weight + 1))))
    if zero_glue and rng.random() < 0.5:
        i = int(rng.integers(0, k))
        steps = [s for s in _divisors(sizes[i]) if s < sizes[i]]
        if steps:
            s = int(rng.choice(steps))
            edges += [(index[(i, r)], index[(i, (r + s) % sizes[i])], 0) for r in range(sizes[i])]
    D = _shortest_paths(P, edges)
    denom = 1
    if invariant:
        fix0 = FiniteFixture(n, sizes, D.tolist(), 1, False, labels)
        perm = np.array(fix0.action_table(), dtype=np.int64)      # (n, P)
        acc = np.zeros((P, P), dtype=np.int64)
        for t in range(n):
            acc += D[np.ix_(perm[t], perm[t])]
        D = acc
        denom = n
        g = np.gcd.reduce(np.append(D.ravel(), denom))
        if g > 1:
            D = D // g
            denom //= int(g)
    return FiniteFixture(n, sizes, D.tolist(), int(denom), invariant, labels)


def engineered_noninvariant_fixture(n: int = 6) -> FiniteFixture:
    """One free orbit; the path metric 0-1-...-(n-1) with weights growing along it.

    The table is not translation invariant, and every nonzero translate of
    point 0 sits at gauge >= 1, so P_eps(0) = {0} for eps <= 1.
    """
    P = n
    edges = [(r, r + 1, r + 1) for r in range(P - 1)]
    D = _shortest_paths(P, edges)
    return FiniteFixture(n, [n], D.tolist(), 1, False)


# ---------------------------------------------------------------------------
# the fixture as a package instance
# ---------------------------------------------------------------------------

class FixturePoint:
    point_kind = "FixturePoint"

    def __init__(self, fixture: FiniteFixture, index: int, group):
        self.fixture = fixture
        self.index = int(index)
        self.group = group

    def translate(self, t):
        t = t.coords[0] if hasattr(t, "coords") else int(np.asarray(t).ravel()[0])
        return FixturePoint(self.fixture, self.fixture.act(t, self.index), self.group)

    def __eq__(self, other):
        return isinstance(other, FixturePoint) and other.fixture is self.fixture and other.index == self.index

    def __hash__(self):
        return hash((id(self.fixture), self.index))

    def __repr__(self):
        return f"p{self.index}"


class TableGauge(_ExactMixin, Gauge):
    """Gauge read off an explicit integer table; features are point indices."""

    name = "table"
    kind = "pseudometric"
    point_type = FixturePoint

    def __init__(self, group, fixture: FiniteFixture):
        super().__init__(group)
        self.fixture = fixture
        self.T = np.asarray(fixture.table, dtype=np.int64)
        self.perm = np.asarray(fixture.action_table(), dtype=np.int64)
        self.scale = Fraction(fixture.denom)

    def features(self, x):
        self.check_point(x)
        return np.int64(x.index)

    def features_shifted(self, x, shifts):
        self.check_point(x)
        t = np.mod(np.asarray(shifts, dtype=np.int64).reshape(-1), self.group.n)
        return self.perm[t, x.index]

    def raw_distance(self, fa, fb):
        return self.T[np.asarray(fa), np.asarray(fb)]

    @property
    def params(self):
        return {"points": self.fixture.size, "denom": self.fixture.denom}


def fixture_instance(fix: FiniteFixture):
    """(instance, points) for a fixture; finite spaces are complete."""
    G = FiniteCyclic(fix.n)
    inst = Instance(G, [TableGauge(G, fix)], "FixturePoint", complete=True, name="fixture")
    return inst, [FixturePoint(fix, p, G) for p in range(fix.size)]


# ---------------------------------------------------------------------------
# exhaustive oracles
# ---------------------------------------------------------------------------

def oracle_periods(fix: FiniteFixture, x: int, eps: Fraction) -> list:
    eps = Fraction(eps)
    return [t for t in range(fix.n) if fix.gauge(fix.act(t, x), x) < eps]


def _covers(n: int, P, F) -> bool:
    return len({(p + f) % n for p in P for f in F}) == n


def exhaustive_min_cover(n: int, P, max_nodes: int | None = None) -> tuple:
    """Minimum F with P + F = Z/n by iterative deepening.

    Branches on the smallest uncovered element g (some f in g - P must be
    chosen) and prunes with the counting bound ceil(uncovered / |P|).
    Any translate of a cover is a cover, so the element 0 is covered via
    the first period without loss of generality.  With ``max_nodes`` the
    search gives up with ResourceError after that many search nodes.
    """
    P = sorted(set(int(p) % n for p in P))
    if not P:
        return None
    m = len(P)
    nodes = [0]

    def search(covered: frozenset, chosen: tuple, budget: int):
        nodes[0] += 1
        if max_nodes is not None and nodes[0] > max_nodes:
            raise ResourceError(f"exhaustive cover search exceeded {max_nodes} nodes")
        if len(covered) == n:
            return chosen
        missing = n - len(covered)
        if -(-missing // m) > budget:
            return None
        g = next(v for v in range(n) if v not in covered)
        for p in P:
            f = (g - p) % n
            if f in chosen:
                continue
            new = covered | {(q + f) % n for q in P}
            got = search(new, chosen + (f,), budget - 1)
            if got is not None:
                return got
        return None

    start_f = (-P[0]) % n
    start = frozenset((q + start_f) % n for q in P)
    for size in range(1, n + 1):
        got = search(start, (start_f,), size - 1)
        if got is not None:
            return tuple(sorted(got))
    raise AssertionError("Z/n always covers itself")  # pragma: no cover


@dataclass
class OracleResult:
    eps_grid: list
    periods: list
    min_F: list
    K: list
    orbit_classes: int
    bohr: str
    pseudo_bochner: str
    bochner: str

    @property
    def verdicts(self):
        return self.bohr, self.pseudo_bochner, self.bochner

    @property
    def agree(self) -> bool:
        return self.bohr == self.pseudo_bochner == self.bochner


def oracle_classify(fix: FiniteFixture, x: int, eps_grid, cover_nodes: int | None = 200_000) -> OracleResult:
    """Each notion checked from its own definition by exhaustion.

    Bohr: every P_eps is relatively dense; in the discrete finite group the
    whole group is a compact K, checked by forming P + K.  pseudo-Bochner:
    some finite F has P + F = G (the group itself is such an F); the minimum
    F is also searched exhaustively and ``min_F`` holds None where the search
    ran past ``cover_nodes`` nodes.  Bochner: the
    orbit modulo gauge zero is a finite set (so its closure is itself and
    compact), and finite spaces are complete.
    """
    n = fix.n
    eps_grid = [Fraction(e) for e in eps_grid]
    periods, Fs, Ks = [], [], []
    bohr = pb = PASS
    for eps in eps_grid:
        Pe = oracle_periods(fix, x, eps)
        periods.append(Pe)
        K = list(range(n))
        Ks.append(K)
        if not _covers(n, Pe, K):
            bohr = "FAIL"
        if not Pe or not _covers(n, Pe, range(n)):
            pb = "FAIL"
        try:
            F = exhaustive_min_cover(n, Pe, max_nodes=cover_nodes)
        except ResourceError:
            F = None
        if F is not None and not _covers(n, Pe, F):
            pb = "FAIL"
        Fs.append(F)
    orbit = [fix.act(t, x) for t in range(n)]
    classes = []
    for p in orbit:
        if not any(fix.table[p][q] == 0 for q in classes):
            classes.append(p)
    # finitely many classes: the orbit is its own closure and is compact
    bochner = PASS if len(classes) <= n else "FAIL"
    return OracleResult(eps_grid, periods, Fs, Ks, len(classes), bohr, pb, bochner)


@dataclass
class OracleHull:
    order: int
    elements: list
    add_table: list
    periods: list
    class_of: list
    axioms: dict


def oracle_hull(fix: FiniteFixture, x: int) -> OracleHull:
    """Orbit modulo gauge zero with the inherited addition, all axioms by loops."""
    n = fix.n
    pts = [fix.act(t, x) for t in range(n)]
    same = lambda s, t: fix.table[pts[s]][pts[t]] == 0
    reps, class_of = [], []
    for t in range(n):
        for i, r in enumerate(reps):
            if same(t, r):
                class_of.append(i)
                break
        else:
            reps.append(t)
            class_of.append(len(reps) - 1)
    # zero-distance must be an equivalence relation on the orbit
    for s, t in itertools.product(range(n), repeat=2):
        if same(s, t) != (class_of[s] == class_of[t]):
            raise DataError("gauge is not a pseudometric on the orbit")
    k = len(reps)
    table = [[class_of[(reps[i] + reps[j]) % n] for j in range(k)] for i in range(k)]
    e = class_of[0]
    ax = {
        "associative": all(table[table[a][b]][c] == table[a][table[b][c]]
                           for a in range(k) for b in range(k) for c in range(k)),
        "commutative": all(table[a][b] == table[b][a] for a in range(k) for b in range(k)),
        "identity": all(table[e][a] == a == table[a][e] for a in range(k)),
        "inverses": all(any(table[a][b] == e for b in range(k)) for a in range(k)),
        # F(s + t) = F(s) + F(t) for all s, t; this is also well-definedness
        "homomorphism": all(class_of[(s + t) % n] == table[class_of[s]][class_of[t]]
                            for s in range(n) for t in range(n)),
    }
    periods = [t for t in range(n) if class_of[t] == e]
    ax["order_identity"] = k * len(periods) == n
    return OracleHull(k, reps, table, periods, class_of, ax)


def oracle_invariant_metric(fix: FiniteFixture) -> list:
    """d'(p, q) = min(1, max_t gauge(T_t p, T_t q)) as Fractions."""
    P = fix.size
    out = [[Fraction(0)] * P for _ in range(P)]
    for p in range(P):
        for q in range(P):
            m = max(fix.gauge(fix.act(t, p), fix.act(t, q)) for t in range(fix.n))
            out[p][q] = m if m < 1 else Fraction(1)
    return out


__all__ = [
    "FiniteFixture", "FixturePoint", "OracleHull", "OracleResult", "TableGauge",
    "engineered_noninvariant_fixture", "exhaustive_min_cover", "fixture_instance",
    "oracle_classify", "oracle_hull", "oracle_invariant_metric", "oracle_periods",
    "random_fixture", "validate_fixture",
]
