"""Concrete gauge spaces: generators, the counterexample measure and a
catalogue of ready-made instances used by the tests, demos and CLI.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ResourceError, UsageError
from .gauges import (AutocorrelationGauge, MeasureNormGauge, ProductGauge, StepanovGauge,
                     SupGauge, VagueGauge, make_gauge)
from .group import FineLattice, FiniteCyclic, Group, LatticeWindow, parse_group, window_coords
from .points import PointMeasure, PointSet, SampledFunction
from .space import FAIL, PASS, Instance
from .testfns import Hat

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
MAX_TERMS = 20


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def make_trig_function(frequencies, amplitudes, group: Group | None = None, W=None) -> SampledFunction:
    """f(t) = sum_i a_i cos(2 pi theta_i t) on the lattice.

    Without ``W`` the function is formula-backed and exact at every lattice
    site; with ``W`` it is sampled on [-W, W] only, and evaluations that
    need data outside raise ``WindowError``.
    """
    freqs = np.asarray(frequencies, dtype=float).ravel()
    amps = np.asarray(amplitudes, dtype=float).ravel()
    if freqs.shape != amps.shape:
        raise UsageError("frequencies and amplitudes differ in length")
    if not (np.all(np.isfinite(freqs)) and np.all(np.isfinite(amps))):
        raise UsageError("frequencies and amplitudes must be finite")
    G = group or LatticeWindow(1, int(W or 0))
    if G.d != 1:
        raise UsageError("trigonometric samples are one-dimensional")
    h = float(G.h)

    def f(c):
        t = np.asarray(c, dtype=np.int64)[..., 0]
        out = np.zeros(t.shape)
        for th, a in zip(freqs, amps):
            # reduce the phase mod 1 before taking the cosine
            out += a * np.cos(2 * np.pi * np.mod(th * h * t, 1.0))
        return out[..., None]

    label = "trig[" + ",".join(f"{v:.6g}" for v in freqs) + "]"
    if W is None:
        return SampledFunction.from_formula(G, f, label=label)
    coords = window_coords(G, W)
    return SampledFunction.from_values(G, f(coords), lo=coords[0], label=label)


def sturmian_indicator(slope: float, intercept: float, n: np.ndarray) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64)
    a = np.floor((n + 1) * slope + intercept)
    b = np.floor(n * slope + intercept)
    return (a - b) == 1


def make_sturmian_set(slope: float, intercept: float = 0.0, group: Group | None = None, W=None) -> PointSet:
    """{n : floor((n+1) slope + intercept) - floor(n slope + intercept) = 1}."""
    if not 0 < slope <= 1:
        raise UsageError("slope must lie in (0, 1]")
    G = group or LatticeWindow(1, int(W or 0))
    if G.d != 1 or G.kind == "fine":
        raise UsageError("Sturmian sets live on Z or Z/n")
    label = f"sturmian[{slope:.6g},{intercept:.6g}]"
    if W is None:
        return PointSet.from_predicate(G, lambda c: sturmian_indicator(slope, intercept, c[..., 0]), label=label)
    coords = window_coords(G, W)
    members = coords[sturmian_indicator(slope, intercept, coords[:, 0])]
    return PointSet.from_elements(G, members, window=(coords[0], coords[-1]), label=label)


def make_comb(group: Group, period: int, weight=1, phase: int = 0) -> PointMeasure:
    """Periodic Dirac comb sum_k w delta_{phase + k*period} (period in lattice steps)."""
    if period < 1:
        raise UsageError("comb period must be >= 1")
    w = np.int64(weight) if isinstance(weight, (int, np.integer)) else float(weight)

    def f(c):
        return np.where(np.mod(c[..., 0] - phase, period) == 0, w, 0 * w)

    return PointMeasure.from_formula(group, f, label=f"comb[{period}]")


# ---------------------------------------------------------------------------
# the counterexample measure  mu = sum_n n * delta_{5^(n+1) Z + 2 * 5^n}
# ---------------------------------------------------------------------------

def _check_terms(n_max: int):
    if n_max < 0:
        raise UsageError("number of terms must be >= 0")
    if n_max > MAX_TERMS:
        raise ResourceError(f"5^(n+1) overflows 64-bit integers for n > {MAX_TERMS}")


def counterexample_weight(c: np.ndarray, n_lo: int, n_hi: int) -> np.ndarray:
    """sum_{n_lo <= n <= n_hi} n * [c = 2 * 5^n mod 5^(n+1)] as int64."""
    c = np.asarray(c, dtype=np.int64)
    out = np.zeros(c.shape, dtype=np.int64)
    for n in range(max(n_lo, 1), n_hi + 1):
        out += n * (np.mod(c, 5 ** (n + 1)) == 2 * 5 ** n)
    return out


def counterexample_measure(n_max: int, window=None, group: Group | None = None, n_min: int = 1) -> PointMeasure:
    """The measure with terms n_min..n_max, exact integer weights.

    With ``window=(lo, hi)`` (or a radius) the measure is the restriction to
    that interval; otherwise it is formula-backed on all of Z.
    """
    _check_terms(n_max)
    G = group or LatticeWindow(1, 0)
    if G.kind != "lattice" or G.d != 1:
        raise UsageError("the counterexample measure lives on Z")
    label = f"mu[{n_min}..{n_max}]"
    if window is None:
        return PointMeasure.from_formula(G, lambda c: counterexample_weight(c[..., 0], n_min, n_max), label=label)
    lo, hi = (-int(window), int(window)) if np.ndim(window) == 0 else (int(window[0]), int(window[1]))
    c = np.arange(lo, hi + 1, dtype=np.int64)
    w = counterexample_weight(c, n_min, n_max)
    nz = w != 0
    return PointMeasure.from_support(G, c[nz].reshape(-1, 1), w[nz], label=label)


def terms_needed(bound: int) -> int:
    """Largest n with 2 * 5^n <= bound; term n has no atom of modulus < 2 * 5^n."""
    n = 0
    while 2 * 5 ** (n + 1) <= bound:
        n += 1
    return min(n, MAX_TERMS)


@dataclass
class IntervalRow:
    N: int
    check: str
    verdict: str
    shifts_checked: int
    detail: str = ""

    def to_dict(self):
        return {"N": self.N, "check": self.check, "verdict": self.verdict,
                "shifts": self.shifts_checked, "detail": self.detail}


def interval_checks(N: int, window: int) -> list:
    """Integer verification of the three interval statements for level N.

    mu_N uses the terms n < N and nu_N the terms n >= N; the shifts m run over
    (5^N + 5^(N+1) Z) inside [-window, window].  (i) T_m mu_N = mu_N on
    [-window, window]; (ii) nu_N has no atom in (-5^N, 5^N); (iii) neither
    has T_m nu_N.  Terms are included up to the size where they can reach the
    inspected sites, so the infinite tail is handled exactly.  When 5^N
    exceeds the window the interval is clipped to it and the row says so.
    """
    if N < 1:
        raise UsageError("N must be >= 1")
    _check_terms(N)
    W = int(window)
    mods = 5 ** (N + 1)
    first = 5 ** N
    ms = np.arange(first - ((first + W) // mods) * mods, W + 1, mods, dtype=np.int64)
    ms = ms[np.abs(ms) <= W]
    c = np.arange(-W, W + 1, dtype=np.int64)
    rows = []
    # (i) mu_N periodic under m: compare mu_N(c - m) with mu_N(c) on the window
    bad = 0
    for m in ms:
        if np.any(counterexample_weight(c - m, 1, N - 1) != counterexample_weight(c, 1, N - 1)):
            bad += 1
    rows.append(IntervalRow(N, "T_m mu_N = mu_N", PASS if bad == 0 else FAIL, len(ms),
                       f"{bad} shifts disagree" if bad else ""))
    half = min(5 ** N - 1, W)
    inner = np.arange(-half, half + 1, dtype=np.int64)
    clip = "" if half == 5 ** N - 1 else f"interval clipped to [-{W}, {W}]"
    hi_terms = terms_needed(half + 1)
    nu = counterexample_weight(inner, N, max(N, hi_terms))
    rows.append(IntervalRow(N, "supp nu_N avoids (-5^N, 5^N)", PASS if not nu.any() else FAIL, 0,
                       clip if not nu.any() else f"atoms at {inner[nu != 0][:5].tolist()}"))
    bad = 0
    for m in ms:
        reach = int(np.abs(inner - m).max())
        w = counterexample_weight(inner - m, N, max(N, terms_needed(reach)))
        bad += bool(w.any())
    rows.append(IntervalRow(N, "supp T_m nu_N avoids (-5^N, 5^N)", PASS if bad == 0 else FAIL, len(ms),
                       f"{bad} shifts hit the interval" if bad else clip))
    return rows


def support_containment_claim(N: int, window: int):
    """Test supp(nu_N) inside 2*5^N + 5^(N+1) Z on the window.

    Returns ``(holds, witness)``.  The claim is false as soon as a term
    n > N has an atom in the window: 2 * 5^(N+1) is such an atom and is
    divisible by 5^(N+1).
    """
    c = np.arange(-int(window), int(window) + 1, dtype=np.int64)
    w = counterexample_weight(c, N, max(N, terms_needed(int(window))))
    sup = c[w != 0]
    off = sup[np.mod(sup, 5 ** (N + 1)) != 2 * 5 ** N]
    return (off.size == 0, None if off.size == 0 else int(off[np.argmin(np.abs(off))]))


def local_mass(mu: PointMeasure, K: int, W: int) -> int:
    """sup over |t| <= W of |mu|(t + {0..K-1}) (exact for integer weights)."""
    c = np.arange(-W, W + K, dtype=np.int64)
    a = np.abs(mu.at(c))
    s = np.convolve(a, np.ones(K, dtype=a.dtype), mode="valid")
    return s.max().item()


def translation_bound_sequence(mu: PointMeasure, K: int = 1, W: int = 100, doublings: int = 5) -> list:
    """[(W * 2^j, ||mu||_K on that window)] for j = 0..doublings."""
    return [(W * 2 ** j, local_mass(mu, K, W * 2 ** j)) for j in range(doublings + 1)]


def translation_bounded_probe(K: int = 1, doublings: int = 5):
    """Compactness probe: PASS iff the local mass stops growing as the window doubles."""

    def probe(x, W):
        seq = translation_bound_sequence(x, K, max(int(W), 1), doublings)
        vals = [v for _, v in seq]
        verdict = PASS if len(set(vals)) == 1 else FAIL
        return verdict, {"K": K, "sequence": [[w, v] for w, v in seq]}

    return probe


def progression_listing(mu: PointMeasure, N: int, window: int, eps=Fraction(1, 2)) -> dict:
    """Vague almost periods of ``mu`` for one hat supported in (-5^N, 5^N).

    Checks that every m in (5^N + 5^(N+1) Z) inside [-window, window] is an
    eps-almost period.  When 5^N > window the progression misses the window
    and the row passes vacuously.
    """
    from .detectors import almost_periods

    W = int(window)
    mods, first = 5 ** (N + 1), 5 ** N
    row = {"N": N, "eps": str(Fraction(eps)), "hatRadius": first, "window": W}
    if first > W:
        row.update(progression=[], periods=0, missing=[], verdict=PASS, flags=["VACUOUS"])
        return row
    G = LatticeWindow(1, W)
    inst = Instance(G, [VagueGauge(G, [Hat(0, first)])], "PointMeasure", name=f"listing-{N}")
    m = PointMeasure(G, mu.source, mu.offset, mu.label)
    rep = almost_periods(inst, "vague", m, eps, W=W, with_cover=False)
    found = set(rep.period_list)
    prog = [int(v) for v in range(first - ((first + W) // mods) * mods, W + 1, mods) if abs(v) <= W]
    missing = [v for v in prog if v not in found]
    row.update(progression=prog, periods=len(found), missing=missing,
               verdict=PASS if not missing else FAIL, flags=list(rep.flags))
    row["_report"] = rep
    return row


def growth_row(mu: PointMeasure, N: int, cap: int = 4_000_000, local: int = 1000) -> dict:
    """||mu||_{K={0}} over a window containing 2 * 5^N, compared with N.

    The symmetric window [-2*5^N, 2*5^N] is used while it has at most ``cap``
    sites; beyond that the window [2*5^N - local, 2*5^N + local] is used and
    flagged, which still contains the atom and can only lower the sup.
    """
    site = 2 * 5 ** N
    if 2 * site + 1 <= cap:
        value, lo, hi, flags = local_mass(mu, 1, site), -site, site, []
    else:
        c = np.arange(site - local, site + local + 1, dtype=np.int64)
        value, lo, hi, flags = np.abs(mu.at(c)).max().item(), site - local, site + local, ["LOCAL_WINDOW"]
    return {"N": N, "window": [lo, hi], "norm": value, "verdict": PASS if value >= N else FAIL,
            "flags": flags}


def atom_count_bound(mu: PointMeasure, site: int, K: tuple, reach: int | None = None) -> dict:
    """Compare |P_{a/2} cap K| with 2 |mu|(site + K) / a under the norm gauge with cell {0}.

    ``K = (lo, hi)`` is an interval of shifts and ``a = |mu({site})|``.  A
    shift t with gauge(T_t mu, mu) < a/2 forces |mu({site + t})| > a/2,
    which is where the bound comes from.  The gauge sup is taken over
    [-reach, reach] (default: just wide enough to contain site + K), which
    can only over-count almost periods.
    """
    lo, hi = int(K[0]), int(K[1])
    a = abs(mu.at([site]).item())
    if a == 0:
        raise UsageError("the chosen site carries no mass")
    if reach is None:
        reach = max(abs(site + lo), abs(site + hi), abs(site))
    G = LatticeWindow(1, reach)
    gauge = MeasureNormGauge(G, K=1, window=reach)
    m = mu if mu.group == G else PointMeasure(G, mu.source, mu.offset, mu.label)
    ts = np.arange(lo, hi + 1, dtype=np.int64).reshape(-1, 1)
    raw = np.asarray(gauge.raw_distance(gauge.features_shifted(m, ts), gauge.features(m)))
    count = int((2 * raw < a).sum())
    mass = np.abs(m.at(site + ts[:, 0])).sum().item()
    bound = Fraction(2 * mass) / Fraction(a)
    return {"count": count, "bound": bound, "a": a, "mass": mass, "holds": count <= bound}


# ---------------------------------------------------------------------------
# shipped instances
# ---------------------------------------------------------------------------

@dataclass
class Case:
    """A named instance with a point, a gauge and analysis parameters."""

    name: str
    inst: Instance
    gauge: str
    x: object
    W: object
    radii: list = field(default_factory=list)
    description: str = ""


def _one(G, gauge, kind, complete, name, probe=None, notes=""):
    return Instance(G, [gauge], kind, complete=complete, name=name, compactness_probe=probe, notes=notes)


def shipped_cases() -> list:
    """Small catalogue covering every gauge and group model."""
    cases = []
    G = LatticeWindow(1, 1000)
    x = make_trig_function([GOLDEN], [1.0], G)
    cases.append(Case("trig-Z", _one(G, SupGauge(G, window=40), "SampledFunction", True, "trig-Z"),
                      "sup", x, 1000, [0.5, 1.5], "cos(2 pi phi n) on Z, sup gauge"))
    G = FineLattice("0.1", 200)
    x = make_trig_function([1.0, np.sqrt(2)], [1.0, 0.5], G)
    cases.append(Case("trig-R", _one(G, SupGauge(G, window=4), "SampledFunction", True, "trig-R"),
                      "sup", x, 200, [0.1, 0.3, 1.0], "two-frequency function on the fine lattice"))
    G = LatticeWindow(1, 1000)
    x = make_trig_function([GOLDEN, 0.5], [1.0, 0.5], G)
    cases.append(Case("stepanov-Z", _one(G, StepanovGauge(G, K=4, p=2, window=40), "SampledFunction", True,
                                         "stepanov-Z"),
                      "stepanov", x, 1000, [0.5, 2.5], "Stepanov K=4, p=2"))
    G = FineLattice("0.1", 20)
    x = make_comb(G, 10)
    cases.append(Case("comb-R-norm", _one(G, MeasureNormGauge(G, K=2, window=5), "PointMeasure", True,
                                          "comb-R-norm"),
                      "measure_norm", x, 20, [0.1, 0.5], "integer comb on hZ, norm gauge"))
    G = FineLattice("0.1", 20)
    x = make_comb(G, 10)
    hats = [Hat(0, "0.5"), Hat("0.3", 1)]
    cases.append(Case("comb-R-product", _one(G, ProductGauge(G, hats, window=5), "PointMeasure", False,
                                             "comb-R-product"),
                      "product", x, 20, [0.1, 0.5], "integer comb on hZ, product gauge"))
    G = LatticeWindow(1, 200)
    x = make_sturmian_set(GOLDEN, 0.0, G)
    cases.append(Case("sturmian-Z", _one(G, AutocorrelationGauge(G, n=[25, 50, 100]), "PointSet", True,
                                         "sturmian-Z"),
                      "autocorrelation", x, 200, [0.5, 2.5], "golden Sturmian set, autocorrelation gauge"))
    G = LatticeWindow(1, 300)
    x = counterexample_measure(MAX_TERMS, group=G)
    cases.append(Case("counterexample-vague", counterexample_instance(G), "vague", x, 300, [0.5],
                      "counterexample measure, vague gauge"))
    G = FiniteCyclic(12)
    vals = np.cos(2 * np.pi * np.arange(12) / 4) + 0.25 * np.cos(2 * np.pi * np.arange(12) / 6)
    x = SampledFunction.from_values(G, vals)
    cases.append(Case("periodic-Zn", _one(G, SupGauge(G), "SampledFunction", True, "periodic-Zn"),
                      "sup", x, None, [0.5, 2.5], "12-periodic function on Z/12"))
    return cases


def counterexample_instance(G: Group, radii=(5, 25)) -> Instance:
    """Vague gauge with unit hats of the given radii at 0, plus the translation-boundedness probe."""
    hats = [Hat(0, r) for r in radii]
    return Instance(G, [VagueGauge(G, hats)], "PointMeasure", complete=True, name="counterexample",
                    compactness_probe=translation_bounded_probe(K=1),
                    notes="completeness declared for the vague topology")


# ---------------------------------------------------------------------------
# config front end
# ---------------------------------------------------------------------------

def build_from_config(cfg: dict):
    """(instance, gauge name, point) from a run-config dictionary."""
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    G = parse_group(cfg.get("group", {}), cap=int(cfg.get("cap", 10**7)))
    icfg = cfg.get("instance")
    if not isinstance(icfg, dict) or "kind" not in icfg:
        raise UsageError("config needs an 'instance' block with a 'kind'")
    kind = icfg["kind"]
    complete = bool(cfg.get("complete", icfg.get("complete", False)))
    probe = None
    if kind == "trig":
        x = make_trig_function(icfg.get("frequencies", []), icfg.get("amplitudes", []), G)
        point_kind = "SampledFunction"
    elif kind == "function":
        vals = icfg.get("values")
        if vals is None:
            raise UsageError("function instance needs 'values'")
        x = SampledFunction.from_values(G, vals, lo=icfg.get("lo"))
        point_kind = "SampledFunction"
    elif kind == "sturmian":
        x = make_sturmian_set(float(icfg.get("slope", GOLDEN)), float(icfg.get("intercept", 0.0)), G)
        point_kind = "PointSet"
    elif kind == "pointset":
        x = PointSet.from_elements(G, icfg.get("elements", []))
        point_kind = "PointSet"
    elif kind == "measure":
        x = PointMeasure.from_support(G, icfg.get("support", []), icfg.get("weights", []))
        point_kind = "PointMeasure"
    elif kind == "comb":
        x = make_comb(G, int(icfg.get("period", 1)), icfg.get("weight", 1), int(icfg.get("phase", 0)))
        point_kind = "PointMeasure"
    elif kind == "counterexample":
        x = counterexample_measure(int(icfg.get("n_max", 4)), group=G)
        point_kind = "PointMeasure"
        probe = translation_bounded_probe(K=int(icfg.get("probe_K", 1)))
    else:
        raise UsageError(f"unknown instance kind {kind!r}")
    gcfg = cfg.get("gauge")
    if not isinstance(gcfg, dict):
        raise UsageError("config needs a 'gauge' block")
    gauge = make_gauge(G, gcfg)
    if gauge.point_type.point_kind != point_kind:
        raise UsageError(f"gauge {gauge.name!r} does not apply to {point_kind} points")
    inst = Instance(G, [gauge], point_kind, complete=complete, name=icfg.get("name", kind),
                    compactness_probe=probe)
    return inst, gauge.name, x


__all__ = [
    "Case", "IntervalRow", "GOLDEN", "build_from_config", "counterexample_instance",
    "counterexample_measure", "counterexample_weight", "interval_checks", "atom_count_bound", "local_mass",
    "growth_row", "make_comb", "make_sturmian_set", "make_trig_function", "progression_listing",
    "shipped_cases",
    "support_containment_claim", "terms_needed", "translation_bound_sequence",
    "translation_bounded_probe",
]
