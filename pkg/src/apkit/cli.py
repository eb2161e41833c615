"""Command-line front end.

    apkit analyze --config run.json --out results/
    apkit net --config run.json --eps 0.5,0.25
    apkit hull --config zn.json
    apkit counterexample --n-max 3 --window 700
    apkit oracle-suite --seed 0 --count 200

Reports are JSON (top-level ``"schema": "apkit/1"``) plus CSV series for
almost-period sets.  Exit codes: 0 success, 1 a check in the report failed
(counterexample / oracle-suite only), 2 invalid input, 3 resource limit.
Errors are also written to stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, load_config, parse_eps
from .constructions import build_hull_group, group_table_axioms
from .detectors import classify, greedy_eps_net, report_rows, reports_csv
from .errors import ApkitError, DataError, ResourceError, UsageError
from .group import CYCLIC
from .instances import (MAX_TERMS, build_from_config, counterexample_measure, interval_checks,
                        growth_row, progression_listing)
from .oracle import fixture_instance, oracle_classify, random_fixture
from .space import FAIL, PASS

SCHEMA = "apkit/1"
EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _write(out: Path, name: str, text: str) -> str:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return str(path)


def _load(args) -> RunConfig:
    if not args.config:
        raise UsageError("--config is required for this command")
    cfg = load_config(args.config)
    if args.window is not None:
        cfg.window = args.window
    if args.eps is not None:
        cfg.eps = parse_eps(args.eps)
    cfg.exact = cfg.exact or args.exact
    return cfg


def _build(cfg: RunConfig):
    try:
        inst, gauge, x = build_from_config(cfg.build_dict())
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ApkitError):
            raise
        raise UsageError(f"invalid config: {exc}") from exc
    if cfg.exact and inst.group.kind != CYCLIC:
        raise UsageError("exact mode needs a finite cyclic group (kind 'Zn')")
    return inst, gauge, x


def _out_dir(args, cfg: RunConfig | None = None) -> Path:
    if args.out:
        return Path(args.out)
    if cfg is not None and cfg.out:
        return Path(cfg.out)
    return Path("apkit-out")


def _header(command: str, cfg: RunConfig | None = None) -> dict:
    head = {"schema": SCHEMA, "command": command, "version": __version__}
    if cfg is not None:
        head["config"] = cfg.to_dict()
    return head


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    cfg = _load(args)
    inst, gauge, x = _build(cfg)
    cl = classify(inst, gauge, x, eps_grid=cfg.eps, R=cfg.R)
    doc = _header("analyze", cfg)
    doc["group"] = inst.group.to_dict()
    doc["gauge"] = inst.resolve(gauge).to_dict()
    doc["classification"] = cl.to_dict()
    doc["reports"] = []
    for rep in cl.reports:
        d = rep.to_dict()
        d["periodCount"] = len(d.pop("periods"))
        doc["reports"].append(d)
    out = _out_dir(args, cfg)
    files = [_write(out, "classification.json", dumps(doc)),
             _write(out, "periods.csv", reports_csv(cl.reports))]
    print(dumps({"schema": SCHEMA, "command": "analyze", "verdicts": dict(zip(
        ("bohr", "pseudoBochner", "bochner"), cl.verdicts)), "flags": cl.flags, "files": files}), end="")
    return EXIT_OK


def cmd_net(args) -> int:
    cfg = _load(args)
    inst, gauge, x = _build(cfg)
    eps = cfg.eps
    if eps is None:
        from .detectors import default_eps_grid, profile
        eps = default_eps_grid(profile(inst, gauge, x))
    doc = _header("net", cfg)
    nets = []
    for e in eps:
        net = greedy_eps_net(inst, gauge, x, e)
        d = net.to_dict()
        d["flags"] = [] if inst.group.kind == CYCLIC else ["WINDOWED"]
        nets.append(d)
    doc["nets"] = nets
    out = _out_dir(args, cfg)
    path = _write(out, "nets.json", dumps(doc))
    print(dumps({"schema": SCHEMA, "command": "net", "sizes": [n["size"] for n in nets], "files": [path]}),
          end="")
    return EXIT_OK


def cmd_hull(args) -> int:
    cfg = _load(args)
    cfg.exact = True
    inst, gauge, x = _build(cfg)
    hull = build_hull_group(inst, gauge, x)
    doc = _header("hull", cfg)
    doc["hull"] = hull.to_dict()
    doc["axioms"] = group_table_axioms(hull.add_table)
    out = _out_dir(args, cfg)
    path = _write(out, "hull.json", dumps(doc))
    print(dumps({"schema": SCHEMA, "command": "hull", "order": hull.order, "files": [path]}), end="")
    return EXIT_OK


def cmd_counterexample(args) -> int:
    n_max = args.n_max
    if n_max < 0:
        raise UsageError("--n-max must be >= 0")
    if n_max > MAX_TERMS:
        raise ResourceError(f"--n-max above {MAX_TERMS} overflows 64-bit integers")
    window = int(args.window) if args.window is not None else 700
    if window < 0:
        raise UsageError("--window must be >= 0")
    mu = counterexample_measure(n_max)
    intervals = [r.to_dict() for N in range(1, n_max + 1) for r in interval_checks(N, window)]
    listing, reports = [], []
    for N in range(1, n_max + 1):
        row = progression_listing(mu, N, window)
        rep = row.pop("_report", None)
        if rep is not None:
            reports.append((N, rep))
        listing.append(row)
    growth = [growth_row(mu, N) for N in range(1, n_max + 1)]
    ok = all(r["verdict"] == PASS for r in intervals + listing + growth)
    doc = _header("counterexample")
    doc.update({"nMax": n_max, "window": window, "intervals": intervals, "listing": listing, "growth": growth,
                "verdict": PASS if ok else FAIL})
    out = _out_dir(args)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "eps", "t", "gauge_value"])
    for N, rep in reports:
        w.writerows((N, *row) for row in report_rows(rep))
    files = [_write(out, "counterexample.json", dumps(doc)),
             _write(out, "counterexample_periods.csv", buf.getvalue())]
    print(dumps({"schema": SCHEMA, "command": "counterexample", "verdict": doc["verdict"], "files": files}),
          end="")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_oracle_suite(args) -> int:
    seed = 0 if args.seed is None else args.seed
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    rng = np.random.default_rng(seed)
    eps_grid = [Fraction(1, 2), Fraction(1, 4)] if args.eps is None else parse_eps(args.eps)
    mismatches, agree = [], 0
    for k in range(args.count):
        fix = random_fixture(rng)
        inst, pts = fixture_instance(fix)
        x = int(rng.integers(fix.size))
        det = classify(inst, "table", pts[x], eps_grid=eps_grid)
        ora = oracle_classify(fix, x, eps_grid)
        if det.verdicts == ora.verdicts:
            agree += 1
        else:
            mismatches.append({"index": k, "point": x, "detector": list(det.verdicts),
                               "oracle": list(ora.verdicts), "fixture": fix.to_dict()})
    doc = _header("oracle-suite")
    doc.update({"seed": seed, "count": args.count, "epsGrid": [str(e) for e in eps_grid],
                "agree": agree, "mismatches": mismatches,
                "verdict": PASS if not mismatches else FAIL})
    path = _write(_out_dir(args), "oracle_suite.json", dumps(doc))
    print(dumps({"schema": SCHEMA, "command": "oracle-suite", "agree": agree, "count": args.count,
                 "files": [path]}), end="")
    return EXIT_OK if not mismatches else EXIT_CHECK_FAILED


COMMANDS = {"analyze": cmd_analyze, "net": cmd_net, "hull": cmd_hull,
            "counterexample": cmd_counterexample, "oracle-suite": cmd_oracle_suite}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="run configuration (JSON)")
    common.add_argument("--eps", metavar="LIST", help="comma-separated eps grid, e.g. 1/2,0.25")
    common.add_argument("--window", metavar="N", help="window radius (overrides the config)")
    common.add_argument("--out", metavar="DIR", help="output directory (default apkit-out)")
    common.add_argument("--exact", action="store_true", help="require exact finite mode")
    common.add_argument("--seed", type=int, metavar="N", help="random seed")

    p = argparse.ArgumentParser(prog="apkit", description="Almost periodicity detectors for gauge spaces.")
    p.add_argument("--version", action="version", version=f"apkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="classify a configured point")
    sub.add_parser("net", parents=[common], help="greedy eps-nets of the orbit")
    sub.add_parser("hull", parents=[common], help="hull group on a finite cyclic group")
    ce = sub.add_parser("counterexample", parents=[common], help="verify the five-adic counterexample")
    ce.add_argument("--n-max", type=int, default=3, help="levels N = 1..n_max (default 3)")
    os_ = sub.add_parser("oracle-suite", parents=[common], help="detectors vs exhaustive oracle")
    os_.add_argument("--count", type=int, default=200, help="number of random fixtures")
    return p


def _diagnose(exc: BaseException, code: int) -> int:
    diag = {"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc), "exitCode": code}
    for key in ("flag", "lo", "hi"):
        if hasattr(exc, key):
            diag[key] = getattr(exc, key)
    sys.stderr.write(json.dumps(diag, sort_keys=True, default=_default) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return 0
        return _diagnose(UsageError("invalid command line"), EXIT_USAGE)
    try:
        return COMMANDS[args.command](args)
    except ResourceError as exc:
        return _diagnose(exc, EXIT_RESOURCE)
    except (UsageError, DataError) as exc:
        return _diagnose(exc, EXIT_USAGE)
    except MemoryError as exc:
        return _diagnose(exc, EXIT_RESOURCE)


if __name__ == "__main__":
    sys.exit(main())
