"""Command-line front end: single-walk reports, batches, the acceptance run, the catalog.

Exit codes: 0 success, 1 failed acceptance criteria, 2 unreadable, degenerate or
singular input, 3 verdicts that contradict each other.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from . import catalog as cat
from .errors import (
    DegenerateCorrelation,
    DegenerateVariance,
    InconsistentVerdicts,
    InvalidWeights,
    OrbitEscape,
    ParseError,
    QuadratureFailure,
    SingularWalk,
    WalkGroupError,
    WrongGenus,
)
from .finiteness_criterion import DEFAULT_MAX_DENOMINATOR, GroupOrderResult, Verdict, decide, lambda_form
from .genus0_analysis import limit_periods
from .genus1_analysis import periods
from .group_orbit_oracle import DEFAULT_MAX_ITER, delta_order, numeric_orbit
from .kernel_algebra import GenusClass, build_kernel, genus_classify, is_singular
from .walk_model import SYMMETRIES, StepWeights, angle_theta, delta_determinant, moments

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2, 3
NUMERIC_MAX_ITER = 500
PERIOD_TOL = 1e-8


def _num(v) -> str:
    return str(v) if not hasattr(v, "context") else v.context.nstr(v, 30)


def _skipped(reason: str) -> dict:
    return {"skipped": reason}


@dataclass
class AnalysisReport:
    name: str
    weights: dict
    moments: dict
    delta: str
    genus: str
    theta: Optional[float]
    theta_over_pi: Optional[float]
    cos_theta_class: Optional[str]
    lambda_: Optional[float]
    verdicts: dict
    periods: dict
    consistency: dict
    timing: dict
    schema: int = SCHEMA

    @property
    def inconsistent(self) -> list:
        return [k for k, v in self.consistency.items() if v is False]

    @property
    def verdict(self) -> str:
        v = self.verdicts["criterion"]
        return GroupOrderResult.from_jsonable(v).label()

    def to_jsonable(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lambda_")
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), indent=2, sort_keys=True)

    @classmethod
    def from_jsonable(cls, data: dict) -> AnalysisReport:
        data = dict(data)
        if data.get("schema") != SCHEMA:
            raise ParseError(f"unsupported report schema {data.get('schema')!r}")
        data["lambda_"] = data.pop("lambda")
        return cls(**data)

    def flat(self) -> dict:
        row = {
            "name": self.name,
            "hash": walk_hash(self.weights),
            "genus": self.genus,
            "theta_over_pi": "" if self.theta_over_pi is None else repr(self.theta_over_pi),
        }
        for key, v in self.verdicts.items():
            row[key] = v.get("skipped") and "skipped" or _verdict_text(v)
        row["agreement"] = not self.inconsistent
        return row


def _verdict_text(v: dict) -> str:
    if "verdict" in v:
        return GroupOrderResult.from_jsonable(v).label()
    if v.get("returned"):
        return f"period {v['period']}"
    return "no return" + (" (fixed point)" if v.get("settled") else f" in {v.get('iterations')}")


def walk_hash(weights_json: dict) -> str:
    return hashlib.sha1(json.dumps(weights_json, sort_keys=True).encode()).hexdigest()[:12]


def _timed(timing: dict, key: str, fn):
    t0 = time.perf_counter()
    try:
        return fn()
    finally:
        timing[key] = round(time.perf_counter() - t0, 6)


def _consistency(crit: GroupOrderResult, oracle: Optional[GroupOrderResult], orbit: Optional[dict],
                 max_iter: int, ratio: Optional[float], theta_over_pi: Optional[float]) -> dict:
    flags: dict = {"criterion_vs_oracle": None, "criterion_vs_numeric": None, "periods_vs_theta": None}
    if oracle is not None:
        if oracle.verdict is Verdict.FINITE:
            flags["criterion_vs_oracle"] = crit.label() == oracle.label()
        elif crit.verdict is Verdict.FINITE and crit.order // 2 <= (oracle.bound or 0):
            flags["criterion_vs_oracle"] = False
    if orbit is not None and crit.verdict is not Verdict.UNDECIDED:
        if orbit["returned"]:
            flags["criterion_vs_numeric"] = crit.verdict is Verdict.FINITE and crit.order == 2 * orbit["period"]
        elif crit.verdict is Verdict.FINITE:
            flags["criterion_vs_numeric"] = False if crit.order // 2 <= max_iter else None
        else:
            flags["criterion_vs_numeric"] = True
    if ratio is not None and theta_over_pi is not None:
        flags["periods_vs_theta"] = abs(ratio - theta_over_pi) <= PERIOD_TOL
    return flags


def analyze(w: StepWeights, name: str = "input", bound: Optional[int] = None, tol: float = 1e-9,
            fast: bool = False) -> AnalysisReport:
    """Full report for one walk; raises SingularWalk or a degeneracy error on bad input."""
    timing: dict = {}
    t_start = time.perf_counter()
    k = build_kernel(w)
    sing = is_singular(k)
    if sing:
        raise SingularWalk(sing.reason)
    m = moments(w)
    g = genus_classify(w, k)
    mom = {key: _num(getattr(m, key)) for key in ("drift_x", "drift_y", "var_x", "var_y", "mixed")}
    mom["R"] = _num(m.R)
    theta = top = lam = None
    cls_text = None
    if g is GenusClass.Genus0ZeroDrift:
        t = angle_theta(m)
        theta, top = t.theta, float(t.over_pi)
        cls_text = type(t.exact_class).__name__
        lam = float(lambda_form(w, k).value)
    max_den = bound or DEFAULT_MAX_DENOMINATOR
    crit = _timed(timing, "criterion", lambda: decide(w, max_denominator=max_den))
    verdicts = {"criterion": crit.to_jsonable()}
    oracle = None
    if w.exact:
        oracle = _timed(timing, "oracle", lambda: delta_order(w, max_iter=bound or DEFAULT_MAX_ITER))
        verdicts["oracle"] = oracle.to_jsonable()
    else:
        verdicts["oracle"] = _skipped("the exact oracle needs rational weights")
    orbit_iter = bound or NUMERIC_MAX_ITER
    orbit = None
    try:
        no = _timed(timing, "numeric_orbit", lambda: numeric_orbit(w, max_iter=orbit_iter, tol=tol))
        orbit = {"returned": no.returned, "period": no.period, "iterations": no.iterations, "settled": no.settled}
        verdicts["numeric_orbit"] = orbit
    except (OrbitEscape, ValueError) as exc:
        verdicts["numeric_orbit"] = _skipped(str(exc))
    ratio = None
    if fast:
        per = _skipped("skipped by --fast")
    elif g is GenusClass.Genus0ZeroDrift:
        lp = _timed(timing, "periods", lambda: limit_periods(k))
        ratio = lp.ratio
        per = {"kind": "limit", "alpha2": lp.alpha2, "alpha3": lp.alpha3, "ratio": ratio}
    elif g is GenusClass.Genus1:
        try:
            p = _timed(timing, "periods", lambda: periods(k))
            per = {"kind": "elliptic", "omega1_imag": p.omega1.imag, "omega2": p.omega2, "omega3": p.omega3,
                   "ratio": p.ratio}
        except (WrongGenus, QuadratureFailure) as exc:
            per = _skipped(str(exc))
    else:
        per = _skipped("genus 0 with nonzero drift has no period ratio")
    flags = _consistency(crit, oracle, orbit, orbit_iter, ratio, top)
    timing["total"] = round(time.perf_counter() - t_start, 6)
    return AnalysisReport(
        name, w.to_jsonable(), mom, _num(delta_determinant(w).value), g.value, theta, top, cls_text, lam,
        verdicts, per, flags, timing,
    )


# -- batch ---------------------------------------------------------------------------

BATCH_FIELDS = ["name", "hash", "genus", "theta_over_pi", "criterion", "oracle", "numeric_orbit", "agreement", "error"]


def _batch_row(job) -> dict:
    name, data, bound, tol = job
    try:
        w = StepWeights.from_jsonable(data)
        row = analyze(w, name, bound, tol, fast=True).flat()
        row["error"] = ""
    except WalkGroupError as exc:
        row = {"name": name, "hash": walk_hash(data), "error": f"{type(exc).__name__}: {exc}"}
    return {key: row.get(key, "") for key in BATCH_FIELDS}


def batch(walks: list[tuple[str, StepWeights | dict]], bound: Optional[int] = None, tol: float = 1e-9,
          workers: Optional[int] = None) -> list[dict]:
    """One row per walk, in input order; rows are computed in parallel processes."""
    jobs = [(n, w.to_jsonable() if isinstance(w, StepWeights) else w, bound, tol) for n, w in walks]
    if not jobs:
        return []
    workers = workers or min(len(jobs), os.cpu_count() or 1)
    if workers == 1:
        return [_batch_row(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_batch_row, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def write_rows(rows: list[dict], fh) -> None:
    out = csv.DictWriter(fh, fieldnames=BATCH_FIELDS, lineterminator="\n")
    out.writeheader()
    for r in rows:
        out.writerow(r)


# -- argument handling -------------------------------------------------------------

def _load_weights(args) -> tuple[str, StepWeights]:
    if args.weights:
        try:
            text = Path(args.weights).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {args.weights}: {exc}") from exc
        return Path(args.weights).stem, StepWeights.from_json(text)
    if args.catalog:
        try:
            return args.catalog, cat.get(args.catalog, args.n).weights
        except KeyError as exc:
            raise ParseError(str(exc.args[0])) from exc
    raise ParseError("give --weights FILE or --catalog NAME")


def _cmd_analyze(args) -> int:
    name, w = _load_weights(args)
    rep = analyze(w, name, args.bound, args.tol, args.fast)
    if args.json:
        print(rep.to_json())
    else:
        print(f"{name}: {rep.verdict} via {rep.verdicts['criterion']['proof_path']}")
        print(f"  genus class   {rep.genus}")
        if rep.theta is not None:
            print(f"  theta/pi      {rep.theta_over_pi!r}  (cos class {rep.cos_theta_class})")
            print(f"  Lambda        {rep.lambda_!r}")
        print(f"  determinant   {rep.delta}")
        for key, v in rep.verdicts.items():
            print(f"  {key:<13} {v['skipped'] if 'skipped' in v else _verdict_text(v)}")
        if "ratio" in rep.periods:
            print(f"  period ratio  {rep.periods['ratio']!r}")
        for key, v in rep.consistency.items():
            print(f"  {key:<21} {'n/a' if v is None else ('ok' if v else 'MISMATCH')}")
        print(f"  time          {rep.timing['total']:.3f} s")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            out = csv.DictWriter(fh, fieldnames=list(rep.flat()), lineterminator="\n")
            out.writeheader()
            out.writerow(rep.flat())
    if rep.inconsistent:
        raise InconsistentVerdicts(f"verdicts disagree: {', '.join(rep.inconsistent)}")
    return EXIT_OK


def _cmd_batch(args) -> int:
    walks: list = []
    if args.dir:
        for p in sorted(Path(args.dir).glob("*.json")):
            try:
                walks.append((p.stem, json.loads(p.read_text())))
            except json.JSONDecodeError:
                walks.append((p.stem, {}))
    elif args.random:
        gen = cat.random_walks(args.seed, args.random, kind=args.kind)
        walks = [(f"{args.kind}-{args.seed}-{i}", w) for i, w in enumerate(gen)]
    elif args.catalog:
        w = cat.get(args.catalog, args.n).weights
        walks = [(f"{args.catalog}:{s}", w.transform(s)) for s in SYMMETRIES] if args.symmetries else [(args.catalog, w)]
    rows = batch(walks, args.bound, args.tol, args.workers)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            write_rows(rows, fh)
    else:
        buf = io.StringIO()
        write_rows(rows, buf)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def _parse_expect(items) -> dict:
    out = {}
    for item in items or []:
        name, _, val = item.partition("=")
        if not val:
            raise ParseError(f"expected NAME=ORDER, got {item!r}")
        out[name] = None if val in ("inf", "infinite") else int(val)
    return out


def _cmd_verify(args) -> int:
    from .acceptance import run_acceptance

    results = run_acceptance(fast=args.fast, overrides=_parse_expect(args.expect),
                             report=lambda r: print(r.line(), flush=True))
    counts = {k: sum(r.status == k for r in results) for k in ("PASS", "FAIL", "SKIP")}
    print(f"{counts['PASS']} passed, {counts['FAIL']} failed, {counts['SKIP']} skipped")
    failed = counts["FAIL"]
    return EXIT_FAIL if failed else EXIT_OK


def _cmd_catalog(args) -> int:
    entries = cat.entries(args.n)
    if args.json:
        print(json.dumps({n: {"weights": e.weights.to_jsonable(), "expected": e.expected_label, "note": e.note,
                              "genus": e.genus.value} for n, e in entries.items()}, indent=2))
    else:
        for n, e in entries.items():
            print(f"{n:<14} {e.expected_label:<16} {e.genus.value:<16} {e.note}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="walkgroup", description="Group of a small-step quarter-plane walk.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--weights", metavar="FILE", help="JSON weight file")
        p.add_argument("--catalog", metavar="NAME", help="named walk from the catalog")
        p.add_argument("--n", type=int, default=5, help="member of the krsp4 family (default 5)")
        p.add_argument("--bound", type=int, help="iteration cap for the orbits and denominator cap")
        p.add_argument("--tol", type=float, default=1e-9, help="numeric orbit return tolerance")
        p.add_argument("--csv", metavar="FILE", help="write CSV output to FILE")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--fast", action="store_true", help="skip period quadratures")

    p = sub.add_parser("analyze", help="report on one walk")
    common(p)
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("batch", help="CSV table over many walks")
    common(p)
    p.add_argument("--dir", metavar="DIR", help="directory of JSON weight files")
    p.add_argument("--random", type=int, metavar="COUNT", help="number of seeded random walks")
    p.add_argument("--kind", choices=("zero-drift", "delta0"), default="zero-drift")
    p.add_argument("--symmetries", action="store_true", help="with --catalog: the eight symmetric images")
    p.add_argument("--workers", type=int, help="worker processes (default: CPU count)")
    p.set_defaults(func=_cmd_batch)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--fast", action="store_true", help="skip quadrature-heavy criteria")
    p.add_argument("--expect", action="append", metavar="NAME=ORDER",
                   help="override an expected catalog order (ORDER may be 'inf')")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("catalog", help="list the named walks")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_catalog)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InconsistentVerdicts as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (ParseError, InvalidWeights, SingularWalk, DegenerateVariance, DegenerateCorrelation) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
