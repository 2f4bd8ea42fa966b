"""Command-line front end: ``betagamma {tail, sweep, verify-chain}``.

Exit codes: 0 success, 1 a chain bound failed, 2 invalid flags,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .asymptotics import DEFAULT_R, DEFAULT_W_GRID, chain_evaluate, log_tail_claim1
from .distributions import BetaParams
from .exact_tail import TailQuery, log_tail_exact
from .montecarlo import McConfig, McEstimate, mc_conditional, mc_naive
from .quadrature import QuadConfig
from .specfun import ConvergenceError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
LOG_LINEAR_FLOOR = math.log(1e-300)
SWEEP_HEADER = ("a", "b", "c", "p", "t", "w", "log_exact", "log_claim1", "log_ratio",
                "mc_log_mean", "mc_stderr_rel", "n", "seed")
METHODS = ("exact", "claim1", "mc-naive", "mc-cond", "all")


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """12 significant digits; ints verbatim; None as the empty string."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def linear(log_value: float) -> tuple[float, int]:
    """(probability, log_only flag): 0 and 1 once the value is below 1e-300."""
    if log_value >= LOG_LINEAR_FLOOR:
        return math.exp(log_value), 0
    return 0.0, 1


def parse_grid(text: str, name: str) -> list[float]:
    """``v1,v2,...`` or ``lo:hi:count`` (geometric, endpoints included)."""
    try:
        if ":" in text:
            lo, hi, count = text.split(":")
            lo, hi, k = float(lo), float(hi), int(count)
            if not (0 < lo <= hi and math.isfinite(hi) and k >= 1):
                raise ValueError
            values = [lo] if k == 1 else list(np.geomspace(lo, hi, k))
        else:
            values = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--{name}: expected a comma list or lo:hi:count, got {text!r}") from None
    if not values or not all(math.isfinite(v) and v >= 0 for v in values):
        raise UsageError(f"--{name}: values must be finite and nonnegative")
    return values


def _rel_tol(args) -> QuadConfig:
    try:
        return QuadConfig(rel_tol=args.rel_tol)
    except ValueError as exc:
        raise UsageError(f"--rel-tol: {exc}") from None


def _query(args, t: float) -> TailQuery:
    try:
        return TailQuery.from_values(args.a, args.b, args.c, args.p, t)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _mc_config(args) -> McConfig:
    try:
        return McConfig(n=args.n, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# tail

TAIL_HEADER = ("method", "log_value", "value", "log_only", "stderr_rel", "hits",
               "undersampled", "n", "seed")


def cmd_tail(args, out) -> int:
    cfg = _rel_tol(args)
    query = _query(args, args.t)
    methods = ("exact", "claim1", "mc-naive", "mc-cond") if args.method == "all" else (args.method,)
    explicit = args.method != "all"
    rows = []
    for method in methods:
        est: McEstimate | None = None
        if method == "exact":
            value = log_tail_exact(query, cfg)
        elif method == "claim1":
            if query.t == 0:
                if explicit:
                    raise UsageError("claim1 needs t > 0")
                continue
            value = log_tail_claim1(query)
        else:
            mc = _mc_config(args)
            if method == "mc-naive":
                est = mc_naive(query, mc)
            else:
                if query.t == 0:
                    if explicit:
                        raise UsageError("mc-cond needs t > 0")
                    continue
                try:
                    est = mc_conditional(query, mc)
                except ValueError as exc:
                    if explicit:
                        raise UsageError(str(exc)) from None
                    print(f"note: mc-cond skipped: {exc}", file=sys.stderr)
                    continue
            value = est.log_mean
        prob, log_only = linear(value)
        row = [method, fmt(value), fmt(prob), fmt(log_only)]
        if est is None:
            row += ["", "", "", "", ""]
        else:
            row += [fmt(est.stderr_rel), fmt(est.hits), fmt(est.undersampled), fmt(est.n), fmt(est.seed)]
        rows.append(row)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TAIL_HEADER)
    writer.writerows(rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep

@dataclass(frozen=True)
class SweepRow:
    a: float
    b: float
    c: float
    p: float
    t: float
    w: float
    log_exact: float
    log_claim1: float | None
    log_ratio: float | None
    mc_log_mean: float | None = None
    mc_stderr_rel: float | None = None
    n: int | None = None
    seed: int | None = None

    def cells(self) -> list[str]:
        return [fmt(getattr(self, f.name)) for f in fields(self)]


def sweep_row(query: TailQuery, cfg: QuadConfig, mc: McConfig | None = None,
              mc_method: str = "cond") -> SweepRow:
    log_exact = log_tail_exact(query, cfg)
    log_claim1 = log_tail_claim1(query) if query.t > 0 else None
    ratio = None
    if log_claim1 is not None and math.isfinite(log_exact) and math.isfinite(log_claim1):
        ratio = log_exact - log_claim1
    extra = {}
    # the overshoot sampler needs r < w + 1; rows outside that keep empty MC cells
    if mc is not None and query.t > 0 and (mc_method == "naive" or query.gga.r < query.w + 1.0):
        est = (mc_conditional if mc_method == "cond" else mc_naive)(query, mc)
        extra = dict(mc_log_mean=est.log_mean, mc_stderr_rel=est.stderr_rel, n=est.n, seed=est.seed)
    return SweepRow(query.beta.a, query.beta.b, query.gga.c, query.gga.p, query.t, query.w,
                    log_exact, log_claim1, ratio, **extra)


def write_sweep(rows, out):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow(row.cells())


def cmd_sweep(args, out) -> int:
    cfg = _rel_tol(args)
    grid = parse_grid(args.t_grid, "t-grid")
    queries = [_query(args, t) for t in grid]
    mc = _mc_config(args) if args.n is not None else None
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")

    def one(q):
        return sweep_row(q, cfg, mc, args.mc_method)

    if args.jobs == 1:
        rows = [one(q) for q in queries]
    else:
        with ThreadPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(one, queries))  # map keeps grid order
    if args.out:
        buf = io.StringIO()
        write_sweep(rows, buf)
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        write_sweep(rows, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify-chain

CHAIN_HEADER = ("w", "log_t1", "log_t2", "log_t3", "log_t4", "gap_12", "gap_23", "gap_34",
                "bound_12", "bound_23", "bound_34", "check_12", "check_23", "check_34")


def cmd_verify_chain(args, out) -> int:
    cfg = _rel_tol(args)
    if args.c is not None and args.r is not None:
        raise UsageError("give at most one of --c and --r")
    try:
        beta = BetaParams(args.a, args.b)
        if not (math.isfinite(args.p) and args.p > 0):
            raise ValueError("p must be positive and finite")
        r = args.c / args.p if args.c is not None else (args.r if args.r is not None else DEFAULT_R)
        if not (math.isfinite(r) and r > 0):
            raise ValueError("r must be positive and finite")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    grid = parse_grid(args.w_grid, "w-grid") if args.w_grid else list(DEFAULT_W_GRID)
    if min(grid) < max(4.0, 2.0 * r):
        raise UsageError(f"--w-grid values must be at least max(4, 2r) = {max(4.0, 2.0 * r):g}")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CHAIN_HEADER)
    all_pass = True
    for w in grid:
        rep = chain_evaluate(beta, args.p, w, cfg, r=r)
        checks = rep.passes()
        all_pass &= all(checks)
        writer.writerow([fmt(v) for v in (
            rep.w, rep.log_t1, rep.log_t2, rep.log_t3, rep.log_t4,
            rep.gap_12, rep.gap_23, rep.gap_34, rep.bound_12, rep.bound_23, rep.bound_34,
        )] + ["PASS" if ok else "FAIL" for ok in checks])
    return EXIT_OK if all_pass else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="betagamma",
                                     description="Tail probabilities of B*Z, B ~ Beta(a,b), Z ~ GGa(c,p).")
    sub = parser.add_subparsers(dest="command", required=True)

    def shape_flags(p, with_c=True):
        p.add_argument("--a", type=float, required=True)
        p.add_argument("--b", type=float, required=True)
        if with_c:
            p.add_argument("--c", type=float, required=True)
        p.add_argument("--p", type=float, required=True)
        p.add_argument("--rel-tol", type=float, default=1e-10)

    tail = sub.add_parser("tail", help="evaluate ln P(BZ > t) at one threshold")
    shape_flags(tail)
    tail.add_argument("--t", type=float, required=True)
    tail.add_argument("--method", choices=METHODS, default="exact")
    tail.add_argument("--n", type=int, default=100_000)
    tail.add_argument("--seed", type=int, default=0)
    tail.set_defaults(func=cmd_tail)

    sweep = sub.add_parser("sweep", help="CSV of exact and asymptotic values over a t grid")
    shape_flags(sweep)
    sweep.add_argument("--t-grid", required=True)
    sweep.add_argument("--n", type=int, default=None, help="add a Monte Carlo column with n samples")
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--mc-method", choices=("cond", "naive"), default="cond")
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument("--out", default=None)
    sweep.set_defaults(func=cmd_sweep)

    chain = sub.add_parser("verify-chain", help="check the approximation chain against its bounds")
    shape_flags(chain, with_c=False)
    chain.add_argument("--c", type=float, default=None)
    chain.add_argument("--r", type=float, default=None)
    chain.add_argument("--w-grid", default=None)
    chain.set_defaults(func=cmd_verify_chain)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, ValueError) as exc:
        # ValueError here means an input outside a function's domain
        print(f"betagamma {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, FloatingPointError) as exc:
        print(f"betagamma {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
