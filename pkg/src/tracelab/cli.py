"""Command-line front end: reproducible enumeration, statistics, and
arithmeticity experiments with deterministic CSV/JSON/data output."""

from __future__ import annotations

import argparse
import csv
import math
import io
import json
import os
import sys
from typing import Optional

from . import __version__
from .analytics import (cluster_counts, delta_c_cluster_witness, delta_c_set,
                        dn_set, gap, growth_profile, kronecker_gap_demo,
                        rn_set, rn_two_to_one_check, totient_sum_check,
                        totients)
from .arithmeticity import subtraction_closure_check, takeuchi_verdict
from .errors import BudgetExceededError, PreconditionError
from .groups import (DEFAULT_CAP, GroupSpec, catalog, enumerate_ball,
                     load_group_spec, trace_set)
from .qfield import (FieldDesc, RingOfIntegers, format_quadelem,
                     parse_quadelem, ring_of_integers)

BUDGET_ENV = "TRACELAB_BUDGET"


def _dec(x: float) -> str:
    return format(float(x), ".17g")


def _budget_default() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_CAP


def _resolve_group(args) -> GroupSpec:
    if args.spec_file:
        return load_group_spec(args.spec_file)
    return catalog(args.group)


def _ring_from_flag(text: str) -> RingOfIntegers:
    key = text.strip().upper()
    if key in ("Z", "ZZ", "Q"):
        return RingOfIntegers.integers()
    return ring_of_integers(FieldDesc(int(text)))


class Report:
    """One deterministic result: a JSON object plus CSV/data projections."""

    def __init__(self, payload: dict, csv_rows: list[list], data_rows: list[list]):
        self.payload = payload
        self.csv_rows = csv_rows
        self.data_rows = data_rows

    def render(self, fmt: str) -> str:
        if fmt == "json":
            obj = {"version": __version__, **self.payload}
            return json.dumps(obj, indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            for row in self.csv_rows:
                writer.writerow(row)
            return buf.getvalue()
        buf2 = io.StringIO()
        for row in self.data_rows:
            buf2.write(" ".join(str(cell) for cell in row) + "\n")
        return buf2.getvalue()


def _emit(report: Report, args) -> None:
    text = report.render(args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _embedded_rows(values) -> list[list]:
    rows = []
    for v in values:
        z = complex(v.embed())
        rows.append([format_quadelem(v), _dec(z.real), _dec(z.imag)])
    return rows


# -- subcommands -------------------------------------------------------------

def cmd_enumerate(args) -> Report:
    spec = _resolve_group(args)
    ball = enumerate_ball(spec, args.radius, args.cap)
    per_radius = ball.per_radius_counts()
    payload = {
        "command": "enumerate",
        "group": spec.name,
        "field_d": spec.field.d,
        "radius": ball.radius,
        "size": ball.size,
        "complete": ball.complete,
        "per_radius": [{"radius": r, "cumulative": c} for r, c in per_radius],
    }
    csv_rows = [["radius", "cumulative_size"]] + [[r, c] for r, c in per_radius]
    return Report(payload, csv_rows, [[r, c] for r, c in per_radius])


def cmd_traces(args) -> Report:
    spec = _resolve_group(args)
    ball = enumerate_ball(spec, args.radius, args.cap)
    ts = trace_set(ball, reduced=not args.all)
    rows = []
    for t in ts.exact:
        z = complex(t.embed())
        rows.append([format_quadelem(t), _dec(z.real), _dec(z.imag),
                     ts.provenance[t]])
    payload = {
        "command": "traces",
        "group": spec.name,
        "radius": ball.radius,
        "reduced": ts.reduced,
        "size": ts.size,
        "traces": [{"value": r[0], "re": float(r[1]), "im": float(r[2]),
                    "word_length": r[3]} for r in rows],
    }
    return Report(payload, [["trace", "re", "im", "word_length"]] + rows,
                  [[r[1], r[2]] for r in rows])


def cmd_cluster(args) -> Report:
    spec = _resolve_group(args)
    ball = enumerate_ball(spec, args.radius, args.cap)
    ts = trace_set(ball)
    grid = cluster_counts(ts.embedded)
    cells = sorted(grid.counts.items())
    gap_val = gap(ts.embedded) if ts.size >= 2 else None
    ns = list(range(1, args.max_n + 1))
    _, slope = growth_profile(ts.embedded, ns)
    payload = {
        "command": "cluster",
        "group": spec.name,
        "radius": ball.radius,
        "max_count": grid.max_count,
        "cells_touched": grid.cells_touched,
        "mass": grid.mass,
        "gap": gap_val,
        "growth_slope": slope,
    }
    csv_rows = [["cell", "m", "n", "count"]]
    data_rows = []
    for idx, ((m, n), cnt) in enumerate(cells):
        csv_rows.append([idx, m, n, cnt])
        data_rows.append([m, n, cnt])
    return Report(payload, csv_rows, data_rows)


def cmd_gap(args) -> Report:
    spec = _resolve_group(args)
    ball = enumerate_ball(spec, args.radius, args.cap)
    ts = trace_set(ball)
    val = gap(ts.embedded)
    payload = {"command": "gap", "group": spec.name, "radius": ball.radius,
               "n_traces": ts.size, "gap": val}
    return Report(payload, [["radius", "gap"], [ball.radius, _dec(val)]],
                  [[ball.radius, _dec(val)]])


def cmd_growth(args) -> Report:
    spec = _resolve_group(args)
    ball = enumerate_ball(spec, args.radius, args.cap)
    ts = trace_set(ball)
    ns = list(range(1, args.max_n + 1))
    counts, slope = growth_profile(ts.embedded, ns)
    payload = {
        "command": "growth", "group": spec.name, "radius": ball.radius,
        "counts": [{"n": n, "count": c} for n, c in counts],
        "slope": slope,
    }
    rows = [[n, c] for n, c in counts]
    return Report(payload, [["n", "count"]] + rows, rows)


def cmd_arith_check(args) -> Report:
    spec = _resolve_group(args)
    ball = enumerate_ball(spec, args.radius, args.cap)
    report = takeuchi_verdict(ball, pair_budget=args.pair_budget)
    payload = {"command": "arith-check", "group": spec.name,
               "expected_class": spec.expected_class, **report.to_dict()}
    growth = report.conjugate_growth
    rows = [[s, _dec(m)] for s, m in zip(growth.shells, growth.maxima)]
    csv_rows = [["key", "value"],
                ["radius", report.radius],
                ["trace_field_d", report.trace_field_d],
                ["integral", report.integral],
                ["verdict", report.verdict],
                ["conjugate_flag", growth.flag],
                ["elementary", report.elementary]]
    return Report(payload, csv_rows, rows)


def cmd_delta_c(args) -> Report:
    ring = _ring_from_flag(args.ring)
    c = parse_quadelem(args.c, ring.field)
    if args.witness is not None:
        wit = delta_c_cluster_witness(c, ring, args.witness, m1=args.m1)
        rows = _embedded_rows(wit.points)
        payload = {
            "command": "delta-c-witness",
            "c": format_quadelem(c),
            "ring_d": ring.field.d,
            "n": wit.n,
            "f_values": list(wit.f_values),
            "exponents": list(wit.exponents),
            "p": format_quadelem(wit.p),
            "q": format_quadelem(wit.q),
            "points": [r[0] for r in rows],
            "max_deviation": wit.max_deviation(),
        }
        return Report(payload, [["point", "re", "im"]] + rows,
                      [[r[1], r[2]] for r in rows])
    values = delta_c_set(c, ring, args.k_bound, args.n_bound, m1=args.m1)
    grid = cluster_counts([v.embed() for v in values])
    rows = _embedded_rows(values)
    payload = {
        "command": "delta-c",
        "c": format_quadelem(c),
        "ring_d": ring.field.d,
        "k_bound": args.k_bound,
        "n_bound": args.n_bound,
        "size": len(values),
        "max_count": grid.max_count,
        "cells_touched": grid.cells_touched,
    }
    return Report(payload, [["value", "re", "im"]] + rows,
                  [[r[1], r[2]] for r in rows])


def cmd_counting(args) -> Report:
    n = args.N
    if args.kind == "dn":
        ds = dn_set(n)
        payload = {"command": "counting", "kind": "dn", "N": n, "size": ds.size,
                   "lower_bound": n * math.log(n) - n}
        rows = [[k, l] for k, l in ds.tuples]
        return Report(payload, [["k", "l"]] + rows, rows)
    if args.kind == "rn":
        rs = rn_set(n)
        phi = totients(n)
        formula = sum(phi[i] * sum(phi[j] for j in range(1, n // i + 1))
                      for i in range(1, n + 1))
        payload = {"command": "counting", "kind": "rn", "N": n, "size": rs.size,
                   "totient_formula": formula, "ratio_n2": rs.size / (n * n)}
        rows = [list(t) for t in rs.tuples]
        return Report(payload, [["r1", "r2", "r3", "r4"]] + rows, rows)
    if args.kind == "two-to-one":
        rep = rn_two_to_one_check(n)
        payload = {"command": "counting", "kind": "two-to-one", "N": n,
                   "n_tuples": rep.n_tuples, "n_fibers": rep.n_fibers,
                   "max_fiber_size": rep.max_fiber_size,
                   "swap_fibers_ok": rep.swap_fibers_ok,
                   "diagonal_ok": rep.diagonal_ok, "ok": rep.ok}
        rows = [["n_tuples", rep.n_tuples], ["n_fibers", rep.n_fibers],
                ["max_fiber_size", rep.max_fiber_size], ["ok", rep.ok]]
        return Report(payload, [["key", "value"]] + rows, rows)
    rep = totient_sum_check(n)
    payload = {"command": "counting", "kind": "totient", "N": n,
               "sum_phi": rep.sum_phi,
               "ratio_to_asymptotic": rep.ratio_to_asymptotic,
               "pointwise_ok": rep.pointwise_ok,
               "pointwise_checked_from": rep.pointwise_checked_from}
    rows = [["sum_phi", rep.sum_phi],
            ["ratio", _dec(rep.ratio_to_asymptotic)],
            ["pointwise_ok", rep.pointwise_ok]]
    return Report(payload, [["key", "value"]] + rows, rows)


def cmd_kronecker(args) -> Report:
    env = kronecker_gap_demo(args.theta1, args.theta2, args.K, args.delta)
    payload = {
        "command": "kronecker", "theta1": args.theta1, "theta2": args.theta2,
        "K": args.K, "delta": args.delta,
        "final_min": env[-1][1],
        "envelope": [{"K": k, "min": m} for k, m in env],
    }
    rows = [[k, _dec(m)] for k, m in env]
    return Report(payload, [["K", "min"]] + rows, rows)


def cmd_corollary(args) -> Report:
    spec = _resolve_group(args)
    ball = enumerate_ball(spec, args.radius, args.cap)
    ts = trace_set(ball)
    rep = subtraction_closure_check(ts, args.window)
    payload = {
        "command": "corollary", "group": spec.name, "radius": ball.radius,
        "window": str(rep.window), "closed": rep.closed,
        "violations": [[format_quadelem(a), format_quadelem(b), format_quadelem(d)]
                       for a, b, d in rep.violations],
        "has_two": rep.has_two, "has_four": rep.has_four,
        "identities_ok": rep.identities_ok, "pairs_checked": rep.pairs_checked,
    }
    rows = [["closed", rep.closed], ["has_two", rep.has_two],
            ["has_four", rep.has_four], ["identities_ok", rep.identities_ok],
            ["pairs_checked", rep.pairs_checked]]
    return Report(payload, [["key", "value"]] + rows, rows)


# -- argument parsing --------------------------------------------------------

def _add_group_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--group", help="catalog group name, e.g. psl2z, hecke(5)")
    src.add_argument("--spec-file", help="path to a JSON group-spec file")
    p.add_argument("--radius", type=int, required=True, help="word-ball radius")
    p.add_argument("--cap", type=int, default=None,
                   help=f"element budget (default {DEFAULT_CAP}, env {BUDGET_ENV})")


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv", "data"), default="json")
    p.add_argument("--output", help="write to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tracelab",
        description="Exact trace-set experiments for matrix groups over "
                    "quadratic fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, group=False):
        p = sub.add_parser(name)
        if group:
            _add_group_args(p)
        _add_output_args(p)
        p.set_defaults(func=func)
        return p

    add("enumerate", cmd_enumerate, group=True)
    p = add("traces", cmd_traces, group=True)
    p.add_argument("--all", action="store_true",
                   help="include the identity trace (unreduced set)")
    p = add("cluster", cmd_cluster, group=True)
    p.add_argument("--max-n", type=int, default=20)
    add("gap", cmd_gap, group=True)
    p = add("growth", cmd_growth, group=True)
    p.add_argument("--max-n", type=int, default=20)
    p = add("arith-check", cmd_arith_check, group=True)
    p.add_argument("--pair-budget", type=int, default=90_000)
    p = add("delta-c", cmd_delta_c)
    p.add_argument("--c", required=True, help="the base value, e.g. 3/2")
    p.add_argument("--ring", required=True,
                   help="Z, or a squarefree d in {-1,-2,-3,-7,-11}")
    p.add_argument("--k-bound", type=int, default=100)
    p.add_argument("--n-bound", type=int, default=3)
    p.add_argument("--m1", type=int, default=1)
    p.add_argument("--witness", type=int, default=None,
                   help="emit the n-point clustering-failure witness instead")
    p = add("counting", cmd_counting)
    p.add_argument("--kind", choices=("dn", "rn", "two-to-one", "totient"),
                   required=True)
    p.add_argument("--N", type=int, required=True)
    p = add("kronecker", cmd_kronecker)
    p.add_argument("--theta1", type=float, required=True)
    p.add_argument("--theta2", type=float, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.0)
    p = add("corollary", cmd_corollary, group=True)
    p.add_argument("--window", default="5")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "cap", None) is None and hasattr(args, "cap"):
        args.cap = _budget_default()
    try:
        report = args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"error: precondition violated: {exc}", file=sys.stderr)
        return 4
    except KeyError as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
