"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 degenerate measure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import __version__, catalog
from .errors import DegenerateMeasure, RunLengthError
from .measure import (
    atom_count, diffuse_mass, dropped_mass, is_atomic, is_total_order,
    numeric_mode, parse_measure_spec, rearrange_atoms, to_dict, validate,
)
from .runfunc import NONSTRICT, STRICT, RunKind, run_coefficients
from .series import DEFAULT_ORDER
from .simulate import simulate_replicas, slln_trace, summarize
from .stats import INITIAL, INTERIOR, pgf_value, probability_measure, run_statistics, total_order_stats

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3


class _Exit(Exception):
    def __init__(self, code, msg):
        super().__init__(msg)
        self.code = code


def default_order() -> int:
    raw = os.environ.get("RUNLEN_ORDER")
    return int(raw) if raw else DEFAULT_ORDER


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, int):
        return x
    if hasattr(x, "value"):
        return x.value
    return x


def _fmt(x) -> str:
    if isinstance(x, (list, tuple)):
        more = ", ..." if len(x) > 6 else ""
        return "[" + ", ".join(_fmt(v) for v in x[:6]) + more + "]"
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x} (~{float(x):.6g})"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _load(path):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise _Exit(EXIT_INPUT, f"cannot read {path}: {exc}") from None
    return parse_measure_spec(text)


def _summary(expr):
    rep = validate(expr)
    if not rep.is_valid:
        raise _Exit(EXIT_INPUT, "invalid measure: " + "; ".join(rep.issues))
    return {
        "total_mass": rep.total_mass,
        "atom_count": atom_count(expr),
        "diffuse_mass": diffuse_mass(expr),
        "dropped_mass": dropped_mass(expr),
        "degenerate": rep.is_degenerate,
        "probability": rep.is_probability,
        "total_order": is_total_order(expr),
        "mode": numeric_mode(expr),
    }


def _kinds(arg):
    return [STRICT, NONSTRICT] if arg == "both" else [RunKind.parse(arg)]


def _positions(arg):
    return [INITIAL, INTERIOR] if arg == "both" else [INITIAL if arg == "initial" else INTERIOR]


def _stats_block(expr, kinds, positions, order):
    out = {}
    for kind in kinds:
        rc = run_coefficients(probability_measure(expr, kind), kind, order)
        for pos in positions:
            st = run_statistics(expr, kind, pos, order)
            out[f"{kind.value}.{pos.value}"] = {
                "mean": st.mean,
                "variance": st.variance,
                "pmf": list(st.pgf_coeffs),
                "mass_deficit": st.mass_deficit,
                "mode": st.mode,
                "trunc_error_at_one": rc.trunc_error_at_one,
            }
    return out


def cmd_stats(args):
    expr = _load(args.spec)
    summary = _summary(expr)
    results = _stats_block(expr, _kinds(args.kind), _positions(args.position), args.order)
    return {"command": _echo(args), "measure": summary, "results": results}


def cmd_coeffs(args):
    expr = _load(args.spec)
    summary = _summary(expr)
    results = {}
    for kind in _kinds(args.kind):
        rc = run_coefficients(expr, kind, args.order)
        results[kind.value] = {"coefficients": list(rc.coeffs), "trunc_error_at_one": rc.trunc_error_at_one}
    return {"command": _echo(args), "measure": summary, "results": results}


def _simulate_block(expr, kind, length, seed, replicas):
    hist = simulate_replicas(expr, kind, length, seed, replicas)
    interior = summarize(hist.interior_counts())
    checkpoints = [10**k for k in range(1, 13) if 10**k <= length]
    trace = slln_trace(expr, kind, 1, checkpoints, seed) if checkpoints else []
    return hist, interior, {
        "runs_started": hist.runs_started,
        "counts_by_length": {str(k): v for k, v in sorted(hist.counts_by_length.items())},
        "open_final_run": hist.includes_final_open_run,
        "interior_mean": interior.mean,
        "interior_mean_se": interior.mean_se,
        "interior_variance": interior.variance,
        "slln_trace_n1": [[b, r] for b, r in trace],
    }


def cmd_simulate(args):
    expr = _load(args.spec)
    summary = _summary(expr)
    if not summary["probability"]:
        raise _Exit(EXIT_INPUT, f"not a probability measure (total mass {summary['total_mass']})")
    results = {}
    for kind in _kinds(args.kind):
        _, _, block = _simulate_block(expr, kind, args.length, args.seed, args.replicas)
        results[kind.value] = block
    return {"command": _echo(args), "measure": summary, "results": results}


def _close(a, b, rel, abs_=0.0):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    a, b = float(a), float(b)
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_)


def _verify_checks(expr, order, samples, seed):
    from . import oracle

    checks = []

    def check(name, expected, actual, ok, informational=False):
        checks.append({"name": name, "expected": expected, "actual": actual,
                       "passed": bool(ok), "informational": informational})

    summary = _summary(expr)
    if not summary["probability"]:
        raise _Exit(EXIT_INPUT, f"not a probability measure (total mass {summary['total_mass']})")
    kinds = [STRICT] if summary["degenerate"] else [STRICT, NONSTRICT]
    exact = numeric_mode(expr) == "rational"

    for kind in kinds:
        mu = probability_measure(expr, kind)
        L = run_coefficients(mu, kind, order).coeffs
        init = run_statistics(expr, kind, INITIAL, order)
        inter = run_statistics(expr, kind, INTERIOR, order)

        # engine against brute-force enumeration
        if is_atomic(mu):
            for n in range(0, min(order, 8) + 1):
                try:
                    o = oracle.oracle_run_coefficient(mu, kind, n)
                except RunLengthError:
                    break
                check(f"{kind.value}.L{n}.oracle", o, L[n], _close(o, L[n], 1e-12, 1e-15) if not exact else o == L[n])
            for st in (init, inter):
                for n in range(1, 6):
                    try:
                        o = oracle.oracle_run_length_pmf(mu, kind, st.position, n)
                    except RunLengthError:
                        break
                    got = st.pmf(n)
                    check(f"{kind.value}.{st.position.value}.pmf{n}.oracle", o, got,
                          o == got if exact else _close(o, got, 1e-12, 1e-15))

        # closed total-order formulas against the generic recursion
        if is_total_order(mu):
            t0, t1 = total_order_stats(expr, kind, order)
            for a, b in ((t0, init), (t1, inter)):
                for what in ("mean", "variance"):
                    x, y = getattr(a, what), getattr(b, what)
                    check(f"{kind.value}.{a.position.value}.{what}.closed_form", x, y, _close(x, y, 1e-12))

        # probabilities and normalisation
        for st in (init, inter):
            total = sum(st.pgf_coeffs) + st.mass_deficit
            check(f"{kind.value}.{st.position.value}.normalised", 1, total, _close(total, 1, 1e-12))

        # PGF derivatives at 1 by central differences
        # exact arithmetic where possible so rounding does not swamp the second difference
        h = Fraction(1, 10**5) if exact and is_atomic(mu) else 1e-5
        for st in (init, inter):
            try:
                g = [pgf_value(expr, kind, st.position, 1 + d * h) for d in (-1, 0, 1)]
            except RunLengthError:
                continue
            d1 = (g[2] - g[0]) / (2 * h)
            d2 = (g[2] - 2 * g[1] + g[0]) / (h * h)
            d1, fd_var = float(d1), float(d2 + d1 - d1 * d1)
            check(f"{kind.value}.{st.position.value}.mean.finite_difference", float(st.mean), d1,
                  _close(st.mean, d1, 1e-5))
            check(f"{kind.value}.{st.position.value}.variance.finite_difference", float(st.variance), fd_var,
                  _close(st.variance, fd_var, 1e-5, 1e-6))

        # Monte Carlo against the theory, 4 standard errors
        if samples:
            _, emp, _ = _simulate_block(expr, kind, samples, seed, 1)
            check(f"{kind.value}.interior.mean.simulation", float(inter.mean), emp.mean,
                  abs(emp.mean - float(inter.mean)) <= 4 * emp.mean_se)
            for n in (1, 2):
                p = float(inter.pmf(n))
                se = math.sqrt(max(p * (1 - p), 1e-300) / emp.runs)
                check(f"{kind.value}.interior.pmf{n}.simulation", p, emp.pmf.get(n, 0.0),
                      abs(emp.pmf.get(n, 0.0) - p) <= 4 * se)

    # rearrangement: run lengths unchanged, record events may move
    n_atoms = atom_count(expr)
    if is_total_order(expr) and is_atomic(expr) and n_atoms >= 2:
        flipped = rearrange_atoms(expr, list(reversed(range(n_atoms))))
        for kind in kinds:
            a = run_coefficients(expr, kind, order).coeffs
            b = run_coefficients(flipped, kind, order).coeffs
            check(f"{kind.value}.rearranged.coefficients", list(a), list(b), a == b)
        try:
            r1 = oracle.oracle_record_probability(expr, 2)
            r2 = oracle.oracle_record_probability(flipped, 2)
            check("record_probability.n2.rearranged_gap", r1, r2, True, informational=True)
            checks[-1]["gap"] = r1 - r2
        except RunLengthError:
            pass
    return summary, checks


def cmd_verify(args):
    expr = _load(args.spec)
    summary, checks = _verify_checks(expr, args.order, args.samples, args.seed)
    failed = [c for c in checks if not c["passed"] and not c["informational"]]
    report = {"command": _echo(args), "measure": summary, "checks": checks,
              "passed": not failed, "failures": [c["name"] for c in failed]}
    return report, (EXIT_VERIFY if failed else EXIT_OK)


def cmd_examples(args):
    params = {}
    if args.name in ("die", "evendie"):
        params["n"] = args.n if args.n is not None else (6 if args.name == "die" else 3)
    if args.name in ("dart", "bulb"):
        params["p"] = Fraction(args.p)
    expr = catalog.example_measure(args.name, eps=Fraction(args.eps), **params)
    summary = _summary(expr)
    kinds = [STRICT] if summary["degenerate"] else [STRICT, NONSTRICT]
    results = _stats_block(expr, kinds, [INITIAL, INTERIOR], args.order)
    return {"command": _echo(args), "spec": to_dict(expr), "measure": summary, "results": results,
            "closed_forms": catalog.closed_forms(args.name, **params)}


def _echo(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "format")}


def _render_table(report) -> str:
    lines = []
    m = report.get("measure", {})
    if m:
        lines.append("measure: " + ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(m.items())))
    for key, block in sorted(report.get("results", {}).items()):
        lines.append(f"[{key}]")
        for k, v in sorted(block.items()):
            if isinstance(v, list):
                shown = ", ".join(_fmt(x) if not isinstance(x, list) else str(x) for x in v[:12])
                more = " ..." if len(v) > 12 else ""
                lines.append(f"  {k}: [{shown}{more}]")
            elif isinstance(v, dict):
                lines.append(f"  {k}: " + ", ".join(f"{a}:{b}" for a, b in v.items()))
            else:
                lines.append(f"  {k}: {_fmt(v)}")
    if "closed_forms" in report:
        lines.append("[closed forms]")
        for k, v in sorted(report["closed_forms"].items()):
            lines.append(f"  {k}: {_fmt(v)}")
    for c in report.get("checks", []):
        tag = "info" if c["informational"] else ("PASS" if c["passed"] else "FAIL")
        lines.append(f"{tag:4}  {c['name']}: expected {_fmt(c['expected'])}, got {_fmt(c['actual'])}")
    if "passed" in report:
        lines.append("all checks passed" if report["passed"] else "FAILED: " + ", ".join(report["failures"]))
    return "\n".join(lines)


def emit(report, fmt, stream=None):
    stream = stream or sys.stdout
    if fmt == "table":
        stream.write(_render_table(report) + "\n")
    else:
        stream.write(json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="runlengths", description="Run-length distributions of i.i.d. sequences.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    order = default_order()

    def common(p, kind=True):
        p.add_argument("spec", help="measure spec JSON file, or - for stdin")
        if kind:
            p.add_argument("--kind", choices=["strict", "nonstrict", "both"], default="both")
        p.add_argument("--format", choices=["json", "table"], default="json")

    p = sub.add_parser("stats", help="means, variances and pmfs of run lengths")
    common(p)
    p.add_argument("--position", choices=["initial", "interior", "both"], default="both")
    p.add_argument("--order", type=int, default=order)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("coeffs", help="run-function coefficients L_0..L_N")
    common(p)
    p.add_argument("--order", type=int, default=order)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("simulate", help="Monte Carlo run-length histogram")
    common(p)
    p.add_argument("--length", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicas", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="engine vs oracle vs simulation")
    common(p, kind=False)
    p.add_argument("--order", type=int, default=order)
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("examples", help="built-in worked examples")
    p.add_argument("name", choices=list(catalog.EXAMPLES))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", default="1/2")
    p.add_argument("--eps", default="1e-12")
    p.add_argument("--order", type=int, default=order)
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    code = EXIT_OK
    try:
        out = args.func(args)
        if isinstance(out, tuple):
            out, code = out
    except _Exit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DegenerateMeasure as exc:
        print(f"error: degenerate measure: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (RunLengthError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(out, args.format)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
