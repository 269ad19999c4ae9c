"""Command-line interface.

::

    pwcalc compute A.json B.json --fn geometric --alpha 0.5
    pwcalc compare A.json B.json --fn parallel_sum
    pwcalc convexity --fn perspective_of --g t^4 --mode falsify
    pwcalc entropy A.json B.json --kind renyi --alpha 2

Reports are JSON written to ``--out`` or standard output. Exit codes: 0
success, 2 precondition or math-domain error, 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import homfun
from .calculus import INV_TOL, numerically_invertible, pw_apply, pw_apply_extended
from .convexity import (
    CONCAVE,
    CONVEX,
    falsify_transformer,
    section_operator_convexity_scan,
    transformer_suite,
)
from .errors import BadParameter, InfiniteValue, NotInvertible, ParseError, PWError
from .extended import PLUS_INF
from .matfile import TOL_KEYS, dumps, matrix_report, read_matrix_file, write_matrix_file
from .quantities import TRACE_INF_TOL, bs_relative_entropy, renyi_trace
from .routes import (
    DEFAULT_EPS_GRID,
    is_nonincreasing,
    limit_study,
    parallel_sum_direct,
    parallel_sum_inverse_form,
    perspective_left,
    perspective_right,
)
from .spectral import HERM_TOL, RANK_TOL, check_psd, opnorm, same_shape

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_PARSE = 3

DEFAULTS = {"herm_tol": HERM_TOL, "rank_tol": RANK_TOL, "inv_tol": INV_TOL}
DEFAULT_SEED = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _global_flags():
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--herm-tol", type=float, default=S)
    p.add_argument("--rank-tol", type=float, default=S)
    p.add_argument("--inv-tol", type=float, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--out", default=S, help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", default=S, help="include wall time (breaks byte stability)")
    return p


def _fn_flags(p):
    p.add_argument("--fn", required=True, choices=homfun.CATALOGUE_NAMES)
    p.add_argument("--alpha", type=float)
    p.add_argument("--g", help="generator for perspective_of: t^p, t, tlogt, -logt")


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="pwcalc", description=__doc__.split("\n\n")[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", parents=[common], help="evaluate f(A, B)")
    p.add_argument("A")
    p.add_argument("B")
    _fn_flags(p)

    p = sub.add_parser("compare", parents=[common], help="compare routes to f(A, B)")
    p.add_argument("A")
    p.add_argument("B")
    _fn_flags(p)
    p.add_argument("--eps-grid", type=float, nargs="+", default=list(DEFAULT_EPS_GRID))
    p.add_argument("--ratio", type=float, default=1.0, help="eps2 / eps1 in the regularized route")

    p = sub.add_parser("convexity", parents=[common], help="transformer / section convexity scans")
    _fn_flags(p)
    p.add_argument("--mode", choices=("check", "falsify", "section"), default="check")
    p.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--trials", type=int)
    p.add_argument("--direction", choices=(CONVEX, CONCAVE), default=CONVEX)
    p.add_argument("--tol", type=float)
    p.add_argument("--interval", type=float, nargs=2, default=[0.0, 1.0])

    p = sub.add_parser("entropy", parents=[common], help="trace quantities")
    p.add_argument("A")
    p.add_argument("B")
    p.add_argument("--kind", choices=("bs", "renyi"), required=True)
    p.add_argument("--alpha", type=float)
    return parser


def _settings(args):
    tols = {}
    for key in TOL_KEYS:
        if hasattr(args, key):
            value = getattr(args, key)
            if not value >= 0:
                raise BadParameter(f"--{key.replace('_', '-')} must be nonnegative")
            tols[key] = value
    return tols


def _load_pair(args, explicit):
    herm_tol = explicit.get("herm_tol", DEFAULTS["herm_tol"])
    force = "herm_tol" in explicit
    fa = read_matrix_file(args.A, herm_tol, force)
    fb = read_matrix_file(args.B, herm_tol, force)
    # File overrides apply in order A, B; explicit flags win.
    tols = dict(DEFAULTS)
    for f in (fa, fb):
        tols.update(f.tol)
    tols.update(explicit)
    A = check_psd(fa.matrix, tols["rank_tol"], tols["herm_tol"], what=fa.name)
    B = check_psd(fb.matrix, tols["rank_tol"], tols["herm_tol"], what=fb.name)
    same_shape(A, B)
    return fa.name, fb.name, A, B, tols


def _fn_from(args):
    return homfun.catalogue(args.fn, alpha=args.alpha, g=args.g)


def _fn_echo(args):
    echo = {"fn": args.fn}
    if args.alpha is not None:
        echo["alpha"] = args.alpha
    if args.g is not None:
        echo["g"] = args.g
    return echo


def _trace(M):
    return float(np.trace(M).real)


def cmd_compute(args, explicit, ctx):
    name_a, name_b, A, B, tols = _load_pair(args, explicit)
    fn = _fn_from(args)
    ctx["command"] = {"name": "compute", "A": name_a, "B": name_b, **_fn_echo(args)}
    ctx["tolerances"] = tols
    if fn.is_finite:
        F = pw_apply(A, B, fn, tols["rank_tol"], tols["inv_tol"])
        return {"kind": "matrix", "value": matrix_report(F), "trace": _trace(F)}
    ext = pw_apply_extended(A, B, fn, tols["rank_tol"])
    return {
        "kind": "extended",
        "F": matrix_report(ext.F),
        "K": matrix_report(ext.K),
        "trace": ext.trace(TRACE_INF_TOL * opnorm(A + B)),
    }


def _route_table(routes):
    names = list(routes)
    table = {"routes": [{"name": n, "norm": opnorm(routes[n])} for n in names], "diffs": []}
    worst = 0.0
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            d = opnorm(routes[a] - routes[b])
            rel = d / max(1.0, opnorm(routes[a]), opnorm(routes[b]))
            worst = max(worst, rel)
            table["diffs"].append({"a": a, "b": b, "diff": d, "relative": rel})
    table["max_relative_diff"] = worst
    return table


def cmd_compare(args, explicit, ctx):
    name_a, name_b, A, B, tols = _load_pair(args, explicit)
    fn = _fn_from(args)
    ctx["command"] = {"name": "compare", "A": name_a, "B": name_b, **_fn_echo(args)}
    ctx["tolerances"] = tols
    inv_tol, rank_tol = tols["inv_tol"], tols["rank_tol"]
    exact = pw_apply(A, B, fn, rank_tol, inv_tol)
    routes = {"pw_apply": exact}
    skipped = []
    a_inv = numerically_invertible(A, inv_tol)
    b_inv = numerically_invertible(B, inv_tol)
    for name, ok, route in (("perspective_left", a_inv, perspective_left),
                            ("perspective_right", b_inv, perspective_right)):
        if not ok:
            skipped.append({"name": name, "reason": "not invertible"})
            continue
        try:
            routes[name] = route(A, B, fn, inv_tol, rank_tol)
        except (InfiniteValue, NotInvertible) as exc:
            skipped.append({"name": name, "reason": str(exc)})
    if fn.name == "parallel_sum":
        if a_inv and b_inv:
            routes["parallel_sum_direct"] = parallel_sum_direct(A, B, inv_tol)
            routes["parallel_sum_inverse_form"] = parallel_sum_inverse_form(A, B, inv_tol)
        else:
            skipped.append({"name": "parallel_sum_closed_forms", "reason": "not invertible"})
    result = {"value": matrix_report(exact), **_route_table(routes), "skipped": skipped}
    if fn.continuous_on_closed:
        curve = limit_study(A, B, fn, args.eps_grid, args.ratio, rank_tol)
        result["limit_study"] = {
            "ratio": args.ratio,
            "curve": [{"eps": e, "error": err} for e, err in curve],
            "nonincreasing": is_nonincreasing(curve, 1e-14 * (1 + opnorm(exact))),
        }
    else:
        result["limit_study"] = None
    return result


def _witness_dir(args):
    out = getattr(args, "out", None)
    return Path(out).parent if out else Path.cwd()


def _serialize_check(res, args, label):
    doc = {
        "passed": res.passed,
        "margin": res.margin,
        "direction": res.direction,
        "tol": res.tol,
        "trials": res.trials,
        "witness": None,
    }
    w = res.witness
    if w is not None:
        files = {}
        directory = _witness_dir(args)
        directory.mkdir(parents=True, exist_ok=True)
        for name, M in w.matrices.items():
            fname = f"witness_{label}_{name}.json"
            write_matrix_file(directory / fname, M, f"{label}_{name}", general=(name == "V"))
            files[name] = fname
        doc["witness"] = {
            "kind": w.kind,
            "seed": list(w.seed) if w.seed else None,
            "margin": w.margin,
            "files": files,
        }
    return doc


def cmd_convexity(args, explicit, ctx):
    fn = _fn_from(args)
    seed = getattr(args, "seed", DEFAULT_SEED)
    ctx["command"] = {"name": "convexity", **_fn_echo(args), "mode": args.mode, "dims": args.dims,
                      "direction": args.direction}
    ctx["tolerances"] = {**DEFAULTS, **explicit}
    if args.mode == "section":
        trials = 1000 if args.trials is None else args.trials
        tol = 1e-10 if args.tol is None else args.tol
    else:
        trials = (100 if args.mode == "check" else 10_000) if args.trials is None else args.trials
        tol = (1e-8 if args.mode == "check" else 1e-6) if args.tol is None else args.tol
    if trials < 1:
        raise BadParameter("--trials must be positive")
    ctx["command"].update({"trials": trials, "tol": tol})
    if args.mode == "check":
        res = transformer_suite(fn, args.dims, trials, seed, args.direction, tol)
        return _serialize_check(res, args, "check")
    if args.mode == "falsify":
        res = falsify_transformer(fn, args.dims, trials, seed, tol, args.direction)
        return _serialize_check(res, args, "falsify")
    if args.direction != CONVEX:
        raise BadParameter("section scans test the convex direction only")
    ctx["command"]["interval"] = args.interval
    per_dim = []
    for dim in args.dims:
        res = section_operator_convexity_scan(fn.section, tuple(args.interval), dim, trials, seed, tol)
        per_dim.append({"dim": dim, **_serialize_check(res, args, f"section_dim{dim}")})
    return {
        "passed": all(r["passed"] for r in per_dim),
        "margin": min(r["margin"] for r in per_dim),
        "per_dim": per_dim,
    }


def cmd_entropy(args, explicit, ctx):
    name_a, name_b, A, B, tols = _load_pair(args, explicit)
    ctx["command"] = {"name": "entropy", "A": name_a, "B": name_b, "kind": args.kind}
    if args.kind == "renyi":
        if args.alpha is None:
            raise BadParameter("--kind renyi requires --alpha")
        ctx["command"]["alpha"] = args.alpha
    ctx["tolerances"] = tols
    if args.kind == "bs":
        value = bs_relative_entropy(A, B, tols["rank_tol"])
    else:
        value = renyi_trace(A, B, args.alpha, tols["rank_tol"])
    return {"value": value, "infinite": value is PLUS_INF}


COMMANDS = {
    "compute": cmd_compute,
    "compare": cmd_compare,
    "convexity": cmd_convexity,
    "entropy": cmd_entropy,
}


def run(argv):
    """Execute one command; return ``(exit_code, report_text_or_None, out_path_or_None)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"pwcalc: error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION, None, None
    start = time.perf_counter()
    ctx = {}
    try:
        explicit = _settings(args)
        results = COMMANDS[args.command](args, explicit, ctx)
    except ParseError as exc:
        print(f"pwcalc: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE, None, None
    except OSError as exc:
        print(f"pwcalc: I/O error: {exc}", file=sys.stderr)
        return EXIT_PARSE, None, None
    except PWError as exc:
        print(f"pwcalc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION, None, None
    report = {
        "command": ctx.get("command", {"name": args.command}),
        "tolerances": ctx.get("tolerances", dict(DEFAULTS)),
        "seed": getattr(args, "seed", DEFAULT_SEED),
        "results": results,
    }
    if getattr(args, "timing", False):
        report["timing"] = {"seconds": time.perf_counter() - start}
    return EXIT_OK, dumps(report) + "\n", getattr(args, "out", None)


def main(argv=None) -> int:
    code, text, out = run(sys.argv[1:] if argv is None else argv)
    if text is None:
        return code
    if out:
        try:
            Path(out).write_text(text, encoding="ascii")
        except OSError as exc:
            print(f"pwcalc: I/O error: {exc}", file=sys.stderr)
            return EXIT_PARSE
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
