"""Command-line entry point: ``sasred <subcommand> ...``.

Exit status is 0 when everything requested passes, 1 when a finding is
reported (a failed predicate or certificate), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, algebra, levelset, weights
from . import verify as vf
from .momentmaps import residual_and_jacobian

DEFAULT_SEED = 42
DEFAULT_COUNT = 100
DEFAULT_BOUND = 30


class UsageError(Exception):
    pass


def parse_ints(text: str, n: int | None = None) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.replace(" ", "").split(","))
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} comma-separated integers, got {len(vals)}")
    return vals


def parse_theta(text: str):
    rows = text.split(";")
    if len(rows) != 2:
        raise UsageError(f"theta must look like 'p1,p2,p3;q1,q2,q3', got {text!r}")
    return tuple(parse_ints(r, 3) for r in rows)


def parse_datum(family: str, text: str):
    if family == "triple":
        return parse_ints(text, 3)
    if family == "quad":
        return parse_ints(text, 4)
    if family == "theta":
        return parse_theta(text)
    raise UsageError(f"unknown family {family!r}")


# -- output ---------------------------------------------------------------------

def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if o == weights.INFINITE:
        return "infinite"
    raise TypeError(type(o).__name__)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.3e}"
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    if v is None:
        return "-"
    return str(v)


def human_lines(obj, prefix="") -> list[str]:
    """Flatten a report to ``key: value`` lines; long float lists are summarised."""
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            key = f"{prefix}{k}"
            if isinstance(v, dict):
                lines += human_lines(v, key + ".")
            elif isinstance(v, list) and v and isinstance(v[0], dict):
                for i, item in enumerate(v):
                    lines += human_lines(item, f"{key}[{i}].")
            elif isinstance(v, list) and len(v) > 12:
                lines.append(f"{key}: <{len(v)} values>")
            else:
                lines.append(f"{key}: {_fmt(v)}")
    else:
        lines.append(f"{prefix.rstrip('.')}: {_fmt(obj)}")
    return lines


def emit(obj, fmt: str, out=None, csv_rows=None):
    if fmt == "json":
        text = dump_json(obj)
    elif fmt == "csv":
        if csv_rows is None:
            raise UsageError("csv output is only available for enumerations")
        text = csv_rows
    else:
        text = "\n".join(human_lines(obj)) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------------

def exact_check(family: str, datum) -> tuple[dict, bool]:
    if family == "triple":
        reasons = weights.triple_failures(datum)
        return {"family": family, "datum": list(datum), "admissible": not reasons, "reasons": reasons}, not reasons
    if family == "quad":
        reasons = weights.quad_failures(datum)
        wt = weights.failing_quad_triple(datum)
        return {"family": family, "datum": list(datum), "free": not reasons, "reasons": reasons,
                "witness_triple": list(wt) if wt else None}, not reasons
    ok, reason = weights.theta_locally_free(datum)
    out = {
        "family": family,
        "datum": [list(r) for r in datum],
        "minors": list(weights.minor_determinants(datum)),
        "boxes": list(weights.box_determinants(datum)),
        "box_identity": weights.verify_box_identity(datum),
        "locally_free": ok,
        "reason": reason,
    }
    if ok:
        out["orders"] = list(weights.singular_group_orders(datum))
    return out, ok


def cmd_check(args):
    report, ok = exact_check(args.family, parse_datum(args.family, args.datum))
    report["tool_version"] = __version__
    emit(report, args.format, args.out)
    return 0 if ok else 1


def cmd_enumerate(args):
    if args.bound < 4:
        raise UsageError("--bound must be at least 4")
    if args.what == "triples":
        rows = weights.enumerate_admissible_triples(args.bound)
        pred = "admissible_triple"
    else:
        rows = weights.enumerate_free_quads(args.bound)
        pred = "free_quadruple"
    report = {"predicate": pred, "bound": args.bound, "count": len(rows), "rows": [list(r) for r in rows],
              "tool_version": __version__}
    emit(report, args.format, args.out, csv_rows=weights.to_csv(rows, pred, args.bound))
    return 0


def cmd_obstruction(args):
    rows = weights.theta_smoothness_obstruction()
    report = {"assignments": rows, "every_assignment_has_pm3": all(r["count_pm3"] >= 1 for r in rows),
              "any_all_unit": any(r["all_unit"] for r in rows), "tool_version": __version__}
    emit(report, args.format, args.out)
    return 0 if report["every_assignment_has_pm3"] and not report["any_all_unit"] else 1


def _spec_from_args(args):
    kw = {}
    if args.tol is not None:
        kw["tol"] = args.tol
    if args.rank_rtol is not None:
        kw["rank_rtol"] = args.rank_rtol
    return levelset.make_spec(args.family, parse_datum(args.family, args.weights), **kw)


def cmd_sample(args):
    spec = _spec_from_args(args)
    try:
        samples = levelset.sample_level_set(spec, args.count, args.seed, threads=args.threads)
    except levelset.AllDiverged as exc:
        emit({"error": str(exc), "spec": spec.describe(), "seed": args.seed}, args.format)
        return 1
    report = samples.to_json()
    report["tool_version"] = __version__
    emit(report, "json" if args.out else args.format, args.out)
    return 0


def revalidate_samples(path: str) -> dict:
    """Recompute residual norms of a sample file; returns the worst absolute disagreement."""
    with open(path) as fh:
        data = json.load(fh)
    s = data["spec"]
    spec = levelset.make_spec(s["family"], s["weights"], tol=s["tol"], max_iter=s["max_iter"],
                              rank_rtol=s["rank_rtol"])
    worst = 0.0
    for p in data["points"]:
        res = float(np.linalg.norm(residual_and_jacobian(np.array(p["u"]), spec)[0]))
        worst = max(worst, abs(res - p["residual"]))
    return {"points": len(data["points"]), "max_disagreement": worst}


def cmd_certify(args):
    datum = parse_datum(args.family, args.weights)
    opts = vf.SamplingOptions(count=args.count, seed=args.seed, threads=args.threads, full=args.full,
                              force=args.force, tol=args.tol, rank_rtol=args.rank_rtol)
    fn = {"triple": vf.verify_triple, "quad": vf.verify_quad, "theta": vf.verify_theta}[args.family]
    report = fn(datum, opts)
    emit(report, args.format, args.out)
    return 1 if report["findings"] else 0


def cmd_calibrate(args):
    conv = algebra.calibrate_convention(args.samples, seed=args.seed)
    algebra.save_convention(conv, args.out)
    emit({"out": args.out, "convention": conv.to_json(), "tool_version": __version__}, args.format)
    return 0


def cmd_suite(args):
    report = vf.verify_paper_suite(seed=args.seed, bound=args.bound, threads=args.threads,
                                   rank_rtol=args.rank_rtol, enumeration_only=args.enumeration_only)
    if args.format == "human":
        lines = [f"criterion {c['id']:>2} {c['name']}: {'pass' if c['passed'] else 'FAIL'}" for c in report["criteria"]]
        lines.append(f"seed: {report['seed']}  bound: {report['bound']}  passed: {_fmt(report['passed'])}")
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        emit(report, args.format, args.out)
    return 0 if report["passed"] else 1


# -- parser -----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "human"), default="human")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--tol", type=float, default=None, help="projection residual tolerance")
    common.add_argument("--rank-rtol", type=float, default=None, help="relative SVD rank threshold")

    p = _Parser(prog="sasred", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"sasred {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", parents=[common], help="exact predicates for a weight datum")
    s.add_argument("family", choices=("triple", "quad", "theta"))
    s.add_argument("datum", help="'a,b,c', 'a,b,c,d' or 'p1,p2,p3;q1,q2,q3'")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("enumerate", parents=[common], help="list admissible triples or free quadruples")
    s.add_argument("what", choices=("triples", "quads"))
    s.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("obstruction", parents=[common], help="box determinants for all unit-minor sign assignments")
    s.add_argument("what", choices=("theta",))
    s.set_defaults(func=cmd_obstruction)

    for name, func, helptext in (("sample", cmd_sample, "sample points of a level set"),
                                 ("certify", cmd_certify, "full verification report for a datum")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--family", choices=("triple", "quad", "theta"), required=True)
        s.add_argument("--weights", required=True)
        s.add_argument("--count", type=int, default=DEFAULT_COUNT)
        s.add_argument("--seed", type=int, default=DEFAULT_SEED)
        s.set_defaults(func=func)
    s.add_argument("--full", action="store_true", help="also run vertex scan, invariance and co-associativity")
    s.add_argument("--force", action="store_true", help="sample even when the exact predicate fails")

    s = sub.add_parser("calibrate-octonions", parents=[common], help="search and save the octonion convention")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=1)
    s.set_defaults(func=cmd_calibrate)

    s = sub.add_parser("suite", parents=[common], help="run every acceptance criterion")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    s.add_argument("--enumeration-only", action="store_true")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "calibrate-octonions" and not args.out:
            raise UsageError("calibrate-octonions requires --out FILE")
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"sasred: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
