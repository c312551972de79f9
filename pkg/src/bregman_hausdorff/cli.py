"""Command line: ``bregman-hausdorff {hausdorff,chernoff,gen,bench}``.

Exit codes: 0 success, 2 usage, 3 parse, 4 domain/validation,
5 convergence.  JSON writes infinity as the string ``"inf"``.
"""

import argparse
import json
import math
import sys
import warnings

from . import __version__
from .benchmark import run_benchmark
from .chernoff import ChernoffConfig, chernoff_hausdorff
from .data import Validation, load_points, sample_simplex, save_points
from .divergences import GENERATORS, get_generator
from .errors import BregmanError, UsageError
from .hausdorff import BACKENDS, hausdorff

DEFAULT_MAX_PAIRS = 10_000_000
AUTO_VALIDATION = {"se": "none", "kl": "simplex", "gkl": "positive", "is": "positive"}


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _csv_list(cast):
    def parse(s):
        try:
            return [cast(t) for t in s.split(",") if t.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {s!r}") from None
    return parse


def _add_data_flags(p):
    p.add_argument("--p", required=True, metavar="FILE", help="CSV of points (max side)")
    p.add_argument("--q", required=True, metavar="FILE", help="CSV of points (min side)")
    p.add_argument("--divergence", choices=sorted(GENERATORS), default="kl")
    p.add_argument("--variant", choices=["primal", "dual"], default="primal")
    p.add_argument("--backend", choices=BACKENDS, default="shell")
    p.add_argument("--validate", choices=["auto"] + [v.value for v in Validation], default="auto",
                   help="auto: simplex for kl, positive for gkl/is, none for se")
    p.add_argument("--simplex-tol", type=float, default=1e-9)
    p.add_argument("--leaf-capacity", type=int, default=16)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", choices=["json", "table"], default="table")


def build_parser():
    parser = argparse.ArgumentParser(prog="bregman-hausdorff",
                                     description="Bregman-Hausdorff divergences between point sets.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hausdorff", help="one-sided Bregman-Hausdorff divergence")
    _add_data_flags(h)
    h.add_argument("--both-directions", action="store_true",
                   help="also report H(Q || P); no max is taken")

    c = sub.add_parser("chernoff", help="Chernoff-Bregman-Hausdorff distance")
    _add_data_flags(c)
    c.add_argument("--tolerance", type=float, default=1e-10)
    c.add_argument("--max-iterations", type=int, default=200)
    c.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS,
                   help="refuse inputs with more than this many Chernoff points")

    g = sub.add_parser("gen", help="sample points uniformly from the open simplex")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, metavar="FILE")
    g.add_argument("--make-dirs", action="store_true")

    b = sub.add_parser("bench", help="time backends on synthetic simplex data")
    b.add_argument("--dims", type=_csv_list(int), default=[10, 50])
    b.add_argument("--sizes", type=_csv_list(int), default=[50_000, 5_000], metavar="NP,NQ")
    b.add_argument("--divergences", type=_csv_list(str), default=["kl"])
    b.add_argument("--backends", type=_csv_list(str), default=list(BACKENDS))
    b.add_argument("--variant", choices=["primal", "dual"], default="primal")
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--output", choices=["json", "table"], default="table")
    return parser


def _load_pair(args):
    validation = args.validate
    if validation == "auto":
        validation = AUTO_VALIDATION[args.divergence]
    P = load_points(args.p, validation=validation, simplex_tol=args.simplex_tol)
    Q = load_points(args.q, validation=validation, simplex_tol=args.simplex_tol)
    return P, Q


def _common(args, argv):
    return {
        "command": args.command,
        "argv": list(argv),
        "divergence": args.divergence,
        "variant": args.variant,
        "backend": args.backend,
        "units": get_generator(args.divergence).units,
    }


def cmd_hausdorff(args, argv):
    P, Q = _load_pair(args)
    kw = dict(leaf_capacity=args.leaf_capacity, n_threads=args.threads)
    runs = [("P||Q", hausdorff(P, Q, args.divergence, args.variant, args.backend, **kw))]
    if args.both_directions:
        runs.append(("Q||P", hausdorff(Q, P, args.divergence, args.variant, args.backend, **kw)))
    report = _common(args, argv)
    report["n_p"], report["n_q"], report["dim"] = P.n, Q.n, P.dim
    report["results"] = [{
        "direction": label,
        "value": _num(r.value),
        "witness": list(r.witness),
        "stats": r.stats.as_dict(),
    } for label, r in runs]
    return report


def cmd_chernoff(args, argv):
    P, Q = _load_pair(args)
    n_pairs = P.n * Q.n
    if n_pairs > args.max_pairs:
        raise UsageError(f"{n_pairs} Chernoff points exceed --max-pairs {args.max_pairs}; "
                         "subsample the inputs")
    if n_pairs > DEFAULT_MAX_PAIRS:
        warnings.warn(f"building {n_pairs} Chernoff points", RuntimeWarning)
    cfg = ChernoffConfig(args.tolerance, args.max_iterations)
    r = chernoff_hausdorff(args.divergence, P, Q, args.variant, args.backend, cfg,
                           leaf_capacity=args.leaf_capacity, n_threads=args.threads)
    report = _common(args, argv)
    report["n_p"], report["n_q"], report["dim"] = P.n, Q.n, P.dim
    report["results"] = [{
        "direction": "P,Q",
        "value": _num(r.value),
        "witness": list(r.witness),
        "chernoff_points": len(r.chernoff),
        "max_residual": r.max_residual,
        "max_bisection_iterations": int(r.chernoff.iterations.max()),
        "stats": r.stats.as_dict(),
    }]
    return report


def cmd_gen(args, argv):
    cloud = sample_simplex(args.dim, args.count, args.seed)
    save_points(cloud, args.out, make_dirs=args.make_dirs)
    return {"command": "gen", "argv": list(argv), "out": args.out, "dim": args.dim,
            "count": args.count, "seed": args.seed}


def cmd_bench(args, argv):
    if len(args.sizes) != 2:
        raise UsageError("--sizes takes exactly two numbers: |P|,|Q|")
    for name in args.divergences:
        get_generator(name)
    for name in args.backends:
        if name not in BACKENDS:
            raise UsageError(f"unknown backend {name!r}")
    out = run_benchmark(args.dims, tuple(args.sizes), args.divergences, args.backends,
                        args.repeats, args.seed, args.variant, args.threads)
    report = {"command": "bench", "argv": list(argv), "repeats": args.repeats, "seed": args.seed}
    report.update(out)
    for rec in report["records"]:
        rec["value"] = _num(rec["value"])
    return report


def render_table(report):
    lines = []
    if report["command"] == "gen":
        return f"wrote {report['count']} x {report['dim']} points to {report['out']}"
    if report["command"] == "bench":
        lines.append(f"{'divergence':<10} {'dim':>5} {'backend':<8} {'median_s':>12} {'value':>22}")
        for r in report["records"]:
            lines.append(f"{r['divergence']:<10} {r['dim']:>5} {r['backend']:<8} "
                         f"{r['median_seconds']:>12.6f} {r['value']!s:>22}")
        for s in report["speedups"]:
            lines.append(f"{s['divergence']:<10} {s['dim']:>5} {'speed-up':<8} {s['speedup']:>12.3f}x")
        return "\n".join(lines)
    lines.append(f"{report['command']}  divergence={report['divergence']}  variant={report['variant']}"
                 f"  backend={report['backend']}  units={report['units']}")
    for r in report["results"]:
        extra = ""
        if "chernoff_points" in r:
            extra = f"  chernoff_points={r['chernoff_points']}  max_residual={r['max_residual']!r}"
        s = r["stats"]
        lines.append(f"{r['direction']:<6} value={r['value']!r}  witness={tuple(r['witness'])}"
                     f"{extra}  build_s={s['build_seconds']!r}  query_s={s['query_seconds']!r}"
                     f"  early={s['early_terminations']}  visited={s['points_visited']}")
    return "\n".join(lines)


COMMANDS = {"hausdorff": cmd_hausdorff, "chernoff": cmd_chernoff, "gen": cmd_gen, "bench": cmd_bench}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = COMMANDS[args.command](args, argv)
    except BregmanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if getattr(args, "output", "table") == "json":
        print(json.dumps(report, indent=2))
    else:
        print(render_table(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
