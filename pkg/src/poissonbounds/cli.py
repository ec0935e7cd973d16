"""Command-line front end.

Exit codes: 0 when every reported check holds, 1 when some check fails,
2 on bad arguments or configuration.
"""

from __future__ import annotations

import argparse
import sys

from . import output
from .bounds import INEQ_TOL, compound_example_report, debruijn_diagnostic, debruijn_identity_report
from .campaigns import FAMILIES, CampaignConfig, ConfigError, run_campaign
from .dist import DEFAULT_TAIL_EPS, Pmf, pmf_bernoulli, pmf_geometric, pmf_poisson_truncated
from .quadrature import QuadratureError, QuadratureSpec
from .sums import binomial_pmf
from .tables import example1_rows, example2_rows, example3_row, example3_rows, markov_rows

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "csv", "table"), default="table")
    p.add_argument("--tail-eps", type=float, default=DEFAULT_TAIL_EPS)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poissonbounds", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common()

    p = sub.add_parser("example1", parents=[common], help="i.i.d. Bern(lam/n) rates")
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--n", type=int, nargs="+", default=[100, 1000, 10000])

    p = sub.add_parser("example2", parents=[common], help="i.i.d. Bern(mu/sqrt(n)) rates")
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--n", type=int, nargs="+", default=[100, 1000, 10000])

    p = sub.add_parser("example3", parents=[common], help="sums of geometrics")
    p.add_argument("--n", type=int, nargs="+", default=[1, 10, 100])
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--q", type=float, nargs="+", help="explicit geometric parameters (one sum)")

    p = sub.add_parser("markov", parents=[common], help="dependent Markov chain example")
    p.add_argument("--n", type=int, nargs="+", default=[3, 10, 100, 1000])

    p = sub.add_parser("compound", parents=[common], help="compound Poisson example")
    p.add_argument("--p", type=float, nargs="+", default=[0.1])
    p.add_argument("--repeat", type=int, default=10, help="repeat the --p list this many times")

    p = sub.add_parser("verify", parents=[common], help="seeded randomized campaign")
    p.add_argument("--family", default="bernoulli-lists", help=f"one of: {', '.join(FAMILIES)}")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol-override", type=float, default=None,
                   help="replace every check tolerance (testing only)")
    p.add_argument("--unsafe", action="store_true",
                   help=f"allow --tol-override above {INEQ_TOL:g}")

    p = sub.add_parser("debruijn", parents=[common], help="integral identity for D(P || Po)")
    p.add_argument("dist", choices=("bern", "binomial", "geom", "poisson"))
    p.add_argument("params", type=float, nargs="+")
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--abs-tol", type=float, default=1e-5)
    p.add_argument("--max-depth", type=int, default=50)
    return parser


def _dist_from_args(name: str, params: list[float], tail_eps: float) -> Pmf:
    want = {"bern": 1, "binomial": 2, "geom": 1, "poisson": 1}[name]
    if len(params) != want:
        raise UsageError(f"{name} takes {want} parameter(s)")
    if name == "bern":
        return pmf_bernoulli(params[0])
    if name == "binomial":
        n = int(params[0])
        if n != params[0] or n < 1:
            raise UsageError("binomial size must be a positive integer")
        return binomial_pmf(n, params[1])
    if name == "geom":
        return pmf_geometric(params[0], tail_eps)
    return pmf_poisson_truncated(params[0], tail_eps)


def _run(args) -> tuple[list[dict], int]:
    cmd = args.command
    if cmd == "example1":
        rows = example1_rows(args.lam, args.n)
        return rows, EXIT_OK if all(r["exact_tv"] <= r["theorem1_tv"] for r in rows) else EXIT_FAIL
    if cmd == "example2":
        rows = example2_rows(args.mu, args.n)
        return rows, EXIT_OK if all(r["holds"] for r in rows) else EXIT_FAIL
    if cmd == "example3":
        if args.q:
            rows = [example3_row(args.q, args.tail_eps)]
        else:
            rows = example3_rows([(n, args.lam) for n in args.n], args.tail_eps)
        return rows, EXIT_OK if all(r.get("holds", True) for r in rows) else EXIT_FAIL
    if cmd == "markov":
        rows = markov_rows(args.n)
        ok = all(r["holds_lower"] and r["holds_upper"] for r in rows)
        return rows, EXIT_OK if ok else EXIT_FAIL
    if cmd == "compound":
        if args.repeat < 1:
            raise UsageError("--repeat must be at least 1")
        total, terms = compound_example_report(args.p * args.repeat)
        reports = [total, *terms]
        return [r.to_dict() for r in reports], EXIT_OK if all(r.holds for r in reports) else EXIT_FAIL
    if cmd == "debruijn":
        P = _dist_from_args(args.dist, args.params, args.tail_eps)
        quad = QuadratureSpec(args.t_max, args.abs_tol, args.max_depth)
        report = debruijn_identity_report(P, quad, args.tail_eps)
        report.params["diagnostic"] = debruijn_diagnostic(P, quad, args.tail_eps)
        report.params["dist"] = [args.dist, *args.params]
        return [report.to_dict()], EXIT_OK if report.holds else EXIT_FAIL
    if cmd == "verify":
        tol = args.tol_override
        if tol is not None:
            if not tol > 0:
                raise ConfigError("--tol-override must be positive")
            if tol > INEQ_TOL and not args.unsafe:
                raise ConfigError(f"--tol-override {tol:g} loosens the default tolerances; pass --unsafe")
        cfg = CampaignConfig(args.seed, args.trials, args.family, args.max_n, args.tail_eps, tol)
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        summary = run_campaign(cfg, jobs=args.jobs)
        return [summary], EXIT_OK if summary["failures"] == 0 else EXIT_FAIL
    raise UsageError(f"unknown command {cmd}")


def _render_verify(summary: dict, fmt: str) -> str:
    if fmt == "json":
        return output.dumps(summary) + "\n"
    rows = [{"name": k, **v} for k, v in summary["by_name"].items()]
    text = output.render(rows, fmt)
    if summary["failed_reports"]:
        text += output.dumps(summary["failed_reports"]) + "\n"
    if fmt == "table":
        text += (f"family={summary['family']} seed={summary['seed']} trials={summary['trials']} "
                 f"checks={summary['checks']} failures={summary['failures']}\n")
    return text


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rows, code = _run(args)
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ConfigError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "verify":
        sys.stdout.write(_render_verify(rows[0], args.format))
    else:
        sys.stdout.write(output.render(rows, args.format))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
