"""Command-line interface.

Subcommands register themselves with :func:`command`; each receives the
parsed arguments and the resolved :class:`~cosmic.config.Config` and returns
the process exit status: 0 on success, 2 when some knot of a batch failed and
1 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable
from pathlib import Path

from .config import Config, load_config
from .errors import CosmicError
from .finite_type import conway_coeffs, v3_from_jones, v5
from .floer import RankProfile, enumerate_admissible_pairs, hf_rank, slope_pair_constraints
from .knot_model import KnotDiagram, Slope, classify_slope_pair, parse_dt, parse_pd
from .pipeline import (
    compute_polynomials,
    default_table_path,
    emit,
    ingest_with_errors,
    lookup_knot,
    run_pipeline,
)
from .quantum import (
    colored_jones_vector,
    lens_space_tau,
    load_colored_jones,
    tau_so3_surgery,
    zero_type_obstruction,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_KNOT_FAILURE = 2

_commands: dict[str, Callable[[argparse.Namespace, Config], int]] = {}


def command(name: str):
    """Decorator registering a function as the handler of a subcommand."""

    def decorator(func: Callable[[argparse.Namespace, Config], int]):
        _commands[name] = func
        return func

    return decorator


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def resolve_diagram(target: str, table: str | None = None) -> tuple[str, KnotDiagram]:
    """Turn a PD code, a DT code or a knot name into a diagram.

    Raises:
        UsageError: If ``target`` is a name missing from the table.
    """
    text = target.strip()
    if text.upper().startswith("DT"):
        return text, parse_dt(text)
    if text.upper().startswith("PD") or text.upper().startswith("X"):
        return "PD", parse_pd(text)
    try:
        row = lookup_knot(text, table)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    return row.name, row.diagram()


@command("invariants")
def cmd_invariants(args: argparse.Namespace, config: Config) -> int:
    name, d = resolve_diagram(args.knot, args.table)
    polys = compute_polynomials(d, config)
    a2, a4 = conway_coeffs(polys.conway)
    values = {
        "name": name,
        "crossings": d.n_crossings,
        "writhe": polys.writhe,
        "jones": str(polys.jones),
        "alexander": str(polys.alexander),
        "conway": polys.conway.format("z"),
        "kauffman": str(polys.kauffman),
        "determinant": polys.determinant,
        "signature": polys.signature,
        "a2": a2,
        "a4": a4,
        "v3": str(v3_from_jones(polys.jones)),
        "v5": str(v5(polys.kauffman)),
    }
    if args.json:
        print(json.dumps(values, sort_keys=True, indent=2))
    else:
        width = max(len(k) for k in values)
        for key, value in values.items():
            print(f"{key:<{width}}  {value}")
    return EXIT_OK


@command("so3")
def cmd_so3(args: argparse.Namespace, config: Config) -> int:
    name, d = resolve_diagram(args.knot, args.table)
    slope = Slope.parse(args.slope)
    polys = compute_polynomials(d, config)
    supplied = None
    if args.colored_jones:
        supplied = load_colored_jones(args.colored_jones).get(name)
    values = supplied or colored_jones_vector(args.r, polys.jones)
    tau = tau_so3_surgery(args.r, values, slope)
    print(f"tau_{args.r}(S^3_K({slope})) = {tau!r}")
    print(f"tau_{args.r}(L({slope.m},{slope.n})) = {lens_space_tau(args.r, slope)!r}")
    verdict = zero_type_obstruction(args.r, polys.jones, slope, supplied=supplied)
    print(f"0-type pair {slope}, {slope.negated()}: {verdict}")
    return EXIT_OK


@command("rank")
def cmd_rank(args: argparse.Namespace, config: Config) -> int:
    profile = RankProfile.normalized(args.nu, args.nu_mirror, args.ck, args.genus)
    if args.slope:
        slope = Slope.parse(args.slope)
        print(f"rank HF(S^3_K({slope})) = {hf_rank(profile, slope)}")
        if args.pair:
            pair = classify_slope_pair(slope, Slope.parse(args.pair))
            admitted = slope_pair_constraints(profile).admits(pair)
            print(f"{pair.first}, {pair.second} ({pair.type_tag}): "
                  f"{'admissible' if admitted else 'excluded'}")
    if args.max_m:
        for pair in enumerate_admissible_pairs(profile, args.max_m):
            print(f"{pair.first}\t{pair.second}\t{pair.type_tag}")
    return EXIT_OK


def _batch(args: argparse.Namespace, config: Config):
    rows, errors = ingest_with_errors(args.table or default_table_path())
    if args.max_crossings is not None:
        rows = [r for r in rows if r.crossing_number <= args.max_crossings]
    return run_pipeline(rows, config, row_errors=errors, progress=not args.no_progress)


@command("classify")
def cmd_classify(args: argparse.Namespace, config: Config) -> int:
    report = _batch(args, config)
    for o in report.outcomes:
        if o.ok:
            print(f"{o.row.name}\t{o.verdict.status}\t{','.join(o.verdict.fired)}")
        else:
            print(f"{o.row.name}\terror\t{o.error_type}: {o.error}")
    return EXIT_KNOT_FAILURE if report.failures else EXIT_OK


@command("report")
def cmd_report(args: argparse.Namespace, config: Config) -> int:
    report = _batch(args, config)
    data = emit(report, args.format)
    if args.output:
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return EXIT_KNOT_FAILURE if report.failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    from cosmic import __version__

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="key = value configuration file")
    common.add_argument("--cache-dir", metavar="DIR", help="on-disk invariant cache")
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging threshold (default: WARNING)",
    )
    common.add_argument("--no-progress", action="store_true", help="hide the progress bar")
    common.add_argument("--table", metavar="CSV", help="knot table (default: the shipped one)")

    parser = _Parser(
        prog="cosmic",
        description="Knot invariants and chirally cosmetic surgery criteria",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s invariants 5_2
  %(prog)s invariants "PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]"
  %(prog)s so3 --r 5 --slope 7/2 3_1
  %(prog)s rank --nu 1 --ck 0 --genus 1 --slope 5/1
  %(prog)s report --format text --table knots.csv
        """,
    )
    parser.add_argument("--version", "-v", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("invariants", parents=[common], help="polynomial and finite type invariants")
    p.add_argument("knot", metavar="KNOT", help="knot name, PD code or DT code")
    p.add_argument("--json", action="store_true", help="print JSON")

    p = sub.add_parser("so3", parents=[common], help="quantum SO(3) surgery invariants")
    p.add_argument("knot", metavar="KNOT", help="knot name, PD code or DT code")
    p.add_argument("--r", type=int, default=5, help="odd level (default: 5)")
    p.add_argument("--slope", required=True, metavar="M/N")
    p.add_argument("--colored-jones", metavar="FILE", help="JSON colored Jones values for r >= 7")

    p = sub.add_parser("rank", parents=[common], help="Heegaard Floer rank of surgeries")
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--nu-mirror", type=int, default=0)
    p.add_argument("--ck", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--slope", metavar="M/N")
    p.add_argument("--pair", metavar="M/N'", help="second slope of a candidate pair")
    p.add_argument("--max-m", type=int, metavar="N", help="list admissible pairs with m <= N")

    for name, text in (
        ("classify", "classify every knot of a table"),
        ("report", "summary tables"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--max-crossings", type=int, metavar="N", help="skip larger knots")
        p.add_argument("--workers", type=int, metavar="N", help="process pool size")
        if name == "report":
            p.add_argument("--format", choices=["json", "csv", "text"], default="text")
            p.add_argument("--output", "-o", metavar="FILE")
    return parser


def main(argv: list[str] | None = None) -> int:
    """Entry point of the ``cosmic`` command."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config) if args.config else Config()
        config = config.from_env().merged(
            cache_dir=Path(args.cache_dir) if args.cache_dir else None,
            workers=getattr(args, "workers", None),
        )
        return _commands[args.command](args, config)
    except (UsageError, CosmicError, ValueError, OSError) as exc:
        print(f"cosmic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
