"""Command-line front end: ``gslab <command> ...``.

Commands:
    - ``gen <family> <params...> [--out FILE] [--format json|dot]``
    - ``lc-orbit <g.json> [--up-to-perm]``
    - ``lc-equiv <g1.json> <g2.json> [--up-to-iso]``
    - ``msc <state>``, ``distance <state>``, ``pp <g.json>``
    - ``schmidt-rank <state> --part 0,1,2``
    - ``css-biclique <m> <n> [--matrices]``
    - ``reduce <stab.txt>``
    - ``verify-rank-relations <g.json> [--part ...]``
    - ``certify <g.json>``
    - ``verify-paper [--only 1,5] [--config-dump]``

A ``<state>`` is a graph JSON file or a stabilizer text file. Exit codes:
0 on success (NOT-EQUIVALENT and UNKNOWN are answers), 2 for bad input,
3 when a configured limit is exceeded, 1 for anything else.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Sequence, TextIO

from claim_checks import format_table, run_checks
from config import RunConfig, load_config
from csscodes import biclique_css_form, css_claim_check, css_parity_checks, format_parity_check
from entanglement import pauli_persistency
from errors import ParseError, ResourceLimit
from graphcore import FamilyKind, Graph, family
from lcequiv import lc_equivalent, lc_orbit, lulc_certificate
from reduction import reduce_to_graph, verify_rank_relations
from stabilizer import (
    CheckMatrix,
    check_msc,
    distance,
    format_check_matrix,
    graph_check_matrix,
    parse_check_matrix,
    schmidt_rank,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits on its own; surface the message to run() instead
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _ArgumentError(message)


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def load_graph(path: str) -> Graph:
    return Graph.from_json(_read(path))


def load_state(path: str) -> CheckMatrix:
    text = _read(path)
    if text.lstrip().startswith("{"):
        return graph_check_matrix(Graph.from_json(text))
    return parse_check_matrix(text)


def parse_part(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ParseError(f"--part must be comma-separated vertex indices, got {text!r}") from exc


def _dump(data: object) -> str:
    return json.dumps(data, indent=2)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    g = family(args.family, *args.params)
    fmt = args.format or ("dot" if config.output_format == "dot" else "json")
    text = g.to_dot() if fmt == "dot" else g.to_json() + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.family} with {g.n} vertices and {g.edge_count} edges to {args.out}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_lc_orbit(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    orbit = lc_orbit(load_graph(args.graph), args.up_to_perm, limit=config.orbit_limit, budget=config.orbit_budget)
    if config.output_format == "json":
        members = [{"steps": list(w.steps), "edges": [list(e) for e in w.target.edges()]} for w in orbit.witnesses.values()]
        out.write(_dump({"size": len(orbit), "up_to_perm": args.up_to_perm, "members": members}) + "\n")
        return EXIT_OK
    print(f"orbit size: {len(orbit)}", file=out)
    for w in orbit.witnesses.values():
        print(f"{w}  edges={w.target.edges()}", file=out)
    return EXIT_OK


def cmd_lc_equiv(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    witness = lc_equivalent(
        load_graph(args.first),
        load_graph(args.second),
        up_to_iso=args.up_to_iso,
        limit=config.orbit_limit,
        budget=config.orbit_budget,
    )
    if witness is None:
        print("NOT-EQUIVALENT", file=out)
        return EXIT_OK
    print(witness, file=out)
    if witness.permutation is not None:
        print(f"permutation: {list(witness.permutation)}", file=out)
    return EXIT_OK


def cmd_msc(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    print(str(check_msc(load_state(args.state), config.enumeration_limit)).lower(), file=out)
    return EXIT_OK


def cmd_distance(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    print(distance(load_state(args.state), config.enumeration_limit), file=out)
    return EXIT_OK


def cmd_pp(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    print(pauli_persistency(load_graph(args.graph), config.pp_limit), file=out)
    return EXIT_OK


def cmd_schmidt_rank(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    state = load_state(args.state)
    print(schmidt_rank(state, parse_part(args.part), config.enumeration_limit), file=out)
    return EXIT_OK


def cmd_css_biclique(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    form = biclique_css_form(args.m, args.n)
    claim = css_claim_check(args.m, args.n, config.kernel_limit)
    if config.output_format == "json":
        out.write(
            _dump(
                {
                    "generators": [str(p) for p in form.rows],
                    "distance": claim.distance,
                    "dual_distance": claim.dual_distance,
                    "branch": claim.branch,
                    "holds": claim.holds,
                }
            )
            + "\n"
        )
        return EXIT_OK
    out.write(format_check_matrix(form))
    print(f"distance: {claim.distance}", file=out)
    print(f"dual distance: {claim.dual_distance}", file=out)
    print(f"distance-2 branch: {claim.branch} ({'holds' if claim.holds else 'FAILS'})", file=out)
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    c = parse_check_matrix(_read(args.stabilizer))
    graph, trace = reduce_to_graph(c)
    if config.output_format == "json":
        gates = [[q, g.value] for q, g in trace.local_cliffords]
        out.write(_dump({"graph": json.loads(graph.to_json()), "r": trace.r, "local_cliffords": gates}) + "\n")
        return EXIT_OK
    for k, stage in enumerate(trace.stages, start=1):
        print(f"# stage {k}", file=out)
        out.write(format_check_matrix(stage))
    print(f"# support rank used: {trace.r}", file=out)
    print(f"# local Cliffords: {[(q, g.value) for q, g in trace.local_cliffords]}", file=out)
    out.write(graph.to_json() + "\n")
    return EXIT_OK


def cmd_rank_relations(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    part = parse_part(args.part) if args.part else None
    report = verify_rank_relations(load_graph(args.graph), part, config)
    if config.output_format == "json":
        data = {name: getattr(report, name) for name in report.__dataclass_fields__}
        data["all_hold"] = report.all_hold
        out.write(_dump(data) + "\n")
        return EXIT_OK
    print(f"n={report.n} r={report.r} w={report.w} |S_R|={report.support_order} k={report.schmidt_rank}", file=out)
    print(f"rank_xor={report.rank_xor} rank_rational={report.rank_rational} bp={report.bp}", file=out)
    print(f"minus-sign relation: {report.signs_relation}", file=out)
    print(f"support-group relation: {report.support_relation}", file=out)
    print(f"k <= bp <= r: {report.bp_bracket}", file=out)
    print(f"rank_xor <= rank_rational <= bp <= r: {report.rank_chain}", file=out)
    print(f"rank_rational == bp: {report.rank_rational_is_bp}", file=out)
    if report.conjecture is not None:
        print(f"trivial support group conjecture: {report.conjecture}", file=out)
    return EXIT_OK


def cmd_certify(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    cert = lulc_certificate(load_graph(args.graph), config)
    print(cert, file=out)
    if cert.witness is not None and cert.witness.steps:
        print(f"witness: {cert.witness}", file=out)
    for number, reason in sorted(cert.skipped.items()):
        print(f"skipped Result {number}: {reason}", file=out)
    return EXIT_OK


def cmd_verify_paper(args: argparse.Namespace, config: RunConfig, out: TextIO) -> int:
    if args.config_dump:
        out.write(_dump(config.model_dump()) + "\n")
    only = set(parse_part(args.only)) if args.only else None
    outcomes = run_checks(config, only)
    print(format_table(outcomes), file=out)
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_FAILURE


# ---------------------------------------------------------------------------
# Parser and entry points
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gslab", description="Graph-state local Clifford toolkit.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs")
    parser.add_argument("--format", dest="output_format", choices=["json", "dot", "text"], help="output format")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a graph family member")
    gen.add_argument("family", choices=[k.value for k in FamilyKind])
    gen.add_argument("params", nargs="+", type=int)
    gen.add_argument("--out")
    gen.add_argument("--format", dest="format", choices=["json", "dot"])
    gen.set_defaults(handler=cmd_gen)

    orbit = sub.add_parser("lc-orbit", help="enumerate the LC orbit")
    orbit.add_argument("graph")
    orbit.add_argument("--up-to-perm", action="store_true")
    orbit.set_defaults(handler=cmd_lc_orbit)

    equiv = sub.add_parser("lc-equiv", help="decide LC equivalence with a witness")
    equiv.add_argument("first")
    equiv.add_argument("second")
    equiv.add_argument("--up-to-iso", action="store_true")
    equiv.set_defaults(handler=cmd_lc_equiv)

    for name, handler, help_text in (
        ("msc", cmd_msc, "check the minimal support condition"),
        ("distance", cmd_distance, "stabilizer distance"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("state")
        p.set_defaults(handler=handler)

    pp = sub.add_parser("pp", help="Pauli persistency")
    pp.add_argument("graph")
    pp.set_defaults(handler=cmd_pp)

    schmidt = sub.add_parser("schmidt-rank", help="Schmidt rank across a cut")
    schmidt.add_argument("state")
    schmidt.add_argument("--part", required=True)
    schmidt.set_defaults(handler=cmd_schmidt_rank)

    css = sub.add_parser("css-biclique", help="biclique state as a CSS code")
    css.add_argument("m", type=int)
    css.add_argument("n", type=int)
    css.add_argument("--matrices", action="store_true", help="also print H(C) and H(C_perp) as 0/1 rows")
    css.set_defaults(handler=cmd_css_biclique)

    reduce = sub.add_parser("reduce", help="reduce a stabilizer to graph form")
    reduce.add_argument("stabilizer")
    reduce.set_defaults(handler=cmd_reduce)

    rel = sub.add_parser("verify-rank-relations", help="rank and minus-sign relations of a bipartite cut")
    rel.add_argument("graph")
    rel.add_argument("--part")
    rel.set_defaults(handler=cmd_rank_relations)

    cert = sub.add_parser("certify", help="LU <=> LC certificate")
    cert.add_argument("graph")
    cert.set_defaults(handler=cmd_certify)

    verify = sub.add_parser("verify-paper", help="run the regression table")
    verify.add_argument("--only", help="comma-separated check numbers")
    verify.add_argument("--config-dump", action="store_true", help="print the effective configuration first")
    verify.set_defaults(handler=cmd_verify_paper)
    return parser


def _configure_logging(verbosity: int, err: TextIO) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=err, format="%(levelname)s %(name)s: %(message)s", force=True)


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    """Parse ``argv``, run one command and return its exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _ArgumentError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    _configure_logging(args.verbose, err)

    handler: Callable[[argparse.Namespace, RunConfig, TextIO], int] = args.handler
    try:
        config = load_config(output_format=args.output_format)
        return handler(args, config, out)
    except ResourceLimit as exc:
        print(f"error: {exc}", file=err)
        return EXIT_LIMIT
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except RuntimeError as exc:
        logger.exception("command %s failed", args.command)
        print(f"error: {exc}", file=err)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover - manual usage
    main()
