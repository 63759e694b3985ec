# cli.py
import argparse
import sys
from typing import List, Optional

import orjson
import structlog

from config import get_settings, settings, using
from middleware.logging import setup_logging
from models.documents import ComplexDocument
from models.errors import DetFacetError, VerificationFailed
from services.decompose_service import MODES
from services.report_service import BETTI_METHODS, Invocation, ReportService, prepare

logger = structlog.get_logger()

EXIT_CODES = """\
exit codes:
  0  success; every requested verification passed
  1  a requested verification ran and failed
  2  malformed JSON or a document outside the ComplexDocument schema
  3  layout, configuration or argument error (bad order, field, modulus, m > n)
  4  structural precondition failed (not block adjacent, forest conditions, bad prime sequence)
  5  resource limit reached (--limit-steps, --limit-perm, Taylor cap); partial report attached
  6  unsupported clique shape or non-linear colon step
"""


def _emit(payload, args):
    option = orjson.OPT_INDENT_2 if getattr(args, "pretty", False) else 0
    sys.stdout.write(orjson.dumps(payload, option=option).decode() + "\n")


def _invocation(args) -> Invocation:
    document = ComplexDocument.load(args.document)
    return prepare(document, field=args.field, order=args.order, limit_steps=args.limit_steps,
                   limit_perm=args.limit_perm, seed=getattr(args, "seed", None),
                   trials=getattr(args, "trials", None))


def cmd_analyze(args) -> int:
    _emit(ReportService.analyze(_invocation(args)), args)
    return 0


def cmd_decompose(args) -> int:
    payload, passed = ReportService.decompose(_invocation(args), args.mode, args.verify, args.candidate or ())
    _emit(payload, args)
    if passed is False:
        raise VerificationFailed("Decomposition did not verify", verdict="fail")
    return 0


def cmd_betti(args) -> int:
    payload, tables = ReportService.betti(_invocation(args), args.method)
    if args.pretty:
        for name, table in tables.items():
            sys.stdout.write(f"-- {name}\n{table.render()}\n")
        for name, error in payload["errors"].items():
            sys.stdout.write(f"-- {name}: {error['error']}: {error['message']}\n")
        if "agreement" in payload:
            names = list(payload["agreement"])
            agree = all(payload["agreement"][a][b] for a in names for b in names)
            sys.stdout.write(f"-- agreement across {', '.join(names)}: {'yes' if agree else 'no'}\n")
        return 0
    _emit(payload, args)
    return 0


def cmd_gb(args) -> int:
    _emit(ReportService.gb(_invocation(args)), args)
    return 0


def cmd_hilbert(args) -> int:
    _emit(ReportService.hilbert(_invocation(args)), args)
    return 0


def cmd_probe_universal(args) -> int:
    _emit(ReportService.probe(_invocation(args), args.trials, args.seed, args.graded), args)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    logger.info("🚀 [HTTP] Starting API", host=args.host, port=args.port)
    uvicorn.run("main:app", host=args.host, port=args.port, log_level=args.log_level.lower())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help='coefficient field: "rational" or "prime:P" (default prime:32003)')
    common.add_argument("--order", help='0-based variable ids, largest first, or "cols:" plus a column permutation')
    common.add_argument("--limit-steps", type=int, help="reduction step bound for Buchberger runs")
    common.add_argument("--limit-perm", type=int, help="vertex bound for the closed-labeling search")
    common.add_argument("--pretty", action="store_true", help="human-readable output")
    common.add_argument("--workers", type=int, help="threads for independent verifications")
    common.add_argument("--log-level", default=None, help="WARNING by default; logs go to stderr")

    parser = argparse.ArgumentParser(
        prog="detfacet",
        description="Determinantal facet ideals: Groebner bases, prime decompositions, Betti tables",
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command")

    analyze_p = subparsers.add_parser("analyze", parents=[common],
                                      help="Cliques, closedness, block structure and intersection graphs")
    analyze_p.add_argument("document")
    analyze_p.set_defaults(handler=cmd_analyze)

    decompose_p = subparsers.add_parser("decompose", parents=[common], epilog=EXIT_CODES,
                                        formatter_class=argparse.RawDescriptionHelpFormatter,
                                        help="Candidate minimal primes from prime sequences")
    decompose_p.add_argument("document")
    decompose_p.add_argument("--mode", choices=MODES, default="auto")
    decompose_p.add_argument("--verify", action="store_true",
                             help="certify containment, minimality and the intersection")
    decompose_p.add_argument("--candidate", action="append",
                             help='extra prime given by bracket minors, e.g. "[12|56],[1|6]"; repeatable')
    decompose_p.set_defaults(handler=cmd_decompose)

    betti_p = subparsers.add_parser("betti", parents=[common], help="Graded Betti tables")
    betti_p.add_argument("document")
    betti_p.add_argument("--method", choices=[*BETTI_METHODS, "all"], default="all")
    betti_p.set_defaults(handler=cmd_betti)

    gb_p = subparsers.add_parser("gb", parents=[common], help="Groebner property of the facet minors")
    gb_p.add_argument("document")
    gb_p.set_defaults(handler=cmd_gb)

    hilbert_p = subparsers.add_parser("hilbert", parents=[common],
                                      help="Hilbert series, height and multiplicity with formula checks")
    hilbert_p.add_argument("document")
    hilbert_p.set_defaults(handler=cmd_hilbert)

    probe_p = subparsers.add_parser("probe-universal", parents=[common],
                                    help="Groebner property under seeded random term orders")
    probe_p.add_argument("document")
    probe_p.add_argument("--trials", type=int)
    probe_p.add_argument("--seed", type=int)
    probe_p.add_argument("--graded", action="store_true", help="draw degree-compatible orders")
    probe_p.set_defaults(handler=cmd_probe_universal)

    serve_p = subparsers.add_parser("serve", help="Run the HTTP API")
    serve_p.add_argument("--host", default=settings.api_host)
    serve_p.add_argument("--port", type=int, default=settings.api_port)
    serve_p.add_argument("--log-level", default=settings.log_level)
    serve_p.set_defaults(handler=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 0

    base = get_settings()
    try:
        base = base.override(log_level=args.log_level, workers=getattr(args, "workers", None))
    except ValueError as e:
        sys.stderr.write(f"{e}\n")
        return 3
    setup_logging(base.log_level)
    structlog.contextvars.bind_contextvars(command=args.command)

    with using(base):
        try:
            return args.handler(args)
        except DetFacetError as e:
            if not isinstance(e, VerificationFailed):
                _emit(e.to_dict(), args)
            logger.info("🛑 [CLI] Command failed", command=args.command, error=type(e).__name__,
                        exit_code=e.exit_code)
            return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
