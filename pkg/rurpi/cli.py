from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from .config import SolveConfig, get_settings
from .errors import (
    EmptyVariety,
    NoSeparatingForm,
    NotZeroDimensional,
    ReconstructionFailed,
    UsageError,
)
from .executor import shutdown_executor
from .models.document import RurDocument
from .models.rur import CertStatus
from .parser import format_system, parse_system
from .services.driver import SolverService
from .systems import SYSTEM_FAMILIES, generate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CERTIFICATION = 2
EXIT_NOT_ZERO_DIMENSIONAL = 3
EXIT_GAVE_UP = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rurpi",
        description="Certified rational univariate representations of polynomial systems.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="More logging on stderr (repeatable)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Compute and certify a representation")
    solve.add_argument("input", nargs="?", default="-", help="System file, '-' for stdin")
    solve.add_argument("--threads", type=int, help="Primes computed concurrently")
    solve.add_argument(
        "--certify", type=int, dest="certify_mode",
        help="0 skips, 1 checks all, N>1 checks equations of degree < N",
    )
    solve.add_argument("--cert-threads", type=int, help="Concurrent equation checks")
    solve.add_argument("--confirm", type=int, dest="confirm_extra", help="Extra confirming primes")
    solve.add_argument("--seed", type=int, help="Random seed (default: RUR_SEED)")
    solve.add_argument("--isolate", action="store_true", help="Isolate real solutions")
    solve.add_argument("--precision", type=int, help="Solution box width 2^-K")
    solve.add_argument("--executor", choices=["process", "thread"])
    solve.add_argument("--hankel", choices=["gauss", "fast"], dest="hankel_method")
    solve.add_argument("--giac", action="store_true", help="Add a Giac-style list to the output")
    solve.add_argument("--gbasis", type=int, help=argparse.SUPPRESS)

    gen = sub.add_parser("generate", help="Print a benchmark system")
    gen.add_argument("family", choices=sorted(SYSTEM_FAMILIES))
    gen.add_argument("size", type=int)

    echo = sub.add_parser("echo", help="Parse a system and print it in canonical form")
    echo.add_argument("input", nargs="?", default="-")

    sub.add_parser("schema", help="Print the JSON schema of the result document")
    return parser


def _configure_logging(verbose: int) -> None:
    if verbose >= 2:
        level: int | str = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = get_settings().log_level.upper()
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(name)s %(message)s"
    )


def _read_input(path: str) -> tuple[str, str]:
    source = "<stdin>" if path == "-" else path
    try:
        if path == "-":
            return sys.stdin.read(), source
        return Path(path).read_text(encoding="utf-8"), source
    except UnicodeDecodeError as exc:
        raise UsageError(f"{source} is not UTF-8 text: {exc.reason}") from exc


def _option_error(exc: ValidationError) -> UsageError:
    problems = "; ".join(
        f"{'.'.join(str(part) for part in e['loc'])}: {e['msg']}" for e in exc.errors()
    )
    return UsageError(f"invalid option: {problems}")


def emit_result(document: RurDocument) -> str:
    return document.model_dump_json(indent=2, exclude_none=True)


def _solve(args: argparse.Namespace) -> int:
    if args.gbasis is not None:
        raise UsageError("--gbasis is reserved: reconstruction over Q of the basis is not supported")
    text, source = _read_input(args.input)
    system = parse_system(text, source)
    try:
        config = SolveConfig.from_settings(
            get_settings(),
            threads=args.threads,
            certify_mode=args.certify_mode,
            cert_threads=args.cert_threads,
            confirm_extra=args.confirm_extra,
            seed=args.seed,
            isolate=args.isolate or None,
            precision=args.precision,
            executor=args.executor,
            hankel_method=args.hankel_method,
        )
    except ValidationError as exc:
        raise _option_error(exc) from exc
    try:
        document = asyncio.run(SolverService().solve_document(system, config, giac=args.giac))
    finally:
        shutdown_executor()
    print(emit_result(document))
    if document.certification == CertStatus.FAILED:
        logger.warning("certification failed source=%s", source)
        return EXIT_CERTIFICATION
    return EXIT_OK


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "solve":
        return _solve(args)
    if args.command == "generate":
        print(format_system(generate(args.family, args.size)), end="")
    elif args.command == "echo":
        text, source = _read_input(args.input)
        print(format_system(parse_system(text, source)), end="")
    elif args.command == "schema":
        print(json.dumps(RurDocument.model_json_schema(), indent=2))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        _configure_logging(args.verbose)
        return _dispatch(args)
    except ValidationError as exc:
        # malformed RUR_* environment
        print(f"error: {_option_error(exc)}", file=sys.stderr)
        return EXIT_USAGE
    except (NotZeroDimensional, EmptyVariety) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_ZERO_DIMENSIONAL
    except (NoSeparatingForm, ReconstructionFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GAVE_UP
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
