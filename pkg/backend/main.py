import argparse
import json
import logging
import sys
from typing import Dict, List, Optional, Sequence

import pandas as pd

from core.errors import Cohom1Error
from core.types import FAMILY_TAGS, Settings, VerdictRecord
from dsl.parser import DiagramSource
from oracles.isotropy import ActionParams
from services.catalog import CatalogService
from services.oracle import OracleService
from services.sweep import SweepService
from topology.diagram import FamilyInstance
from workflow import run_pipeline

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVALID = 2
EXIT_DISAGREE = 3


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "jsonl"], default="table")
    common.add_argument("--max", type=int, default=None, help="cap on sweep bounds")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized oracles")
    common.add_argument("--tolerance", type=float, default=None, help="relative singular value cut")

    parser = argparse.ArgumentParser(prog="cohom1", description="Group diagrams of simply connected cohomogeneity one 6-manifolds")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("validate", "classify"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("paths", nargs="+", help="diagram documents, - for standard input")

    p = sub.add_parser("sweep", parents=[common])
    p.add_argument("family", choices=FAMILY_TAGS)
    p.add_argument("--bound", type=int, required=True)

    p = sub.add_parser("oracle", parents=[common])
    p.add_argument("kind")
    p.add_argument("--family", choices=FAMILY_TAGS)
    p.add_argument("-p", type=int)
    p.add_argument("-q", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("--so", type=int, default=3)
    p.add_argument("--blocks", type=_int_list, default=None, metavar="W1,W2",
                   help="rotation block weights; a list starting with a minus sign needs the = form, --blocks=-4,4")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--param", action="append", default=[], metavar="NAME=INT",
                   help="family parameter, repeatable (N6A: r, s, a_minus, ...)")

    sub.add_parser("catalog", parents=[common])
    return parser


def _settings(args) -> Settings:
    settings = Settings.from_env()
    if args.max is not None:
        settings.sweep_max = args.max
    if args.seed is not None:
        settings.seed = args.seed
    if args.tolerance is not None:
        settings.rank_tolerance = args.tolerance
    if getattr(args, "samples", None) is not None:
        settings.samples = args.samples
    return settings


def _read_sources(paths: Sequence[str]) -> List[DiagramSource]:
    sources = []
    for path in paths:
        if path == "-":
            sources.append(DiagramSource(sys.stdin.read(), "<stdin>"))
        else:
            with open(path, encoding="utf-8") as fh:
                sources.append(DiagramSource(fh.read(), path))
    return sources


def _records_frame(records: Sequence[VerdictRecord], columns: Optional[List[str]] = None) -> pd.DataFrame:
    rows = []
    for rec in records:
        rows.append({
            "family": rec.family,
            "params": ", ".join(f"{k}={v}" for k, v in rec.params.items()),
            "valid": rec.valid,
            "violations": "; ".join(rec.violations),
            "verdict": rec.verdict.description if rec.verdict else "",
            "pi1_P": rec.pi1_P or "",
        })
    frame = pd.DataFrame(rows, columns=["family", "params", "valid", "violations", "verdict", "pi1_P"])
    return frame[columns] if columns else frame


def _emit(records: Sequence[VerdictRecord], fmt: str, columns: Optional[List[str]] = None):
    if fmt == "jsonl":
        for rec in records:
            print(rec.model_dump_json())
    elif records:
        print(_records_frame(records, columns).to_string(index=False))


def _family_from_args(args) -> FamilyInstance:
    params: Dict[str, int] = {}
    for name in ("p", "q", "n"):
        if getattr(args, name) is not None:
            params[name] = getattr(args, name)
    for item in args.param:
        name, _, value = item.partition("=")
        try:
            params[name.strip()] = int(value)
        except ValueError:
            raise Cohom1Error(f"--param expects NAME=INT, got {item!r}")
    if args.family is None:
        raise Cohom1Error("--family is required for this oracle")
    try:
        return FamilyInstance(args.family, params)
    except ValueError as e:
        raise Cohom1Error(str(e))


def cmd_validate(args, settings: Settings) -> int:
    state = run_pipeline(_read_sources(args.paths))
    return _finish(state, args.format, ["family", "params", "valid", "violations"])


def cmd_classify(args, settings: Settings) -> int:
    state = run_pipeline(_read_sources(args.paths))
    return _finish(state, args.format)


def _finish(state, fmt: str, columns: Optional[List[str]] = None) -> int:
    _emit(state.records, fmt, columns)
    for error in state.errors:
        print(error, file=sys.stderr)
    if state.input_failures:
        return EXIT_INPUT
    if any(not rec.valid for rec in state.records):
        return EXIT_INVALID
    return EXIT_OK


def cmd_sweep(args, settings: Settings) -> int:
    records = SweepService(settings).run(args.family, args.bound)
    _emit(records, args.format)
    return EXIT_OK


def cmd_oracle(args, settings: Settings) -> int:
    service = OracleService(settings)
    if args.kind == "loop":
        if args.blocks is None:
            raise Cohom1Error("--blocks is required for the loop oracle")
        report = service.run("loop", k=args.so, blocks=args.blocks)
    elif args.kind == "isotropy":
        f = _family_from_args(args)
        report = service.run("isotropy", params=ActionParams.from_family(f))
    elif args.kind in ("euler", "intersect"):
        report = service.run(args.kind, family=_family_from_args(args))
    else:
        report = service.run(args.kind)
    print(report)
    return EXIT_OK if report.agree else EXIT_DISAGREE


def cmd_catalog(args, settings: Settings) -> int:
    service = CatalogService()
    if args.format == "jsonl":
        for row in service.rows():
            print(json.dumps(row, ensure_ascii=False))
    else:
        print(service.table().to_string(index=False))
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "catalog": cmd_catalog,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    settings = _settings(args)
    logging.basicConfig(
        format='%(asctime)s %(message)s',
        datefmt='%m/%d/%Y %I:%M:%S %p',
        level=getattr(logging, settings.log_level.upper(), logging.WARNING),
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args, settings)
    except (Cohom1Error, OSError) as e:
        print(f"cohom1 {args.command}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
