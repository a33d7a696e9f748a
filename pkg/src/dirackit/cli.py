"""Command-line front end.

Exit codes: 0 success, 1 unreadable or malformed model file, 2 algorithm
failure (generation cap, inconsistency, closure), 3 unsupported input for
the requested operation.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .corpus import CORPUS, observed
from .dirac import DEFAULT_MAX_GENERATIONS, run_algorithm
from .errors import AlgorithmError, DiracKitError, ModelError, UnsupportedError
from .model import load_model, parse_model
from .quantize import build_rep
from .report import SCHEMA_VERSION, build_report, render_text, to_json
from .symbolic import DEFAULT_DEGREE_CAP

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_ALGORITHM = 2
EXIT_UNSUPPORTED = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirackit",
        description="Constraint analysis and lattice quantization of polynomial Lagrangians.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="run the constraint algorithm on a model file")
    pa.add_argument("file")
    pa.add_argument("--json", metavar="PATH", help="also write the JSON report to PATH")
    pa.add_argument("--max-gen", type=int, default=DEFAULT_MAX_GENERATIONS, metavar="K")
    pa.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP, metavar="D")

    pq = sub.add_parser("quantize", help="analyze, then check the quantization on a lattice")
    pq.add_argument("file")
    pq.add_argument("--sites", type=int, required=True, metavar="N")
    pq.add_argument("--hbar", type=float, default=1.0, metavar="X")
    pq.add_argument("--json", metavar="PATH")
    pq.add_argument("--max-gen", type=int, default=DEFAULT_MAX_GENERATIONS, metavar="K")
    pq.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP, metavar="D")

    pc = sub.add_parser("corpus", help="list bundled models and their expected results")
    pc.add_argument("--json", metavar="PATH")
    pc.add_argument("--verify", action="store_true", help="rerun each model and compare")
    return parser


def _err(msg: str) -> None:
    print(f"dirackit: {msg}", file=sys.stderr)


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load(path: str):
    try:
        return load_model(path)
    except ModelError as exc:
        _err(f"{path}:{exc.line}:{exc.column}: {exc.message}")
    except OSError as exc:
        _err(f"cannot read {path}: {exc.strerror or exc}")
    return None


def cmd_analyze(args, quantize: bool = False) -> int:
    model = _load(args.file)
    if model is None:
        return EXIT_PARSE
    try:
        analysis = run_algorithm(model, max_gen=args.max_gen, degree_cap=args.degree_cap)
    except (AlgorithmError, UnsupportedError) as exc:
        _err(str(exc))
        return EXIT_ALGORITHM
    rep = None
    if quantize:
        try:
            rep = build_rep(model.dim, args.sites, args.hbar)
        except ValueError as exc:
            _err(str(exc))
            return EXIT_UNSUPPORTED
    try:
        doc = build_report("quantize" if quantize else "analyze", analysis, rep)
    except UnsupportedError as exc:
        _err(str(exc))
        return EXIT_UNSUPPORTED
    except DiracKitError as exc:
        _err(str(exc))
        return EXIT_ALGORITHM
    sys.stdout.write(render_text(doc))
    if args.json:
        _write(args.json, to_json(doc))
    return EXIT_OK


def cmd_corpus(args) -> int:
    entries = []
    status = EXIT_OK
    for e in CORPUS:
        item = {"name": e.name, "feature": e.feature, "source": e.source, "expected": e.expected()}
        if args.verify:
            got = observed(run_algorithm(parse_model(e.source)))
            item["matches"] = got == e.expected()
            if not item["matches"]:
                item["observed"] = got
                status = EXIT_ALGORITHM
        entries.append(item)
    for item in entries:
        x = item["expected"]
        line = (f"{item['name']:14s} J={x['J']} N={x['N']} S={x['S']} P={x['P']} "
                f"dof={x['dof']}  {item['feature']}")
        if "matches" in item:
            line += "  [ok]" if item["matches"] else "  [MISMATCH]"
        print(line)
    if args.json:
        _write(args.json, json.dumps({"schema": SCHEMA_VERSION, "command": "corpus",
                                      "models": entries}, indent=2) + "\n")
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "analyze":
        return cmd_analyze(args)
    if args.command == "quantize":
        return cmd_analyze(args, quantize=True)
    return cmd_corpus(args)


if __name__ == "__main__":
    sys.exit(main())
