"""Command-line entry point.

Exit codes: 0 success, 1 analysis error (infeasible or inconsistent input),
2 usage or parse error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Callable, Optional, Sequence

from . import catalog, gridworld
from .choices import ChoiceError
from .covering import CoverError
from .io import (DocumentError, dump_json, model_to_document, parse_choices, parse_feedback,
                 parse_model, serialize_model)
from .lattice import LatticeError
from .linalg import LinalgError
from .models import InfeasibleFeedback, ModelError

EXIT_OK, EXIT_ANALYSIS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load_model(path: str):
    return parse_model(_read(path))


def _cmd_analyze(args) -> dict:
    doc = _load_model(args.model)
    report = {"analysis": catalog.analysis_report(doc.model)}
    feedback = doc.feedback
    if args.feedback:
        feedback = parse_feedback(_read(args.feedback), doc.model.observations)
    if feedback is not None:
        report["inference"] = catalog.inference_report(doc.model, feedback)
    return report


def _cmd_infer(args) -> dict:
    doc = _load_model(args.model)
    M = doc.model
    feedback = parse_feedback(_read(args.feedback), M.observations) if args.feedback else doc.feedback
    choices = parse_choices(_read(args.choices), M.observations) if args.choices else doc.choices
    if feedback is None and choices is None:
        raise UsageError("infer needs --feedback or --choices (or a model document carrying one)")
    report = {}
    if feedback is not None:
        report["inference"] = catalog.inference_report(M, feedback)
    if choices is not None:
        report["choice_inference"] = catalog.choice_report(M, choices)
    return report


def _cmd_cover(args) -> dict:
    true = _load_model(getattr(args, "true")).model
    hat = _load_model(args.hat).model
    return catalog.cover_json(true, hat)


def _cmd_gridworld(args) -> dict:
    return catalog.gridworld_report()


def _cmd_lattice(args) -> dict:
    return catalog.lattice_report(args.seed)


def _cmd_reproduce(args) -> dict:
    return catalog.reproduce(args.example)


def _fixture_models() -> dict[str, Callable]:
    def grid(i):
        return lambda: gridworld.build_three_models()[i]

    def pair(name, side, **kw):
        return lambda: getattr(catalog.build_fixture(name, **kw), side)

    out = {
        "alice4": lambda: catalog.build_fixture("ALICE4"),
        "alice3": lambda: catalog.build_fixture("ALICE3"),
        "code4": lambda: catalog.build_fixture("CODE4"),
        "code5": lambda: catalog.build_fixture("CODE5"),
        "grid-m1": grid(0),
        "grid-m2": grid(1),
        "grid-m3": grid(2),
    }
    for name in ("e1", "e3"):
        out[f"{name}-true"] = pair(name, "true")
        out[f"{name}-hat"] = pair(name, "hat")
    for tag, spanning in (("e2", True), ("e2-narrow", False)):
        out[f"{tag}-true"] = pair("E2", "true", spanning=spanning)
        out[f"{tag}-hat"] = pair("E2", "hat", spanning=spanning)
    return out


FIXTURE_MODELS = _fixture_models()


def _cmd_fixture(args) -> str:
    model = FIXTURE_MODELS[args.name]()
    feedback = catalog.ALICE_FEEDBACK if args.name == "alice4" else None
    return serialize_model(model_to_document(model, name=args.name, feedback=feedback))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit machine-readable JSON")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="print nothing; report through the exit code only")

    p = argparse.ArgumentParser(prog="beliefmodels", parents=[common],
                                description="Exact ambiguity analysis for human belief models.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="completeness, faithfulness, ambiguity")
    a.add_argument("--model", required=True)
    a.add_argument("--feedback")
    a.set_defaults(run=_cmd_analyze)

    i = sub.add_parser("infer", parents=[common], help="infer the return function from feedback")
    i.add_argument("--model", required=True)
    i.add_argument("--feedback")
    i.add_argument("--choices")
    i.set_defaults(run=_cmd_infer)

    c = sub.add_parser("cover", parents=[common], help="decide whether one model covers another")
    c.add_argument("--true", required=True)
    c.add_argument("--hat", required=True)
    c.set_defaults(run=_cmd_cover)

    g = sub.add_parser("gridworld", parents=[common], help="symmetric gridworld analysis")
    g.set_defaults(run=_cmd_gridworld)

    lt = sub.add_parser("lattice", parents=[common], help="ambiguity lattice on a random instance")
    lt.add_argument("--seed", type=int, default=0)
    lt.set_defaults(run=_cmd_lattice)

    r = sub.add_parser("reproduce", parents=[common], help="rerun a worked example")
    r.add_argument("example", choices=sorted(catalog.REPRODUCIBLE))
    r.set_defaults(run=_cmd_reproduce)

    f = sub.add_parser("fixture", parents=[common], help="write a fixture model document")
    f.add_argument("name", choices=sorted(FIXTURE_MODELS))
    f.set_defaults(run=_cmd_fixture)
    return p


def run_command(argv: Sequence[str], out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    as_json = getattr(args, "json", False)
    quiet = getattr(args, "quiet", False)
    try:
        result = args.run(args)
    except (UsageError, DocumentError) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except (InfeasibleFeedback, ChoiceError, CoverError, LatticeError, ModelError,
            LinalgError) as e:
        print(f"analysis error: {e}", file=err)
        return EXIT_ANALYSIS
    if quiet:
        return EXIT_OK
    if isinstance(result, str):
        out.write(result)
    elif as_json:
        out.write(dump_json(result))
    else:
        out.write(catalog.render_text(result) + "\n")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
