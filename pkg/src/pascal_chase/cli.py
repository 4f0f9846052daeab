"""Command-line interface: ``pascal-chase list|verify|prove|check|render|oracle``.

Exit status is 0 when everything verified or checked, 1 when a verification
failure was found, and 2 for usage and input/output errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    """An error reported to the user with exit status 2."""


def _param(text: str) -> tuple[str, int]:
    name, sep, value = text.partition("=")
    name = name.strip()
    if not sep or not name.isidentifier():
        raise argparse.ArgumentTypeError(f"expected NAME=INT, got {text!r}")
    try:
        return name, int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer value in {text!r}") from None


def _params(pairs) -> dict[str, int]:
    out: dict[str, int] = {}
    for name, value in pairs or ():
        if name in out:
            raise CliError(f"parameter {name} given twice")
        out[name] = value
    return out


def _emit(args, payload: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pascal-chase",
        description="Prove and verify binomial identities by moving weights through Pascal's triangle.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    add("list", "list the theorem catalog")

    p = add("verify", "check identities exactly over parameter ranges")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--id", help="catalog identity id")
    src.add_argument("--file", type=Path, help="file with one identity per line")
    src.add_argument("--spec", type=Path, help="TOML sweep spec")
    p.add_argument("--range", dest="ranges", action="append", metavar="NAME=LO..HI",
                   help='parameter range, e.g. "m=0..n"; repeat for each parameter')
    p.add_argument("--bound", type=int, default=25,
                   help="upper bound for the catalog's default ranges (with --id, no --range)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-instances", type=int)
    p.add_argument("--time-budget", type=float, metavar="SECONDS")
    p.add_argument("--fib", choices=("signed", "zero", "mirror"), default="signed",
                   help="Fibonacci convention for negative indices")

    p = add("prove", "generate and check a proof certificate")
    p.add_argument("--id", required=True)
    p.add_argument("--param", type=_param, action="append", metavar="NAME=INT")
    p.add_argument("--out", type=Path, required=True)

    p = add("check", "replay and check a certificate")
    p.add_argument("--cert", type=Path, required=True)

    p = add("render", "draw a certificate (one panel per step) or a figure")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--cert", type=Path)
    src.add_argument("--figure", help="figure name, or 'all'")
    p.add_argument("--format", choices=("svg", "tikz"), default="svg")
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--cell-size", type=float, default=40.0)
    p.add_argument("--labels", choices=("weights", "binomial", "both"), default="weights")

    p = add("oracle", "compare the identity language with the independent oracle")
    p.add_argument("--id", required=True)
    p.add_argument("--param", type=_param, action="append", metavar="NAME=INT")
    return parser


# -- commands -------------------------------------------------------------------------------


def cmd_list(args) -> int:
    from .scripts import catalog_list

    entries = [e.summary() for e in catalog_list()]
    lines = []
    for e in entries:
        lines.append(f"{e['id']:<20} {e['figure']:<32} {e['identity']}")
    _emit(args, {"theorems": entries}, lines)
    return EXIT_OK


def _verify_specs(args):
    from .harness import SweepSpec, load_sweep_toml
    from .lang import parse_identity_file
    from .scripts import CATALOG_TEXT, builtin_ranges

    options = dict(workers=args.workers, max_instances=args.max_instances,
                   time_budget=args.time_budget, fib=args.fib)
    if args.spec:
        spec = load_sweep_toml(_read(args.spec))
        return [spec]
    if args.id:
        if args.id not in CATALOG_TEXT:
            raise CliError(f"unknown identity id {args.id!r}")
        ranges = args.ranges or builtin_ranges(args.id, args.bound)
        return [SweepSpec.build(args.id, ranges, **options)]
    if not args.ranges:
        raise CliError("--file needs --range for every parameter")
    return [SweepSpec.build(ast, args.ranges, **options)
            for ast in parse_identity_file(_read(args.file))]


def cmd_verify(args) -> int:
    from .harness import sweep

    reports = [sweep(spec) for spec in _verify_specs(args)]
    lines = []
    for rep in reports:
        lines.append(f"{rep.identity}: {rep.summary()} ({rep.total} instances)")
        for f in rep.failures:
            binding = ", ".join(f"{k}={v}" for k, v in f.bindings.items())
            lines.append(f"  FAIL {binding}: lhs {f.lhs} != rhs {f.rhs}")
    payload = {"reports": [r.to_dict() for r in reports]}
    _emit(args, payload, lines)
    if any(r.failed for r in reports):
        return EXIT_FAIL
    return EXIT_OK


def cmd_prove(args) -> int:
    from .harness import Certificate
    from .scripts import generate_script

    script = generate_script(args.id, _params(args.param))
    cert = Certificate.from_script(script)
    report = cert.check()
    _write(args.out, cert.dumps())
    _emit(args, {"theorem_id": cert.theorem_id, "valid": report.valid,
                 "summary": report.summary(), "steps": len(cert.steps), "out": str(args.out)},
          [f"{cert.theorem_id}: {report.summary()} ({len(cert.steps)} steps)",
           f"wrote {args.out}"])
    return EXIT_OK if report.valid else EXIT_FAIL


def _load_cert(path: Path):
    from .harness import Certificate

    return Certificate.loads(_read(path))


def cmd_check(args) -> int:
    cert = _load_cert(args.cert)
    report = cert.check()
    payload = {"theorem_id": cert.theorem_id, "valid": report.valid,
               "summary": report.summary(), "steps": len(cert.steps)}
    if report.valid:
        payload["value"] = str(report.value)
    else:
        f = report.failure
        payload["failure"] = {"step": f.step, "reason": f.reason,
                              "expected": f.expected, "actual": f.actual}
    _emit(args, payload, [f"{cert.theorem_id}: {report.summary()}"])
    return EXIT_OK if report.valid else EXIT_FAIL


def cmd_render(args) -> int:
    from .chase import WeightedConfig, check_script
    from .render import (FIGURES, RenderOptions, figure_trace, render_figure,
                         render_script_svg, render_tikz)

    options = RenderOptions(cell_size=args.cell_size, label_mode=args.labels)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    files: list[tuple[str, str]] = []
    if args.figure:
        names = sorted(FIGURES) if args.figure == "all" else [args.figure]
        for name in names:
            if name not in FIGURES:
                raise CliError(f"unknown figure {name!r}; choose from {', '.join(sorted(FIGURES))}")
            if args.format == "svg":
                files.append((f"{name}.svg", render_figure(name, options)))
            else:
                t = figure_trace(name)
                files.append((f"{name}.tex", render_tikz(WeightedConfig(t.labels), options)))
    else:
        cert = _load_cert(args.cert)
        script = cert.to_script()
        if args.format == "svg":
            for i, panel in enumerate(render_script_svg(script, options)):
                files.append((f"{cert.theorem_id}_{i:03d}.svg", panel))
        else:
            report = check_script(script)
            if not report.valid:
                raise CliError(f"cannot render an invalid script: {report.summary()}")
            for i, config in enumerate(script.replay()):
                files.append((f"{cert.theorem_id}_{i:03d}.tex", render_tikz(config, options)))
    for name, text in files:
        _write(args.out_dir / name, text)
    _emit(args, {"files": [str(args.out_dir / n) for n, _ in files]},
          [f"wrote {len(files)} file(s) to {args.out_dir}"])
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .harness import oracle_report
    from .scripts import CATALOG_TEXT, builtin_identity

    if args.id not in CATALOG_TEXT:
        raise CliError(f"unknown identity id {args.id!r}")
    params = _params(args.param)
    expected = builtin_identity(args.id).params
    if sorted(params) != sorted(expected):
        raise CliError(f"{args.id} takes parameters {', '.join(expected)}")
    values = oracle_report(args.id, params)
    agree = values["dsl_lhs"] == values["oracle_lhs"]
    holds = values["dsl_lhs"] == values["dsl_rhs"]
    payload = {k: str(v) for k, v in values.items()}
    payload.update(agree=agree, holds=holds)
    _emit(args, payload, [
        f"identity language, left side : {values['dsl_lhs']}",
        f"identity language, right side: {values['dsl_rhs']}",
        f"oracle, left side            : {values['oracle_lhs']}",
        "paths agree" if agree else "PATHS DISAGREE",
    ])
    return EXIT_OK if agree and holds else EXIT_FAIL


COMMANDS = {
    "list": cmd_list,
    "verify": cmd_verify,
    "prove": cmd_prove,
    "check": cmd_check,
    "render": cmd_render,
    "oracle": cmd_oracle,
}


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    from .harness import CertificateError, SweepSpecError
    from .lang import EvalError, ParseError
    from .render import RenderError
    from .scripts import ScriptError

    try:
        return COMMANDS[args.command](args)
    except (CliError, CertificateError, SweepSpecError, ScriptError, ParseError, EvalError,
            RenderError, ValueError) as exc:
        # plain ValueError covers e.g. the triangle row cap
        print(f"pascal-chase {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
