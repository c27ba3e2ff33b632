"""Command-line interface.

Commands
--------
verify-example NAME   recompute a built-in gallery item and diff it against
                      its embedded expectations (one line per checked field)
classify TARGET       run the full verdict battery on a gallery item or a
                      JSON construction file
construct SPECFILE    build an immersion from a JSON construction file and
                      emit a per-point table of induced data
sample TARGET         emit immersion values only (no induced data)

TARGET is either a gallery name or a path to a JSON construction file with
a ``family`` of ``"centroaffine"`` or ``"sphere"``.

Exit codes: 0 success, 1 usage or input error, 2 validation failure,
3 output I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .classify import GridSpec, Tolerances, classify
from .constructors import (
    CentroAffineSpec,
    GALLERY_NAMES,
    SphereSpec,
    build_centroaffine,
    build_sphere,
    gallery,
)
from .errors import GeometryError
from .exprlang import ParseError
from .golden import verify_example
from .reports import (
    render_report_figures,
    render_table_figures,
    report_csv,
    report_json,
    table_csv,
    table_json,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); keep usage errors at 1
        raise _UsageError(f"{self.prog}: {message}")


def _add_common(sub):
    sub.add_argument("--grid", default="5x5x5", help="sample grid shape, e.g. 5x5x5")
    sub.add_argument(
        "--box",
        default="-1:1,-1:1,-1:1",
        help="sample box as x0:x1,y0:y1,z0:z1 (clipped to the domain of validity)",
    )
    sub.add_argument(
        "--tol",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a tolerance (frame_cond, identity, null, j_tangent); repeatable",
    )
    sub.add_argument("--out", help="write the main output to this path instead of stdout")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument(
        "--figures",
        action="store_true",
        help="render diagnostic PNG figures next to the output (requires --out)",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="paraffine", description=__doc__.split("\n\n")[0])
    commands = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify-example", "diff a gallery item against embedded expectations"),
        ("classify", "run the verdict battery on a gallery item or construction file"),
        ("construct", "build from a JSON construction file and tabulate induced data"),
        ("sample", "tabulate immersion values on a grid"),
    ):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("target", help="gallery name or construction file path")
        _add_common(sub)
    return parser


def _parse_grid(text: str) -> tuple:
    parts = text.lower().split("x")
    if len(parts) != 3 or not all(p.isdigit() and int(p) >= 2 for p in parts):
        raise _UsageError(f"bad --grid {text!r}: expected like 5x5x5 with entries >= 2")
    return tuple(int(p) for p in parts)


def _parse_box(text: str) -> tuple:
    axes = text.split(",")
    if len(axes) != 3:
        raise _UsageError(f"bad --box {text!r}: expected x0:x1,y0:y1,z0:z1")
    box = []
    for axis in axes:
        ends = axis.split(":")
        try:
            lo, hi = (float(e) for e in ends)
        except ValueError:
            raise _UsageError(f"bad --box interval {axis!r}") from None
        if not lo < hi:
            raise _UsageError(f"bad --box interval {axis!r}: need lower < upper")
        box.append((lo, hi))
    return tuple(box)


def _parse_tols(pairs) -> Tolerances:
    overrides = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise _UsageError(f"bad --tol {pair!r}: expected KEY=VALUE")
        try:
            overrides[key] = float(value)
        except ValueError:
            raise _UsageError(f"bad --tol value in {pair!r}") from None
    try:
        return Tolerances().updated(**overrides)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def load_spec_file(path: str):
    """Read a JSON construction file into a construction spec."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise _UsageError(f"no such construction file: {path}") from None
    except json.JSONDecodeError as exc:
        raise _UsageError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise _UsageError(f"{path}: expected a JSON object")
    family = data.get("family")
    variant = data.get("variant")
    domain = tuple(data.get("domain", (-1.0, 1.0)))
    if len(domain) != 2 or not float(domain[0]) < float(domain[1]):
        raise _UsageError(f"{path}: bad domain {list(domain)!r}")
    domain = (float(domain[0]), float(domain[1]))
    try:
        if family == "centroaffine":
            return CentroAffineSpec(
                variant=variant,
                alpha=tuple(data["alpha"]),
                gamma2=tuple(data["gamma2"]),
                domain=domain,
            )
        if family == "sphere":
            return SphereSpec(
                variant=variant,
                alpha=tuple(data["alpha"]),
                beta=tuple(data["beta"]),
                A=tuple(data["A"]),
                E=float(data["E"]),
                lambda_sign=int(data.get("lambda_sign", 1)),
                domain=domain,
            )
    except KeyError as exc:
        raise _UsageError(f"{path}: missing field {exc.args[0]!r}") from None
    except (ParseError, ValueError, TypeError) as exc:
        raise _UsageError(f"{path}: {exc}") from None
    raise _UsageError(
        f"{path}: unknown family {family!r}: expected 'centroaffine' or 'sphere'"
    )


def _resolve_target(target: str):
    """Map TARGET to an immersion oracle: gallery name first, then file path."""
    if target in GALLERY_NAMES:
        return gallery(target)
    if os.path.exists(target):
        spec = load_spec_file(target)
        try:
            if isinstance(spec, CentroAffineSpec):
                return build_centroaffine(spec)
            return build_sphere(spec)
        except ParseError as exc:  # bad expression text is an input error
            raise _UsageError(f"{target}: {exc}") from None
    raise _UsageError(
        f"unknown target {target!r}: not a gallery name "
        f"({', '.join(GALLERY_NAMES)}) and not a file"
    )


def _grid_for(oracle, args) -> GridSpec:
    return GridSpec(box=tuple(oracle.clip_box(_parse_box(args.box))), shape=_parse_grid(args.grid))


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _figure_base(args) -> str | None:
    if not args.figures:
        return None
    if not args.out:
        raise _UsageError("--figures requires --out (figures are written next to it)")
    base, _ = os.path.splitext(args.out)
    return base


def cmd_verify_example(args) -> int:
    if args.target not in GALLERY_NAMES:
        raise _UsageError(
            f"unknown gallery name {args.target!r}: expected one of {', '.join(GALLERY_NAMES)}"
        )
    oracle = gallery(args.target)
    grid = _grid_for(oracle, args)
    result = verify_example(args.target, grid, _parse_tols(args.tol))
    for line in result.lines:
        print(line)
    summary = "all checks passed" if result.ok else "SOME CHECKS FAILED"
    print(f"{args.target}: {summary}")
    if args.out:
        text = report_json(result.report) if args.format == "json" else report_csv(result.report)
        _emit(text, args.out)
    base = _figure_base(args)
    if base:
        for path in render_report_figures(result.report, base):
            print(f"wrote {path}", file=sys.stderr)
    return 0 if result.ok else 2


def cmd_classify(args) -> int:
    oracle = _resolve_target(args.target)
    report = classify(oracle, _grid_for(oracle, args), _parse_tols(args.tol))
    text = report_json(report) if args.format == "json" else report_csv(report)
    _emit(text, args.out)
    base = _figure_base(args)
    if base:
        for path in render_report_figures(report, base):
            print(f"wrote {path}", file=sys.stderr)
    return 0 if report.gate_ok else 2


def _cmd_table(args, values_only: bool) -> int:
    oracle = _resolve_target(args.target)
    grid = _grid_for(oracle, args)
    kind = "sample" if values_only else "construct"
    text = (
        table_json(oracle, grid, kind, values_only)
        if args.format == "json"
        else table_csv(oracle, grid, values_only)
    )
    _emit(text, args.out)
    if not values_only:
        prov = oracle.provenance
        echo = sys.stderr if not args.out else sys.stdout
        print(f"lambda = {oracle.lam!r}", file=echo)
        for key in ("B_range", "det_rel_min"):
            if key in prov:
                print(f"{key} = {prov[key]!r}", file=echo)
    base = _figure_base(args)
    if base:
        for path in render_table_figures(oracle, grid, base):
            print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_construct(args) -> int:
    if args.target in GALLERY_NAMES:
        return _cmd_table(args, values_only=False)
    if not os.path.exists(args.target):
        raise _UsageError(f"no such construction file: {args.target}")
    return _cmd_table(args, values_only=False)


def cmd_sample(args) -> int:
    return _cmd_table(args, values_only=True)


_COMMANDS = {
    "verify-example": cmd_verify_example,
    "classify": cmd_classify,
    "construct": cmd_construct,
    "sample": cmd_sample,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GeometryError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


def entrypoint():
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
