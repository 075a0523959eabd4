"""Command-line surface: radius tables, verification, sharpness, sweeps, selftest.

Exit statuses are a stable contract:

* 0 success (for ``verify``: certified input with margin <= 0)
* 1 inequality violation (margin > 0), or a failed selftest/witness
* 2 usage error (unknown flags, bad parameters, exceeded caps)
* 3 parse error (unreadable or malformed function file)
* 4 uncertified input (evaluated and printed, but the verdict is informational)

All file output is deterministic byte-for-byte for fixed flags and seeds:
rows are emitted in sorted parameter order, floats with 17 significant
digits, JSON with sorted keys.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import numpy as np

from . import selftest as selftest_mod
from .functionals import FunctionalKind, FunctionalTag, report_to_json
from .harness import evaluate_kind, sharpness_witness, theorem_radius
from .radii import (
    PARAMETER_CAP,
    RadiusEquation,
    RadiusKind,
    equation_value,
    maximal_root,
)
from .series import LacunarySeries, MAX_EVAL_RADIUS, RadiusError, series_from_json
from .spaces import banach_from_json, slice_series

__all__ = ["main", "entrypoint"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_UNCERTIFIED = 4


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bohrlab",
        description="Radius tables and certified checks for refined Bohr-type sums.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    radii = sub.add_parser("radii", help="tabulate every radius kind as CSV")
    radii.add_argument("--p-max", type=int, default=3)
    radii.add_argument("--m-max", type=int, default=3)
    radii.add_argument("--n-max", type=int, default=4)
    _common_output(radii, default_format="csv")

    verify = sub.add_parser("verify", help="evaluate one functional on a function file")
    verify.add_argument("--file", required=True, help="JSON function description")
    _kind_flags(verify)
    verify.add_argument("--r", type=float, required=True)
    _common_output(verify, default_format="json")

    sweep = sub.add_parser("sweep", help="margin curve over a radius grid")
    sweep.add_argument("--file", required=True)
    _kind_flags(sweep)
    sweep.add_argument("--grid", required=True, help="radius grid as lo:hi:count")
    _common_output(sweep, default_format="csv")

    sharp = sub.add_parser("sharpness", help="reproduce a sharpness witness")
    _kind_flags(sharp)
    sharp.add_argument("--r", type=float, default=None,
                       help="test radius (default: sharp radius + 0.01)")
    _common_output(sharp, default_format="json")

    selftest = sub.add_parser("selftest", help="run the acceptance criteria")
    selftest.add_argument("--only", default=None,
                          help="comma-separated criterion numbers (default: all)")
    selftest.add_argument("--trials", type=int, default=None,
                          help="override trial counts for the campaign criterion")
    selftest.add_argument("--seed", type=int, default=None,
                          help="offset added to the campaign criterion's fixed seeds")
    return parser


def _kind_flags(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--kind", required=True,
                     choices=[t.value for t in FunctionalTag])
    cmd.add_argument("--p", type=int, default=None)
    cmd.add_argument("--m", type=int, default=None)
    cmd.add_argument("--n", type=int, default=None)
    cmd.add_argument("--p-exp", type=float, default=None, dest="p_exp")
    cmd.add_argument("--d", default=None, help="comma-separated weights d_1,d_2,...")


def _common_output(cmd: argparse.ArgumentParser, default_format: str) -> None:
    cmd.add_argument("--out", default=None, help="output path (default: stdout)")
    cmd.add_argument("--format", choices=("csv", "json"), default=default_format)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "radii":
            return _run_radii(args)
        if args.command == "verify":
            return _run_verify(args)
        if args.command == "sweep":
            return _run_sweep(args)
        if args.command == "sharpness":
            return _run_sharpness(args)
        return _run_selftest(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    raise SystemExit(main())


# ----------------------------------------------------------------- radii ----


def _radius_rows(p_max: int, m_max: int, n_max: int) -> list[list]:
    rows: list[list] = []
    for p in range(1, p_max + 1):
        for m in range(0, min(p, m_max) + 1):
            for kind, ctor in (
                (RadiusKind.R_PM, RadiusEquation.lacunary),
                (RadiusKind.R_TSTAR_PM, RadiusEquation.refined_lacunary),
            ):
                eq = ctor(p, m)
                root = maximal_root(eq)
                rows.append([kind.value, p, m, "", root, equation_value(eq, root)])
    for m in range(0, m_max + 1):
        for n in range(m + 1, n_max + 1):
            for kind, ctor in (
                (RadiusKind.R_STAR_NM, RadiusEquation.gap_piecewise),
                (RadiusKind.R_DSTAR_NM, RadiusEquation.gap),
            ):
                eq = ctor(n, m)
                root = maximal_root(eq)
                rows.append([kind.value, "", m, n, root, equation_value(eq, root)])
    for p_exp in (1.0, 2.0):
        for m in range(1, m_max + 1):
            for n in range(1, n_max + 1):
                eq = RadiusEquation.rogosinski(n, p_exp, m)
                root = maximal_root(eq)
                rows.append(
                    [RadiusKind.ROG_NPM.value, p_exp, m, n, root, equation_value(eq, root)]
                )
    for p_exp in (1.0, 2.0):
        for n in range(1, n_max + 1):
            eq = RadiusEquation.rogosinski_limit(n, p_exp)
            root = maximal_root(eq)
            rows.append(
                [RadiusKind.ROG_NP.value, p_exp, "", n, root, equation_value(eq, root)]
            )
    def _num(x) -> float:
        return -1.0 if x == "" else float(x)

    rows.sort(key=lambda row: (row[0], _num(row[1]), _num(row[2]), _num(row[3])))
    return rows


def _run_radii(args) -> int:
    for name in ("p_max", "m_max", "n_max"):
        cap = getattr(args, name)
        if cap < 0 or cap > PARAMETER_CAP:
            raise _UsageError(f"--{name.replace('_', '-')} must lie in [0, {PARAMETER_CAP}]")
    rows = _radius_rows(args.p_max, args.m_max, args.n_max)
    header = ["kind", "p", "m", "n", "root", "residual"]
    if args.format == "csv":
        _emit(args.out, _csv_text(header, rows))
    else:
        payload = [dict(zip(header, row)) for row in rows]
        _emit(args.out, json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- verify ----


def _kind_from_args(args, fallback=None) -> FunctionalKind:
    tag = FunctionalTag(args.kind)
    d = None
    if args.d is not None:
        try:
            d = tuple(float(x) for x in args.d.split(","))
        except ValueError as exc:
            raise _UsageError(f"--d must be a comma-separated float list: {exc}")
    try:
        if tag is FunctionalTag.A_PM:
            p, m = args.p, args.m
            if p is None and fallback is not None:
                p = fallback.p
            if m is None and fallback is not None:
                m = fallback.m
            if fallback is not None and (p, m) != (fallback.p, fallback.m):
                raise _UsageError(
                    f"kind A_PM({p},{m}) conflicts with the file's lacunary "
                    f"shape (p={fallback.p}, m={fallback.m})"
                )
            return FunctionalKind.lacunary(p, m)
        if tag is FunctionalTag.D_NM:
            return FunctionalKind.gap(args.n, args.m)
        if tag is FunctionalTag.G_MPN:
            return FunctionalKind.rogosinski(args.m, args.p_exp, args.n)
        if tag is FunctionalTag.H_PN:
            return FunctionalKind.rogosinski_center(args.p_exp, args.n)
        if tag is FunctionalTag.I_M:
            if d is None:
                raise _UsageError("kind I_M needs --d")
            return FunctionalKind.improved(d)
        return FunctionalKind.tail_lemma(args.n)
    except (TypeError, ValueError) as exc:
        raise _UsageError(f"invalid parameters for kind {tag.value}: {exc}")


def _load_function(path: str) -> LacunarySeries:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _ParseError(f"cannot read function file {path!r}: {exc}")
    try:
        if isinstance(data, dict) and "form" in data:
            mapping = banach_from_json(data)
            sliced = slice_series(mapping, mapping.u)
            return LacunarySeries(0, 1, sliced)
        return series_from_json(data)
    except ValueError as exc:
        raise _ParseError(str(exc))


class _ParseError(Exception):
    pass


def _run_verify(args) -> int:
    try:
        fdesc = _load_function(args.file)
    except _ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    kind = _kind_from_args(args, fallback=fdesc)
    try:
        report = evaluate_kind(kind, fdesc, args.r)
    except (RadiusError, ValueError, TypeError) as exc:
        raise _UsageError(str(exc))
    if args.format == "json":
        _emit(args.out, json.dumps(report_to_json(report), sort_keys=True) + "\n")
    else:
        header = ["kind", "params", "r", "value", "tail_error", "margin"]
        params = ";".join(f"{k}={v}" for k, v in kind.params().items())
        row = [kind.tag.value, params, args.r, report.value, report.tail_error, report.margin]
        _emit(args.out, _csv_text(header, [row]))
    if not report.inputs.get("certified", False):
        print("warning: input carries no disk-self-map certificate; "
              "the verdict is informational", file=sys.stderr)
        return EXIT_UNCERTIFIED
    return EXIT_VIOLATION if report.margin > 0.0 else EXIT_OK


# ----------------------------------------------------------------- sweep ----


def _run_sweep(args) -> int:
    try:
        fdesc = _load_function(args.file)
    except _ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    kind = _kind_from_args(args, fallback=fdesc)
    try:
        lo, hi, count = args.grid.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
        if count < 1:
            raise ValueError("count must be >= 1")
    except ValueError as exc:
        raise _UsageError(f"--grid must look like lo:hi:count: {exc}")
    grid = np.linspace(lo, hi, count) if count > 1 else np.array([lo])
    header = ["r", "value", "margin", "status"]
    rows = []
    for r in grid:
        r = float(r)
        if r <= 0.0 or r >= MAX_EVAL_RADIUS:
            rows.append([r, "", "", "REJECTED"])
            continue
        report = evaluate_kind(kind, fdesc, r)
        rows.append([r, report.value, report.margin, "OK"])
    if args.format == "csv":
        _emit(args.out, _csv_text(header, rows))
    else:
        payload_json = [dict(zip(header, row)) for row in rows]
        _emit(args.out, json.dumps(payload_json, sort_keys=True) + "\n")
    return EXIT_OK


# ------------------------------------------------------------- sharpness ----


def _run_sharpness(args) -> int:
    kind = _kind_from_args(args)
    r = args.r
    if r is None:
        r = theorem_radius(kind) + 0.01
    try:
        witness = sharpness_witness(kind, r)
    except (ValueError, RuntimeError) as exc:
        print(f"sharpness failure: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    if args.format == "json":
        _emit(args.out, json.dumps(witness.to_json(), sort_keys=True) + "\n")
    else:
        header = ["kind", "r", "witness_param", "value", "tail_error", "exceeds_one"]
        row = [kind.tag.value, witness.r, witness.witness_param, witness.value,
               witness.tail_error, witness.exceeds_one]
        _emit(args.out, _csv_text(header, [row]))
    return EXIT_OK


# -------------------------------------------------------------- selftest ----


def _run_selftest(args) -> int:
    numbers = None
    if args.only is not None:
        try:
            numbers = [int(x) for x in args.only.split(",")]
        except ValueError as exc:
            raise _UsageError(f"--only must be a comma-separated integer list: {exc}")
        valid = {num for num, _, _ in selftest_mod.CRITERIA}
        bad = [n for n in numbers if n not in valid]
        if bad:
            raise _UsageError(f"unknown criterion numbers: {bad}")
    if args.trials is not None and args.trials < 1:
        raise _UsageError("--trials must be >= 1")
    results = selftest_mod.run_selftest(
        numbers, stream=sys.stdout, safety_trials=args.trials,
        safety_seed_offset=args.seed,
    )
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


# ------------------------------------------------------------------ misc ----


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _emit(out_path: str | None, text: str) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


if __name__ == "__main__":
    entrypoint()
