"""Command-line surface: eval, terms, sum, raster, check.

Exit codes: 0 success, 1 domain error, 2 usage error.  All outputs are
deterministic for fixed inputs and seeds; rationals print as 'p/q'.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction as Q
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import conedist
from .checks import SUITES, run_suite
from .conedist import density_at, format_distribution
from .errors import DhlocError, NonGenericPoint
from .linalg import Vector
from .localize import Model, contributions_at, partial_sum
from .models import resolve_model


def _parse_point(text: str, rank: int) -> Vector:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != rank:
        raise argparse.ArgumentTypeError(
            f"expected {rank} comma-separated rationals, got {text!r}")
    try:
        return tuple(Q(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational in {text!r}: {exc}")


def _parse_window(text: str, rank: int) -> Tuple[Vector, Vector]:
    try:
        lo_text, hi_text = text.split(":")
    except ValueError:
        raise argparse.ArgumentTypeError(
            "window must be 'lo1,..:hi1,..' with rational corners")
    lo = _parse_point(lo_text, rank)
    hi = _parse_point(hi_text, rank)
    if any(a >= b for a, b in zip(lo, hi)):
        raise argparse.ArgumentTypeError("window corners must satisfy lo < hi")
    return lo, hi


@dataclass(frozen=True)
class RasterSpec:
    window: Tuple[Vector, Vector]
    resolution: Tuple[int, ...]
    jitter: Optional[Q]
    fmt: str


def _cell_centers(spec: RasterSpec, jitter: Q) -> List[Tuple[Tuple[int, ...], Vector]]:
    lo, hi = spec.window
    rank = len(lo)
    axes = []
    for d in range(rank):
        n = spec.resolution[d]
        step = (hi[d] - lo[d]) / n
        axes.append([(i, lo[d] + step * (2 * i + 1) / 2 + jitter) for i in range(n)])
    cells = []
    if rank == 1:
        for i, x in axes[0]:
            cells.append(((i,), (x,)))
    else:
        for j, y in axes[1]:
            for i, x in axes[0]:
                cells.append(((i, j), (x, y)))
    return cells


def _rasterize(model: Model, spec: RasterSpec) -> Tuple[Q, List[Tuple[Tuple[int, ...], Vector, Q]]]:
    total = partial_sum(model, spec.window)
    candidates = [spec.jitter] if spec.jitter is not None else \
        [Q(1, p) for p in (1021, 2017, 4093, 8191, 16381, 32749)]
    last_error: Optional[Exception] = None
    for jitter in candidates:
        cells = _cell_centers(spec, jitter)
        values = []
        try:
            for index, point in cells:
                values.append((index, point, density_at(total, point)))
        except NonGenericPoint as exc:
            last_error = exc
            continue
        return jitter, values
    raise NonGenericPoint(f"all jitter candidates hit walls: {last_error}")


def _raster_csv(rank: int, values, decimals: bool) -> str:
    lines = ["x,value" if rank == 1 else "x,y,value"]
    for _, point, v in values:
        coords = [str(float(c)) if decimals else str(c) for c in point]
        val = str(float(v)) if decimals else str(v)
        lines.append(",".join(coords + [val]))
    return "\r\n".join(lines) + "\r\n"


def _raster_svg(spec: RasterSpec, values) -> str:
    rank = len(spec.window[0])
    cell = 8
    nx = spec.resolution[0]
    ny = spec.resolution[1] if rank == 2 else 1
    width, height = nx * cell, ny * cell
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    for index, _, v in values:
        if v == 0:
            continue
        fill = "#d3d3d3" if v > 0 else "#000000"
        ix = index[0]
        iy = index[1] if rank == 2 else 0
        x = ix * cell
        y = (ny - 1 - iy) * cell  # larger second coordinate drawn upward
        parts.append(f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{fill}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _cmd_eval(args) -> int:
    model = resolve_model(args.model)
    rank = model.root_datum.rank
    point = _parse_point(args.point, rank)
    margin = tuple(Q(1) for _ in range(rank))
    window = (tuple(p - m for p, m in zip(point, margin)),
              tuple(p + m for p, m in zip(point, margin)))
    total = partial_sum(model, window)
    value = density_at(total, point)
    print(str(float(value)) if args.decimals else str(value))
    return 0


def _cmd_terms(args) -> int:
    model = resolve_model(args.model)
    rank = model.root_datum.rank
    beta = _parse_point(args.beta, rank)
    contribs = contributions_at(model, beta)
    if not contribs:
        raise DhlocError(f"no critical value at {args.beta}")
    lines: List[str] = []
    for c in contribs:
        lines.extend(format_distribution(c))
    for line in sorted(lines):
        print(line)
    return 0


def _cmd_sum(args) -> int:
    model = resolve_model(args.model)
    window = _parse_window(args.window, model.root_datum.rank)
    total = partial_sum(model, window)
    doc = conedist.serialize(total)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_raster(args) -> int:
    model = resolve_model(args.model)
    rank = model.root_datum.rank
    window = _parse_window(args.window, rank)
    res_parts = [p.strip() for p in args.res.split(",")]
    if len(res_parts) == 1 and rank == 2:
        res_parts = res_parts * 2
    if len(res_parts) != rank:
        raise DhlocError(f"resolution needs {rank} entries")
    resolution = tuple(int(p) for p in res_parts)
    if any(r < 1 for r in resolution):
        raise DhlocError("resolution must be positive")
    jitter = Q(args.jitter) if args.jitter else None
    if args.format == "svg" and rank > 2:
        raise DhlocError("SVG rasters require rank at most 2")
    spec = RasterSpec(window, resolution, jitter, args.format)
    _, values = _rasterize(model, spec)
    if args.format == "csv":
        text = _raster_csv(rank, values, args.decimals)
    else:
        text = _raster_svg(spec, values)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_check(args) -> int:
    try:
        results = run_suite(args.suite)
    except KeyError:
        print(f"unknown suite {args.suite!r}; choose from "
              f"{', '.join(sorted(SUITES))} or 'all'", file=sys.stderr)
        return 2
    report = {
        "suite": args.suite,
        "passed": sum(1 for r in results if r.ok),
        "failed": sum(1 for r in results if not r.ok),
        "checks": [
            {"name": r.name, "ok": r.ok, **({"detail": r.detail} if r.detail else {})}
            for r in results
        ],
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for r in results:
        print(("PASS " if r.ok else "FAIL ") + r.name, file=sys.stderr)
    return 0 if report["failed"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dhloc",
        description="Exact localized Duistermaat-Heckman distributions")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model(p):
        p.add_argument("--model", required=True,
                       help="builtin name (s4, woodward_su3) or model file path")

    p_eval = sub.add_parser("eval", help="density of the localized sum at a point")
    add_model(p_eval)
    p_eval.add_argument("--point", required=True, help="rational coordinates, e.g. '1/2' or '1/4,1/4'")
    p_eval.add_argument("--decimals", action="store_true", help="print a float instead of p/q")
    p_eval.set_defaults(func=_cmd_eval)

    p_terms = sub.add_parser("terms", help="list the contribution terms at a critical value")
    add_model(p_terms)
    p_terms.add_argument("--beta", required=True, help="critical value coordinates")
    p_terms.set_defaults(func=_cmd_terms)

    p_sum = sub.add_parser("sum", help="serialize the partial sum over a window")
    add_model(p_sum)
    p_sum.add_argument("--window", required=True, help="'lo1,..:hi1,..' rational corners")
    p_sum.add_argument("--out", help="output path (default stdout)")
    p_sum.set_defaults(func=_cmd_sum)

    p_raster = sub.add_parser("raster", help="rasterize the partial sum to CSV or SVG")
    add_model(p_raster)
    p_raster.add_argument("--window", required=True, help="'lo1,..:hi1,..' rational corners")
    p_raster.add_argument("--res", required=True, help="cells per axis, e.g. '60' or '60,60'")
    p_raster.add_argument("--jitter", help="rational sample offset (default: auto)")
    p_raster.add_argument("--format", choices=("csv", "svg"), default="csv")
    p_raster.add_argument("--seed", type=int, default=0, help="reserved; rasters are deterministic")
    p_raster.add_argument("--out", help="output path (default stdout)")
    p_raster.add_argument("--decimals", action="store_true",
                          help="CSV values as floats for plotting")
    p_raster.set_defaults(func=_cmd_raster)

    p_check = sub.add_parser("check", help="run a named invariant suite")
    p_check.add_argument("suite", help="suite tag or 'all'")
    p_check.add_argument("--out", help="write the JSON report to a file")
    p_check.set_defaults(func=_cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DhlocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
