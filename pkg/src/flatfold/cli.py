"""Command-line entry point.

flatfold check <file>   validate the three gluing conditions
flatfold solve <file>   run the full pipeline and report flat / not_flat

Exit codes: 0 = all conditions pass / instance is flat, 1 = conditions
fail / instance is valid but not flat, 2 = error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import gluing as gl
from . import geodesic as geo
from .layout import render_svg, reconstruct, result_document
from .rim import SearchLog, find_rim
from .surface import build_surface


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flatfold")
    sub = ap.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("check", help="validate the gluing conditions")
    pc.add_argument("input")
    pc.add_argument("--tolerance-angle", type=float, default=gl.ANGLE_TOL)
    pc.add_argument("--tolerance-length", type=float, default=gl.LENGTH_TOL)

    ps = sub.add_parser("solve", help="detect and reconstruct a flat folding")
    ps.add_argument("input")
    ps.add_argument("--out", help="write the result document here (default stdout)")
    ps.add_argument("--svg", help="write an SVG rendering here")
    ps.add_argument("--oracle", action="store_true",
                    help="use the exhaustive geodesic enumeration")
    ps.add_argument("--trace", action="store_true",
                    help="print the rim search log to stderr")
    ps.add_argument("--tie-tol", type=float, default=geo.TIE_TOL)
    ps.add_argument("--tolerance-angle", type=float, default=gl.ANGLE_TOL)
    ps.add_argument("--tolerance-length", type=float, default=gl.LENGTH_TOL)
    ps.add_argument("--timing", action="store_true",
                    help="append wall-clock timings to the result document")
    return ap


def _load(path: str) -> gl.GluingSpec:
    with open(path, encoding="utf-8") as fh:
        return gl.parse_spec(fh.read())


def run_check(args) -> int:
    spec = _load(args.input)
    refined = gl.refine(spec, args.tolerance_length)
    report = gl.check_alexandrov(refined, args.tolerance_angle)
    print(report.render())
    cones = gl.cone_points(refined, args.tolerance_angle, strict=False)
    residual = gl.gauss_bonnet_residual(refined)
    print(f"cone points: {len(cones)}")
    for c in cones:
        print(f"  {c.label}: angle {c.angle:.12g}")
    print(f"curvature total - 4*pi: {residual:.3e}")
    return 0 if report.all_passed else 1


def run_solve(args) -> int:
    t0 = time.perf_counter()
    spec = _load(args.input)
    refined = gl.refine(spec, args.tolerance_length)
    report = gl.check_alexandrov(refined, args.tolerance_angle)
    if not report.all_passed:
        raise gl.InstanceError("gluing conditions fail:\n" + report.render())
    surf = build_surface(refined)
    t1 = time.perf_counter()
    sigma = geo.all_pairs(surf, tie_tol=args.tie_tol, use_oracle=args.oracle)
    t2 = time.perf_counter()
    log = SearchLog()
    rim = find_rim(surf, sigma, eps=args.tolerance_angle, log=log)
    t3 = time.perf_counter()
    tolerances = {
        "angle": args.tolerance_angle,
        "length": args.tolerance_length,
        "tie": args.tie_tol,
    }
    stats = {
        "cone_points": len(surf.cones),
        "shortest_paths": sigma.path_count(),
        "starts_explored": log.starts_explored,
    }
    timing = None
    flat = None
    if rim is not None:
        flat = reconstruct(surf, rim)
    t4 = time.perf_counter()
    if args.timing:
        timing = {
            "build_s": t1 - t0,
            "geodesics_s": t2 - t1,
            "rim_search_s": t3 - t2,
            "layout_s": t4 - t3,
        }
    verdict = "flat" if rim is not None else "not_flat"
    doc = result_document(
        verdict, surf=surf, rim=rim, flat=flat, stats=stats,
        tolerances=tolerances, timing=timing,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(surf, rim, flat))
    if args.trace:
        sys.stderr.write(log.render() + "\n")
    return 0 if rim is not None else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return run_check(args)
        return run_solve(args)
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: io: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # module errors carry their own context
        print(f"error: {type(e).__module__.split('.')[-1]}.{type(e).__name__}: {e}",
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
