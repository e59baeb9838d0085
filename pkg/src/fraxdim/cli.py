"""Command-line interface.

Exit codes: 0 success, 2 validation/config failure, 3 inconclusive finite
type detection, 4 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dimension import build_incidence, solve_dimension
from .errors import FraxdimError, InconclusiveFiniteType, LevelCapExceeded
from .ftc import check_pisot_hypotheses, detect_finite_type
from .pipeline import build_gifs, run_pipeline
from .render import render_attractor
from .scene import load_scene


def _cmd_validate(args) -> int:
    cfg = load_scene(args.scene)
    from .pipeline import PipelineResult

    result = PipelineResult(scene=cfg.name)
    build_gifs(cfg, result)
    for stage in result.stages:
        flag = "ok" if stage["ok"] else "FAIL"
        print(f"[{flag}] {stage['stage']}: {stage['summary']}")
    print("valid")
    return 0


def _cmd_dim(args) -> int:
    cfg = load_scene(args.scene)
    if args.tol:
        cfg.solver.tol = float(args.tol)
    result = run_pipeline(cfg)
    dim = result.dimension
    mat = result.matrix
    print(f"method: {result.method}")
    print(f"alpha: {dim.alpha:.12f}")
    print(f"lambda(alpha): {dim.lambda_at_alpha:.12f}")
    print(f"bracket: [{dim.bracket[0]:.12f}, {dim.bracket[1]:.12f}]")
    print(f"matrix: {mat.size}x{mat.size}, evaluated at alpha:")
    dense = mat.evaluate(dim.alpha)
    for row in dense:
        print("  " + " ".join(f"{x:8.5f}" for x in row))
    if args.matrix_out:
        Path(args.matrix_out).write_text(
            json.dumps(mat.to_json_cells(), sort_keys=True, indent=2) + "\n"
        )
        print(f"matrix cells written to {args.matrix_out}")
    if args.report:
        Path(args.report).write_text(result.report_json(include_timings=args.timings))
        print(f"report written to {args.report}")
    return 0


def _cmd_ftc(args) -> int:
    cfg = load_scene(args.scene)
    if args.max_levels:
        cfg.solver.max_levels = int(args.max_levels)
    from .pipeline import PipelineResult

    result = PipelineResult(scene=cfg.name)
    g = build_gifs(cfg, result)
    pisot = check_pisot_hypotheses(g)
    print(f"pisot hypotheses: {'ok' if pisot.ok else pisot.summary()} {pisot.data}")
    report = detect_finite_type(g, max_levels=cfg.solver.max_levels)
    print(f"finite: {report.finite}")
    print(f"types: {report.type_count} (stable after {report.levels_explored} levels)")
    print(f"root types: {[t + 1 for t in report.root_types]}")
    print("transitions:")
    for t, row in sorted(report.transitions.items()):
        cells = ", ".join(f"T{c + 1}(exp {e})" for c, e in row)
        print(f"  T{t + 1} -> {cells}")
    if report.removed_edges:
        print("removed edges:")
        for entry in report.removed_edges[:16]:
            print(f"  level {entry['level']}: {entry['removed']} removed; {entry['witness']}")
        if len(report.removed_edges) > 16:
            print(f"  ... {len(report.removed_edges) - 16} more")
    print("weighted incidence pattern (cell counts):")
    for row in report.matrix.pattern():
        print("  " + " ".join(str(x) for x in row))
    return 0


def _cmd_render(args) -> int:
    cfg = load_scene(args.scene)
    g = build_gifs(cfg)
    width = height = None
    if args.size:
        try:
            w, h = args.size.lower().split("x")
            width, height = int(w), int(h)
        except ValueError:
            print(f"bad --size {args.size!r}; expected WxH", file=sys.stderr)
            return 2
    image = render_attractor(cfg, g, depth=args.depth, width=width, height=height)
    out = Path(args.out)
    out.write_bytes(image.to_ppm())
    print(f"wrote {out} ({image.width}x{image.height}, {image.pixels_on()} pixels on)")
    if args.png:
        png_path = out.with_suffix(".png")
        png_path.write_bytes(image.to_png_bytes())
        print(f"wrote {png_path}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraxdim",
        description="Attractor dimension of iterated relation systems via GIFS criteria",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="run the validators and assembly")
    p.add_argument("scene")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("dim", help="compute the attractor dimension")
    p.add_argument("scene")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--report", default=None, help="write the JSON report here")
    p.add_argument("--matrix-out", default=None, help="write symbolic matrix cells here")
    p.add_argument("--timings", action="store_true", help="include timings in the report")
    p.set_defaults(func=_cmd_dim)

    p = sub.add_parser("ftc", help="run the finite type machine")
    p.add_argument("scene")
    p.add_argument("--max-levels", type=int, default=None)
    p.set_defaults(func=_cmd_ftc)

    p = sub.add_parser("render", help="rasterize an attractor approximation")
    p.add_argument("scene")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--size", default=None, help="WxH pixels")
    p.add_argument("--png", action="store_true", help="also write a PNG next to the PPM")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LevelCapExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return exc.exit_code
    except InconclusiveFiniteType as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return exc.exit_code
    except FraxdimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
