"""Rasterize attractor approximations to PPM (and optionally PNG).

Path images of a fixed length are drawn as filled rectangles on the
unrolled chart.  The occupancy grid is boolean and pixel-OR commutes, so a
threaded fill over path chunks stays byte-deterministic.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import pi, sqrt
from typing import List, Optional, Tuple

import numpy as np

from .errors import DepthTooLarge
from .graph import Gifs
from .scene import SceneConfig

UNIT_FACTORS = {
    None: 1.0,
    "": 1.0,
    "pi": pi,
    "2pi": 2 * pi,
    "sqrt3_pi": sqrt(3.0) * pi,
}


def thread_count() -> int:
    raw = os.environ.get("FRAXDIM_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return max(1, min(n, 64)) if n else 1


@dataclass
class RasterImage:
    width: int
    height: int
    grid: np.ndarray  # bool, shape (height, width)
    bounds: Tuple[float, float, float, float]  # x0, x1, y0, y1 in chart units

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode()
        rgb = np.where(self.grid[:, :, None], 0, 255).astype(np.uint8)
        rgb = np.repeat(rgb, 3, axis=2)
        return header + rgb.tobytes()

    def to_png_bytes(self) -> bytes:
        from io import BytesIO

        from PIL import Image

        arr = np.where(self.grid, 0, 255).astype(np.uint8)
        buf = BytesIO()
        Image.fromarray(arr, mode="L").save(buf, format="PNG")
        return buf.getvalue()

    def pixels_on(self) -> int:
        return int(self.grid.sum())


def _unit_factor(tag: Optional[str]) -> float:
    if tag in UNIT_FACTORS:
        return UNIT_FACTORS[tag]
    return 1.0


def chart_bounds(cfg: SceneConfig) -> Tuple[float, float, float, float]:
    e0 = cfg.space.e0
    units = list(cfg.space.units) + [None] * 2
    fx = _unit_factor(units[0])
    fy = _unit_factor(units[1]) if cfg.space.dim > 1 else 1.0
    xs_lo = min(b.lo[0].to_float(1e-12) for b in e0.boxes) * fx
    xs_hi = max(b.hi[0].to_float(1e-12) for b in e0.boxes) * fx
    if cfg.space.dim > 1:
        ys_lo = min(b.lo[1].to_float(1e-12) for b in e0.boxes) * fy
        ys_hi = max(b.hi[1].to_float(1e-12) for b in e0.boxes) * fy
    else:
        ys_lo, ys_hi = 0.0, (xs_hi - xs_lo) / 8 or 1.0
    return xs_lo, xs_hi, ys_lo, ys_hi


def render_attractor(
    cfg: SceneConfig,
    g: Gifs,
    depth: int,
    width: Optional[int] = None,
    height: Optional[int] = None,
) -> RasterImage:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    width = width or cfg.render.width
    height = height or cfg.render.height
    count = g.count_paths(depth)
    if count > cfg.solver.path_cap:
        raise DepthTooLarge(f"{count} paths at depth {depth} exceeds cap {cfg.solver.path_cap}")

    x0, x1, y0, y1 = chart_bounds(cfg)
    units = list(cfg.space.units) + [None] * 2
    fx = _unit_factor(units[0])
    fy = _unit_factor(units[1]) if cfg.space.dim > 1 else 1.0

    boxes: List[Tuple[float, float, float, float]] = []
    tol = 1e-12
    for path in g.enumerate_paths(depth):
        region = g.vertices[path.dst].w
        for box in region.boxes:
            img = path.map.apply_box(box)
            bx0 = img.lo[0].to_float(tol) * fx
            bx1 = img.hi[0].to_float(tol) * fx
            if cfg.space.dim > 1:
                by0 = img.lo[1].to_float(tol) * fy
                by1 = img.hi[1].to_float(tol) * fy
            else:
                by0, by1 = y0, y1
            boxes.append((bx0, bx1, by0, by1))

    grid = np.zeros((height, width), dtype=bool)
    sx = width / (x1 - x0) if x1 > x0 else 1.0
    sy = height / (y1 - y0) if y1 > y0 else 1.0

    def fill(chunk, target):
        for bx0, bx1, by0, by1 in chunk:
            px0 = int(np.floor((bx0 - x0) * sx + 1e-9))
            px1 = int(np.ceil((bx1 - x0) * sx - 1e-9))
            py0 = int(np.floor((by0 - y0) * sy + 1e-9))
            py1 = int(np.ceil((by1 - y0) * sy - 1e-9))
            px0, px1 = max(px0, 0), min(max(px1, px0 + 1), width)
            py0, py1 = max(py0, 0), min(max(py1, py0 + 1), height)
            # row 0 is the top of the image; chart y grows upwards
            target[height - py1 : height - py0, px0:px1] = True

    workers = thread_count()
    if workers == 1 or len(boxes) < 256:
        fill(boxes, grid)
    else:
        chunks = [boxes[i::workers] for i in range(workers)]
        grids = [np.zeros((height, width), dtype=bool) for _ in chunks]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda pair: fill(pair[0], pair[1]), zip(chunks, grids)))
        for g_ in grids:
            grid |= g_
    return RasterImage(width, height, grid, (x0, x1, y0, y1))
