"""FastAPI service wrapping the pipeline.

Scenes are posted inline as JSON documents identical to the on-disk scene
format; the CLI remains usable offline because it binds the same core
functions directly.
"""

from __future__ import annotations

import base64
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .errors import FraxdimError
from .ftc import detect_finite_type
from .pipeline import PipelineResult, build_gifs, run_pipeline
from .render import render_attractor
from .scene import parse_scene

app = FastAPI(title="fraxdim", version=__version__)


class SceneRequest(BaseModel):
    scene: dict
    name: str = "<inline>"


class DimRequest(SceneRequest):
    tol: Optional[float] = Field(default=None, gt=0)


class FtcRequest(SceneRequest):
    max_levels: Optional[int] = Field(default=None, ge=2)


class RenderRequest(SceneRequest):
    depth: int = Field(ge=1)
    width: Optional[int] = Field(default=None, ge=1, le=4096)
    height: Optional[int] = Field(default=None, ge=1, le=4096)


class ValidateResponse(BaseModel):
    valid: bool
    stages: list


class DimResponse(BaseModel):
    method: str
    alpha: float
    lambda_at_alpha: float
    bracket: list
    report: dict


class FtcResponse(BaseModel):
    finite: bool
    type_count: int
    levels_explored: int
    report: dict


class RenderResponse(BaseModel):
    width: int
    height: int
    pixels_on: int
    ppm_base64: str


def _guard(fn):
    try:
        return fn()
    except FraxdimError as exc:
        raise HTTPException(
            status_code=422,
            detail={"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code},
        )


@app.get("/healthz")
def healthz():
    return {"status": "ok", "version": __version__}


@app.post("/v1/validate", response_model=ValidateResponse)
def validate(req: SceneRequest):
    def work():
        cfg = parse_scene(req.scene, name=req.name)
        result = PipelineResult(scene=cfg.name)
        build_gifs(cfg, result)
        return ValidateResponse(valid=True, stages=result.stages)

    return _guard(work)


@app.post("/v1/dim", response_model=DimResponse)
def dim(req: DimRequest):
    def work():
        cfg = parse_scene(req.scene, name=req.name)
        if req.tol:
            cfg.solver.tol = req.tol
        result = run_pipeline(cfg)
        return DimResponse(
            method=result.method,
            alpha=result.dimension.alpha,
            lambda_at_alpha=result.dimension.lambda_at_alpha,
            bracket=list(result.dimension.bracket),
            report=result.report(),
        )

    return _guard(work)


@app.post("/v1/ftc", response_model=FtcResponse)
def ftc(req: FtcRequest):
    def work():
        cfg = parse_scene(req.scene, name=req.name)
        if req.max_levels:
            cfg.solver.max_levels = req.max_levels
        g = build_gifs(cfg)
        report = detect_finite_type(g, max_levels=cfg.solver.max_levels)
        return FtcResponse(
            finite=report.finite,
            type_count=report.type_count,
            levels_explored=report.levels_explored,
            report=report.to_dict(),
        )

    return _guard(work)


@app.post("/v1/render", response_model=RenderResponse)
def render(req: RenderRequest):
    def work():
        cfg = parse_scene(req.scene, name=req.name)
        g = build_gifs(cfg)
        image = render_attractor(cfg, g, depth=req.depth, width=req.width, height=req.height)
        return RenderResponse(
            width=image.width,
            height=image.height,
            pixels_on=image.pixels_on(),
            ppm_base64=base64.b64encode(image.to_ppm()).decode(),
        )

    return _guard(work)
