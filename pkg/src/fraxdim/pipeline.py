"""Pipeline orchestration: validate -> associate -> verify -> dimension.

Every stage lands in the report exactly once with a pass/fail flag.
Timing is collected separately so reports stay byte-identical across runs;
callers that want timings merge them in explicitly.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import List, Optional

from .dimension import DimensionResult, build_incidence, solve_dimension
from .errors import AssemblyRefused, FraxdimError, ValidationFailure
from .ftc import ReducedGraphReport, check_pisot_hypotheses, detect_finite_type
from .graph import Gifs
from .irs import (
    assemble_gifs,
    associated_base,
    validate_containments,
    validate_decomposition,
    verify_association,
)
from .scene import SceneConfig


@dataclass
class PipelineResult:
    scene: str
    stages: List[dict] = field(default_factory=list)
    gifs: Optional[Gifs] = None
    method: str = ""
    dimension: Optional[DimensionResult] = None
    ftc_report: Optional[ReducedGraphReport] = None
    matrix: object = None
    timings: dict = field(default_factory=dict)

    def add_stage(self, name: str, ok: bool, summary: str, **extra):
        entry = {"stage": name, "ok": bool(ok), "summary": summary}
        entry.update(extra)
        self.stages.append(entry)

    def report(self, include_timings: bool = False) -> dict:
        out = {
            "scene": self.scene,
            "method": self.method,
            "stages": self.stages,
        }
        if self.dimension is not None:
            out["dimension"] = self.dimension.to_dict()
        if self.ftc_report is not None:
            out["ftc"] = self.ftc_report.to_dict()
        if include_timings:
            out["timings"] = self.timings
        return out

    def report_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.report(include_timings), sort_keys=True, indent=2) + "\n"


class _Timer:
    def __init__(self, result: PipelineResult, name: str):
        self.result = result
        self.name = name

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.result.timings[self.name] = round(time.perf_counter() - self.t0, 6)
        return False


def build_gifs(cfg: SceneConfig, result: Optional[PipelineResult] = None) -> Gifs:
    """Validate and produce the working GIFS for a scene (either section)."""
    result = result or PipelineResult(scene=cfg.name)
    if cfg.irs is not None:
        dec = validate_decomposition(cfg.irs)
        result.add_stage("validate-decomposition", dec.ok, dec.summary(), violations=dec.violations)
        if not dec.ok:
            raise ValidationFailure("validate-decomposition", dec)
        con = validate_containments(cfg.irs)
        result.add_stage("validate-containments", con.ok, con.summary(), violations=con.violations)
        if not con.ok:
            raise ValidationFailure("validate-containments", con)
        _, e1 = associated_base(cfg.irs)
        g = assemble_gifs(cfg.irs, e_k0=e1)
        result.add_stage(
            "assemble-gifs",
            True,
            f"{g.vertex_count} vertices, {len(g.edges)} edges",
            vertices=g.vertex_count,
            edges=len(g.edges),
        )
        assoc = verify_association(cfg.irs, g, max_q=cfg.solver.verify_depth, e_k0=e1)
        result.add_stage(
            "verify-association",
            assoc.ok,
            "exact equality" if assoc.ok else assoc.detail,
            checked_depth=assoc.checked_depth,
        )
        if not assoc.ok:
            raise ValidationFailure("verify-association", _report_like(assoc.detail))
    else:
        g = cfg.gifs
        rep = g.validate()
        result.add_stage("gifs-validate", rep.ok, rep.summary(), violations=rep.violations)
        if not rep.ok:
            raise ValidationFailure("gifs-validate", rep)
    return g


def _report_like(detail: str):
    from .graph import Report

    rep = Report("verify-association")
    rep.add(detail)
    return rep


def run_pipeline(cfg: SceneConfig) -> PipelineResult:
    result = PipelineResult(scene=cfg.name)
    with _Timer(result, "build"):
        g = build_gifs(cfg, result)
    result.gifs = g

    result.add_stage(
        "strongly-connected", True, str(g.is_strongly_connected()),
        value=g.is_strongly_connected(),
    )

    with _Timer(result, "gosc"):
        gosc = g.check_gosc()
    result.add_stage(
        "check-gosc",
        True,
        "holds" if gosc.holds else f"{len(gosc.violations)} overlapping sibling pairs",
        holds=gosc.holds,
        violations=[[a + 1, b + 1] for a, b in gosc.violations[:32]],
    )

    if gosc.holds:
        result.method = "gosc"
        mat = build_incidence(g)
        result.add_stage("incidence-matrix", True, f"{mat.size}x{mat.size}")
    else:
        result.method = "gftc"
        pisot = check_pisot_hypotheses(g)
        result.add_stage(
            "pisot-hypotheses", pisot.ok, pisot.summary(), **pisot.data
        )
        with _Timer(result, "ftc"):
            ftc_report = detect_finite_type(g, max_levels=cfg.solver.max_levels)
        result.ftc_report = ftc_report
        result.add_stage(
            "finite-type",
            ftc_report.finite,
            f"{ftc_report.type_count} neighborhood types after "
            f"{ftc_report.levels_explored} levels",
            type_count=ftc_report.type_count,
            levels=ftc_report.levels_explored,
            removed_edges=len(ftc_report.removed_edges),
        )
        mat = ftc_report.matrix

    with _Timer(result, "dimension"):
        dim = solve_dimension(mat, tol=cfg.solver.tol)
    result.dimension = dim
    result.add_stage(
        "solve-dimension",
        True,
        f"alpha = {dim.alpha:.12f}",
        alpha=dim.alpha,
        lambda_at_alpha=dim.lambda_at_alpha,
    )
    result.matrix = mat
    return result
