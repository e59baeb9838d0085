"""Scene-config ingestion: JSON with exact numbers as rational strings.

A scene declares the number field, the chart space, and exactly one of an
IRS section or a direct GIFS section, plus solver and render settings.
Field elements are written either as a rational ("3/4", "-1", 2) or as a
coefficient vector over the power basis (["2", "-1"] means 2 - beta).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

from .algebra import AlgebraicNumber, PisotField
from .boxes import Box, RegionSet
from .errors import ParseError, SemanticError
from .graph import Edge, Gifs, GifsVertex
from .irs import Branch, ChartSpace, IrsSpec, Piece, Relation
from .maps import SignedPermutation, Similitude


@dataclass
class SolverSettings:
    tol: float = 1e-9
    max_levels: int = 8
    verify_depth: int = 3
    path_cap: int = 10_000_000
    spectral_tol: float = 1e-13


@dataclass
class RenderSettings:
    width: int = 512
    height: int = 512
    depth: int = 6


@dataclass
class SceneConfig:
    name: str
    field: PisotField
    space: ChartSpace
    irs: Optional[IrsSpec]
    gifs: Optional[Gifs]
    solver: SolverSettings = field(default_factory=SolverSettings)
    render: RenderSettings = field(default_factory=RenderSettings)
    raw: dict = field(default_factory=dict)


def _rational(value, path: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError("exact numbers must be integers or 'p/q' strings", path)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {value!r}: {exc}", path)
    raise ParseError(f"expected a rational, got {type(value).__name__}", path)


def _element(f: PisotField, value, path: str) -> AlgebraicNumber:
    if isinstance(value, list):
        if len(value) != f.degree:
            raise ParseError(
                f"coefficient vector of length {len(value)} in a degree-{f.degree} field",
                path,
            )
        return AlgebraicNumber(f, [_rational(v, path) for v in value])
    return f.from_rational(_rational(value, path))


def _box(f: PisotField, obj, dim: int, path: str) -> Box:
    if not isinstance(obj, dict) or "lo" not in obj or "hi" not in obj:
        raise ParseError("box must be an object with 'lo' and 'hi'", path)
    lo = obj["lo"]
    hi = obj["hi"]
    if not isinstance(lo, list) or not isinstance(hi, list) or len(lo) != dim or len(hi) != dim:
        raise ParseError(f"box corners must be length-{dim} lists", path)
    try:
        return Box(
            [_element(f, v, f"{path}.lo[{i}]") for i, v in enumerate(lo)],
            [_element(f, v, f"{path}.hi[{i}]") for i, v in enumerate(hi)],
        )
    except ValueError as exc:
        raise SemanticError(str(exc), path)


def _region(f: PisotField, obj, dim: int, path: str) -> RegionSet:
    if not isinstance(obj, list) or not obj:
        raise ParseError("region must be a non-empty list of boxes", path)
    return RegionSet([_box(f, b, dim, f"{path}[{i}]") for i, b in enumerate(obj)])


def _similitude(f: PisotField, obj, dim: int, space: ChartSpace, path: str) -> Similitude:
    if not isinstance(obj, dict):
        raise ParseError("map must be an object", path)
    exp = obj.get("ratio_exp")
    if not isinstance(exp, int) or isinstance(exp, bool) or exp < 0:
        raise ParseError("ratio_exp must be a non-negative integer", path)
    orth_spec = obj.get("orth")
    if orth_spec is None:
        orth = SignedPermutation.identity(dim)
    else:
        try:
            orth = SignedPermutation(orth_spec.get("perm", range(dim)), orth_spec.get("signs", [1] * dim))
        except (ValueError, AttributeError) as exc:
            raise ParseError(f"bad orth spec: {exc}", path)
    trans = obj.get("trans")
    if not isinstance(trans, list) or len(trans) != dim:
        raise ParseError(f"trans must be a length-{dim} list", path)
    trans_elems = [_element(f, v, f"{path}.trans[{i}]") for i, v in enumerate(trans)]
    wrap = obj.get("wrap", [0] * dim)
    if not isinstance(wrap, list) or len(wrap) != dim:
        raise ParseError("wrap must list one integer per axis", path)
    for axis, w in enumerate(wrap):
        if not isinstance(w, int) or isinstance(w, bool):
            raise ParseError("wrap entries must be integers", path)
        if w != 0:
            period = space.periods[axis]
            if period is None:
                raise SemanticError(f"wrap on non-periodic axis {axis}", path)
            trans_elems[axis] = trans_elems[axis] + period * f.from_rational(w)
    return Similitude(f, exp, orth, trans_elems)


def _space(f: PisotField, obj, path: str) -> ChartSpace:
    if not isinstance(obj, dict):
        raise ParseError("space must be an object", path)
    dim = obj.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ParseError("space.dim must be a positive integer", path)
    periodic = obj.get("periodic", [None] * dim)
    if not isinstance(periodic, list) or len(periodic) != dim:
        raise ParseError("space.periodic must list one entry per axis", path)
    periods = []
    for i, p in enumerate(periodic):
        if p is None:
            periods.append(None)
        elif isinstance(p, dict) and "period" in p:
            periods.append(_element(f, p["period"], f"{path}.periodic[{i}]"))
        else:
            raise ParseError("periodic entries are null or {'period': ...}", path)
    units = obj.get("units", [None] * dim)
    if not isinstance(units, list) or len(units) != dim:
        raise ParseError("space.units must list one entry per axis", path)
    e0 = _region(f, obj.get("e0"), dim, f"{path}.e0")
    try:
        return ChartSpace(f, dim, tuple(periods), e0, tuple(units))
    except ValueError as exc:
        raise SemanticError(str(exc), path)


def _irs(f: PisotField, space: ChartSpace, obj, path: str) -> IrsSpec:
    relations_spec = obj.get("relations")
    if not isinstance(relations_spec, list) or not relations_spec:
        raise ParseError("irs.relations must be a non-empty list", path)
    relations = []
    for ri, rel in enumerate(relations_spec):
        rpath = f"{path}.relations[{ri}]"
        if not isinstance(rel, dict):
            raise ParseError("relation must be an object", rpath)
        name = rel.get("name", f"R{ri + 1}")
        pieces_spec = rel.get("pieces")
        if not isinstance(pieces_spec, list) or not pieces_spec:
            raise ParseError("relation.pieces must be a non-empty list", rpath)
        pieces = []
        for pi, piece in enumerate(pieces_spec):
            ppath = f"{rpath}.pieces[{pi}]"
            if not isinstance(piece, dict):
                raise ParseError("piece must be an object", ppath)
            kind = piece.get("kind")
            if kind not in ("single", "multi"):
                raise ParseError("piece.kind must be 'single' or 'multi'", ppath)
            domain = _region(f, piece.get("domain"), space.dim, f"{ppath}.domain")
            branches_spec = piece.get("branches")
            if not isinstance(branches_spec, list):
                raise ParseError(
                    "branches must be a finite list (value families such as "
                    "infinite point sets are not representable)",
                    ppath,
                )
            branches = []
            for bi, b in enumerate(branches_spec):
                bpath = f"{ppath}.branches[{bi}]"
                if not isinstance(b, dict):
                    raise ParseError("branch must be an object", bpath)
                mapping = _similitude(f, b, space.dim, space, bpath)
                branches.append(
                    Branch(
                        domain=domain,
                        map=mapping,
                        wrap=tuple(b.get("wrap", [0] * space.dim)),
                        closed_faces=str(b.get("closed_faces", "lower")),
                    )
                )
            if not branches:
                raise ParseError("piece carries no branches", ppath)
            pieces.append(Piece(domain=domain, branches=branches, multivalued=kind == "multi"))
        relations.append(Relation(name=name, pieces=pieces))
    open_family = []
    for oi, entry in enumerate(obj.get("open_family", [])):
        opath = f"{path}.open_family[{oi}]"
        if not isinstance(entry, dict) or "match" not in entry or "u" not in entry:
            raise ParseError("open_family entries need 'match' and 'u' boxes", opath)
        open_family.append(
            (
                _box(f, entry["match"], space.dim, f"{opath}.match"),
                _box(f, entry["u"], space.dim, f"{opath}.u"),
            )
        )
    condition_c = obj.get("condition_c", True)
    if not isinstance(condition_c, bool):
        raise ParseError("condition_c must be a boolean", path)
    return IrsSpec(space=space, relations=relations, condition_c=condition_c, open_family=open_family)


def _gifs(f: PisotField, space: ChartSpace, obj, path: str) -> Gifs:
    vertices_spec = obj.get("vertices")
    edges_spec = obj.get("edges")
    if not isinstance(vertices_spec, list) or not vertices_spec:
        raise ParseError("gifs.vertices must be a non-empty list", path)
    if not isinstance(edges_spec, list) or not edges_spec:
        raise ParseError("gifs.edges must be a non-empty list", path)
    vertices = []
    for vi, v in enumerate(vertices_spec):
        vpath = f"{path}.vertices[{vi}]"
        if not isinstance(v, dict) or "w" not in v:
            raise ParseError("vertex must be an object with 'w' (and optional 'u')", vpath)
        w = _region(f, v["w"], space.dim, f"{vpath}.w")
        u = _region(f, v["u"], space.dim, f"{vpath}.u") if "u" in v else w
        vertices.append(GifsVertex(w=w, u=u))
    edges = []
    for ei, e in enumerate(edges_spec):
        epath = f"{path}.edges[{ei}]"
        if not isinstance(e, dict):
            raise ParseError("edge must be an object", epath)
        src = e.get("src")
        dst = e.get("dst")
        if not isinstance(src, int) or not isinstance(dst, int):
            raise ParseError("edge src/dst must be 1-based integers", epath)
        if not (1 <= src <= len(vertices) and 1 <= dst <= len(vertices)):
            raise SemanticError(f"edge references vertex outside 1..{len(vertices)}", epath)
        mapping = _similitude(f, e.get("map"), space.dim, space, f"{epath}.map")
        edges.append(Edge(src - 1, dst - 1, mapping))
    return Gifs(vertices, edges)


def parse_scene(doc: dict, name: str = "<scene>") -> SceneConfig:
    if not isinstance(doc, dict):
        raise ParseError("scene must be a JSON object", name)
    field_spec = doc.get("field")
    if not isinstance(field_spec, dict):
        raise ParseError("missing 'field' section", name)
    minpoly = field_spec.get("minpoly")
    bracket = field_spec.get("root_bracket")
    if not isinstance(minpoly, list) or not isinstance(bracket, list) or len(bracket) != 2:
        raise ParseError("field needs 'minpoly' (list) and 'root_bracket' (pair)", name)
    f = PisotField(minpoly, (
        _rational(bracket[0], f"{name}.field"),
        _rational(bracket[1], f"{name}.field"),
    ))
    space = _space(f, doc.get("space"), f"{name}.space")

    has_irs = "irs" in doc
    has_gifs = "gifs" in doc
    if has_irs == has_gifs:
        raise SemanticError("scene must contain exactly one of 'irs' or 'gifs'", name)

    solver = SolverSettings()
    s = doc.get("solver", {})
    if not isinstance(s, dict):
        raise ParseError("solver must be an object", name)
    solver.tol = float(s.get("tol", solver.tol))
    solver.max_levels = int(s.get("max_levels", solver.max_levels))
    solver.verify_depth = int(s.get("verify_depth", solver.verify_depth))
    solver.path_cap = int(s.get("path_cap", solver.path_cap))
    if solver.tol <= 0 or solver.verify_depth < 1 or solver.max_levels < 2:
        raise SemanticError("solver settings out of range", name)

    render = RenderSettings()
    r = doc.get("render", {})
    if not isinstance(r, dict):
        raise ParseError("render must be an object", name)
    render.width = int(r.get("width", render.width))
    render.height = int(r.get("height", render.height))
    render.depth = int(r.get("depth", render.depth))
    if render.width < 1 or render.height < 1 or render.depth < 0:
        raise SemanticError("render settings out of range", name)

    irs = _irs(f, space, doc["irs"], f"{name}.irs") if has_irs else None
    gifs = _gifs(f, space, doc["gifs"], f"{name}.gifs") if has_gifs else None

    return SceneConfig(
        name=doc.get("name", name),
        field=f,
        space=space,
        irs=irs,
        gifs=gifs,
        solver=solver,
        render=render,
        raw=doc,
    )


def load_scene(path) -> SceneConfig:
    p = Path(path)
    if not p.exists():
        raise ParseError("file does not exist", str(p))
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", str(p))
    return parse_scene(doc, name=p.name)
