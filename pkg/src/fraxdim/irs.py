"""Iterated relation systems as piecewise branch families on a chart.

Relations are stored extensionally: a multivalued piece carries >= 2
affine branches over one domain, a single-valued piece exactly one.  The
chart is a box in local coordinates; periodic axes record their period and
each branch declares how its lift wraps (an integer translate per periodic
axis, already baked into the stored map).

Assembly follows the construction behind the sufficient containment
condition: candidate vertex sets are the closures of branch images plus
the closures of E_k0 intersected with the multivalued pieces; contained
candidates are absorbed, edges restrict branches to the surviving sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraicNumber, PisotField
from .boxes import Box, RegionSet, split_box_at_many
from .errors import AssemblyRefused, BranchDomainGap
from .graph import Edge, Gifs, GifsVertex, Report
from .maps import Similitude

ITERATION_BOX_CAP = 200_000


@dataclass
class ChartSpace:
    field: PisotField
    dim: int
    periods: Tuple[Optional[AlgebraicNumber], ...]  # None on non-periodic axes
    e0: RegionSet
    units: Tuple[Optional[str], ...] = ()

    def __post_init__(self):
        if len(self.periods) != self.dim:
            raise ValueError("periods must list one entry per axis")
        for p in self.periods:
            if p is not None and p.sign() <= 0:
                raise ValueError("periods must be positive")
        if self.e0.is_empty():
            raise ValueError("E0 must be nonempty")


@dataclass
class Branch:
    domain: RegionSet
    map: Similitude  # wrap translate already applied
    wrap: Tuple[int, ...] = ()
    closed_faces: str = "lower"  # bookkeeping only; geometry uses closures


@dataclass
class Piece:
    domain: RegionSet
    branches: List[Branch]
    multivalued: bool


@dataclass
class Relation:
    name: str
    pieces: List[Piece]

    @property
    def h_pieces(self):
        return [p for p in self.pieces if p.multivalued]

    @property
    def j_pieces(self):
        return [p for p in self.pieces if not p.multivalued]


@dataclass
class IrsSpec:
    space: ChartSpace
    relations: List[Relation]
    condition_c: bool = True
    open_family: List[Tuple[Box, Box]] = field(default_factory=list)  # (match W box, U box)


# ---------------------------------------------------------------------------
# iteration


def _domain_cuts(relation: Relation, dim: int):
    cuts = [set() for _ in range(dim)]
    for piece in relation.pieces:
        for box in piece.domain.boxes:
            for axis in range(dim):
                cuts[axis].add(box.lo[axis])
                cuts[axis].add(box.hi[axis])
    return [sorted(c, key=lambda a: a.coeffs) for c in cuts]


def _apply_relation(relation: Relation, region: RegionSet, dim: int) -> List[Box]:
    out = []
    cuts = _domain_cuts(relation, dim)
    for box in region.boxes:
        for sub in split_box_at_many(box, cuts):
            hits = []
            for piece in relation.pieces:
                part_boxes = []
                for dom in piece.domain.boxes:
                    inter = sub.intersect(dom)
                    if inter is None:
                        continue
                    ok = True
                    for axis in range(dim):
                        if inter.lo[axis] == inter.hi[axis] and dom.lo[axis] != dom.hi[axis] and sub.lo[axis] != sub.hi[axis]:
                            # face-only contact with a fat domain: the
                            # neighbouring sub-box covers these values
                            ok = False
                            break
                    if ok:
                        part_boxes.append(inter)
                if part_boxes:
                    hits.append((piece, part_boxes))
            if not hits:
                raise BranchDomainGap(
                    f"relation {relation.name}: box {sub} meets no branch domain"
                )
            for piece, part_boxes in hits:
                for branch in piece.branches:
                    for part in part_boxes:
                        out.append(branch.map.apply_box(part))
    return out


def iterate_attractor(spec: IrsSpec, depth: int, resolution: int = ITERATION_BOX_CAP) -> RegionSet:
    """Over-approximation of E_depth as a closed box union."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    region = spec.space.e0
    for _ in range(depth):
        boxes: List[Box] = []
        for relation in spec.relations:
            boxes.extend(_apply_relation(relation, region, spec.space.dim))
        region = RegionSet(boxes)
        if len(region.boxes) > resolution:
            raise BranchDomainGap(
                f"iteration produced {len(region.boxes)} boxes (cap {resolution})"
            )
    return region


def iterate_from(spec: IrsSpec, region: RegionSet, steps: int) -> RegionSet:
    for _ in range(steps):
        boxes: List[Box] = []
        for relation in spec.relations:
            boxes.extend(_apply_relation(relation, region, spec.space.dim))
        region = RegionSet(boxes)
    return region


# ---------------------------------------------------------------------------
# validation


def validate_decomposition(spec: IrsSpec) -> Report:
    report = Report("validate-decomposition")
    e0 = spec.space.e0
    for rel in spec.relations:
        for pi, piece in enumerate(rel.pieces):
            label = f"{rel.name} piece {pi + 1}"
            if piece.multivalued and len(piece.branches) < 2:
                report.add(f"{label}: multivalued piece with fewer than 2 branches")
            if not piece.multivalued and len(piece.branches) != 1:
                report.add(f"{label}: single-valued piece must carry exactly one branch")
            for bi, branch in enumerate(piece.branches):
                if not branch.map.is_contraction():
                    report.add(
                        f"{label} branch {bi + 1}: non-contractive branch "
                        f"(ratio_exp {branch.map.ratio_exp})"
                    )
                image = branch.map.apply_region(branch.domain)
                if not e0.covers(image):
                    report.add(f"{label} branch {bi + 1}: image leaves E0 after wrapping")
        cover = RegionSet(
            [b for piece in rel.pieces for b in piece.domain.boxes]
        )
        for box in e0.boxes:
            if not cover.covers_box(box):
                report.add(f"{rel.name}: cover gap (piece domains miss part of E0)")
                break
    return report


def validate_containments(spec: IrsSpec) -> Report:
    """Each branch image closure must sit inside one piece closure of the
    same relation, otherwise assembly is refused."""
    report = Report("validate-containments")
    for rel in spec.relations:
        closures = [p.domain for p in rel.pieces]
        for pi, piece in enumerate(rel.pieces):
            for bi, branch in enumerate(piece.branches):
                image = branch.map.apply_region(branch.domain)
                if not any(c.covers(image) for c in closures):
                    report.add(
                        f"{rel.name} piece {pi + 1} branch {bi + 1}: image straddles "
                        "piece boundaries (no single piece closure contains it)"
                    )
    return report


# ---------------------------------------------------------------------------
# assembly


def _vertex_sort_key(region: RegionSet):
    """Reading order: first axis ascending, second axis descending (top to
    bottom on the chart), remaining axes ascending."""
    box = region.boxes[0]
    key = []
    for axis in range(box.dim):
        coeffs = box.lo[axis].coeffs
        if axis == 1:
            key.append(tuple(-c for c in coeffs))
        else:
            key.append(coeffs)
    return tuple(key) + region.key()


def is_plain_ifs(spec: IrsSpec) -> bool:
    """True when every relation is one single-valued branch on all of E0."""
    for rel in spec.relations:
        if len(rel.pieces) != 1 or rel.pieces[0].multivalued:
            return False
        if not rel.pieces[0].domain.covers(spec.space.e0):
            return False
    return True


def associated_base(spec: IrsSpec) -> Tuple[int, RegionSet]:
    """The stage E_k0 the associated GIFS is built on: k0 = 0 for a plain
    IFS (the vertex set is E0 itself), k0 = 1 otherwise."""
    if is_plain_ifs(spec):
        return 0, spec.space.e0
    return 1, iterate_attractor(spec, 1)


def assemble_gifs(spec: IrsSpec, e_k0: Optional[RegionSet] = None) -> Gifs:
    dec = validate_decomposition(spec)
    if not dec.ok:
        raise AssemblyRefused(dec)
    con = validate_containments(spec)
    if not con.ok:
        raise AssemblyRefused(con)

    if is_plain_ifs(spec):
        # an IFS is associated to itself on E_0: one vertex, one edge per map
        region = spec.space.e0
        vertices = [GifsVertex(w=region, u=_open_part(spec, region))]
        edges = [
            Edge(0, 0, rel.pieces[0].branches[0].map) for rel in spec.relations
        ]
        edges.sort(key=lambda e: (e.src, e.dst, e.map.key()))
        return Gifs(vertices, edges)

    if e_k0 is None:
        e_k0 = iterate_attractor(spec, 1)

    # candidate vertex sets
    candidates: List[RegionSet] = []

    def push(region: RegionSet):
        if not region.is_empty():
            candidates.append(region)

    for rel in spec.relations:
        for piece in rel.pieces:
            for branch in piece.branches:
                push(branch.map.apply_region(branch.domain))
            if piece.multivalued:
                push(e_k0.intersect(piece.domain))

    # absorb candidates covered by another candidate
    survivors: List[RegionSet] = []
    for i, cand in enumerate(candidates):
        absorbed = False
        for j, other in enumerate(candidates):
            if i == j:
                continue
            if other.covers(cand):
                if cand.covers(other) and i < j:
                    continue  # equal; keep the earliest
                absorbed = True
                break
        if not absorbed and not any(s.equals(cand) for s in survivors):
            survivors.append(cand)

    survivors.sort(key=_vertex_sort_key)

    vertices = []
    for region in survivors:
        u = _open_part(spec, region)
        vertices.append(GifsVertex(w=region, u=u))

    # edges: each branch restricted to every surviving set inside its
    # domain.  The edge's source is the survivor that absorbed the branch's
    # own image closure (several overlapping vertices may contain a single
    # restricted image; the branch's image set is the canonical host).
    edges = []
    seen = set()
    for rel in spec.relations:
        for piece in rel.pieces:
            for branch in piece.branches:
                branch_image = branch.map.apply_region(branch.domain)
                src = None
                for s, cand in enumerate(survivors):
                    if cand.covers(branch_image):
                        src = s
                        break
                if src is None:
                    raise AssemblyRefused(
                        Report(
                            "assemble",
                            [f"{rel.name}: a branch image is not inside any vertex set"],
                        )
                    )
                for j, region in enumerate(survivors):
                    if not piece.domain.covers(region):
                        continue
                    edge = Edge(src, j, branch.map)
                    if edge.key() not in seen:
                        seen.add(edge.key())
                        edges.append(edge)
    edges.sort(key=lambda e: (e.src, e.dst, e.map.key()))
    g = Gifs(vertices, edges)
    return g.minimal_simplify()


def _open_part(spec: IrsSpec, region: RegionSet) -> RegionSet:
    for match, u_box in spec.open_family:
        if len(region.boxes) == 1 and region.boxes[0] == match:
            return RegionSet([u_box])
    return region  # interiors of the same boxes (open interpretation)


# ---------------------------------------------------------------------------
# association check


@dataclass
class AssociationReport:
    ok: bool
    checked_depth: int
    failed_q: Optional[int] = None
    detail: str = ""

    def to_dict(self):
        return {
            "ok": self.ok,
            "checked_depth": self.checked_depth,
            "failed_q": self.failed_q,
            "detail": self.detail,
        }


def verify_association(
    spec: IrsSpec, g: Gifs, max_q: int = 3, e_k0: Optional[RegionSet] = None
) -> AssociationReport:
    if max_q < 1:
        raise ValueError("max_q must be >= 1")
    if e_k0 is None:
        e_k0 = associated_base(spec)[1]
    lhs = e_k0
    for q in range(1, max_q + 1):
        lhs = iterate_from(spec, lhs, 1)
        images = []
        for path in g.enumerate_paths(q):
            images.extend(path.map.apply_region(g.vertices[path.dst].w).boxes)
        rhs = RegionSet(images)
        if not rhs.covers(lhs):
            missing = _first_gap(lhs, rhs)
            return AssociationReport(False, q, q, f"relation iterate not covered: {missing}")
        if not lhs.covers(rhs):
            missing = _first_gap(rhs, lhs)
            return AssociationReport(False, q, q, f"path images exceed iterate: {missing}")
    return AssociationReport(True, max_q)


def _first_gap(big: RegionSet, small: RegionSet) -> str:
    for box in big.boxes:
        left = small.uncovered_part(box)
        if left:
            return repr(left[0])
    return "?"
