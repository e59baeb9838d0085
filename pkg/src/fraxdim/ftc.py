"""Graph finite type condition machine.

Level-k vertices are the distinct composed path maps together with the
graph vertex whose sets they act on; two paths whose compositions agree as
exact maps on the same set are one vertex, whichever history produced
them.  (Keeping the path's source label in the identity would count an
exactly-overlapping piece twice and inflate the spectral radius; the
realized sources are retained as a host set and drive the neighborhood
source condition instead.)

Neighborhoods collect same-level vertices with a shared host whose open
images intersect; the canonical form of a neighborhood is the owner's
target plus the sorted multiset of (relative map, target) over members.
Offspring agreement is enforced afterwards by partition refinement over
the reduced graph, which keeps only the smallest continuation edge into
each vertex and prunes offspring-less lineages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .algebra import rational_gcd
from .boxes import RegionSet
from .dimension import RatioMatrix
from .errors import InconsistentRepresentatives, LevelCapExceeded
from .graph import Gifs, Report
from .maps import SignedPermutation, Similitude

DEFAULT_MAX_LEVELS = 8


# ---------------------------------------------------------------------------
# Pisot sufficiency check


def check_pisot_hypotheses(g: Gifs) -> Report:
    report = Report("pisot-hypotheses")
    if not g.edges:
        report.add("graph has no edges")
        return report
    field_ = g.edges[0].map.field
    for idx, e in enumerate(g.edges):
        if e.map.field is not field_:
            report.add(f"edge {idx + 1}: lives in a different field")
        if e.map.ratio_exp < 1:
            report.add(f"edge {idx + 1}: ratio is not a negative power of beta")

    n = g.edges[0].map.dim
    group = {e.map.orth.key(): e.map.orth for e in g.edges}
    ident = SignedPermutation.identity(n)
    group[ident.key()] = ident
    frontier = list(group.values())
    cap = (2**n) * _factorial(n)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(group.values()):
                for c in (a.compose(b), b.compose(a)):
                    if c.key() not in group:
                        group[c.key()] = c
                        nxt.append(c)
        frontier = nxt
        if len(group) > cap:
            report.add("orthogonal closure exceeded the signed-permutation bound")
            break

    # translation lattice: orbit of the translations under the group, then
    # the rational gcd of the coefficient entries per axis
    lattice = []
    for axis in range(n):
        entries = []
        for e in g.edges:
            for orth in group.values():
                vec = orth.apply(e.map.trans)
                entries.extend(vec[axis].coeffs)
        lattice.append(rational_gcd(entries))
    report.data["group_order"] = len(group)
    report.data["lattice"] = [str(r) for r in lattice]
    return report


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# vertices and levels


@dataclass
class FtcVertex:
    map: Similitude
    target: int
    level: int
    host: int  # source vertex of the kept lineage
    image: RegionSet
    rep_path: Tuple[int, ...]
    in_edges: List[Tuple[Tuple, int]] = field(default_factory=list)  # (parent key, edge idx)
    kept_parent: Optional[Tuple[Tuple, int]] = None
    pruned: bool = False
    form_id: int = -1
    float_box: Optional[Tuple[Tuple[float, ...], Tuple[float, ...]]] = None

    def key(self):
        return (self.map.key(), self.target, self.level)

    def path_label(self) -> str:
        if not self.rep_path:
            return f"root{self.target + 1}"
        return "e" + "e".join(str(i + 1) for i in self.rep_path)

    def bounding_floats(self):
        if self.float_box is None:
            los, his = [], []
            for box in self.image.boxes:
                flo, fhi = box.float_bounds(1e-13)
                los.append(flo)
                his.append(fhi)
            lo = tuple(min(c) for c in zip(*los))
            hi = tuple(max(c) for c in zip(*his))
            self.float_box = (lo, hi)
        return self.float_box


def make_roots(g: Gifs) -> List[FtcVertex]:
    field_ = g.edges[0].map.field
    dim = g.edges[0].map.dim
    roots = []
    for i, v in enumerate(g.vertices):
        roots.append(
            FtcVertex(
                map=Similitude.identity(field_, dim),
                target=i,
                level=0,
                host=i,
                image=v.u,
                rep_path=(),
            )
        )
    return roots


def generate_level(g: Gifs, previous: Sequence[FtcVertex], k: int) -> List[FtcVertex]:
    """Compose each live parent with each admissible continuation edge and
    merge structurally equal results."""
    table: Dict[Tuple, FtcVertex] = {}
    order: List[Tuple] = []
    for parent in previous:
        for idx in g.edges_from(parent.target):
            e = g.edges[idx]
            composed = parent.map.compose(e.map)
            key = (composed.key(), e.dst, k)
            node = table.get(key)
            if node is None:
                node = FtcVertex(
                    map=composed,
                    target=e.dst,
                    level=k,
                    host=parent.host,
                    image=composed.apply_region(g.vertices[e.dst].u),
                    rep_path=parent.rep_path + (idx,),
                )
                table[key] = node
                order.append(key)
            else:
                node.rep_path = min(node.rep_path, parent.rep_path + (idx,))
            node.in_edges.append((parent.key(), idx))
    out = [table[k_] for k_ in order]
    out.sort(key=lambda v: (v.map.key(), v.target))
    return out


def reduce_level(level: Sequence[FtcVertex], removed: List[dict], by_key: Dict[Tuple, FtcVertex]):
    """Keep only the lexicographically smallest continuation edge into each
    vertex; record the losers with their coincidence witnesses.  The kept
    lineage also fixes the vertex's host (its neighborhood source)."""
    for v in level:
        ordered = sorted(v.in_edges, key=lambda pe: (pe[1], by_key[pe[0]].rep_path))
        v.kept_parent = ordered[0]
        keeper = by_key[ordered[0][0]]
        v.host = keeper.host
        if len(ordered) == 1:
            continue
        kept_word = keeper.rep_path + (ordered[0][1],)
        for parent_key, edge_idx in ordered[1:]:
            parent = by_key[parent_key]
            removed.append(
                {
                    "level": v.level,
                    "kept": _word(kept_word),
                    "removed": _word(parent.rep_path + (edge_idx,)),
                    "witness": f"f[{_word(parent.rep_path + (edge_idx,))}] = "
                    f"f[{_word(kept_word)}] (exact map equality)",
                }
            )


def _word(path: Tuple[int, ...]) -> str:
    return "".join(f"e{i + 1}" for i in path)


def kept_children(
    levels: List[List[FtcVertex]], k: int
) -> Dict[Tuple, List[Tuple["FtcVertex", int]]]:
    """parent key -> [(child, continuation edge idx)] using kept edges only."""
    out: Dict[Tuple, List[Tuple[FtcVertex, int]]] = {}
    if k + 1 >= len(levels):
        return out
    for child in levels[k + 1]:
        if child.kept_parent is None:
            continue
        parent_key, edge_idx = child.kept_parent
        out.setdefault(parent_key, []).append((child, edge_idx))
    return out


def prune_offspringless(levels: List[List[FtcVertex]]):
    """Mark non-root vertices below the frontier whose kept lineage died.

    Marking is informational only: a vertex whose children all lost their
    tie-breaks keeps an empty transition row, which is an absorbing class
    with no effect on the spectral radius.  Removing such vertices (as the
    hand computation does) would make rows depend on how deep the removal
    cascade has been explored, so the matrix keeps them.
    """
    changed = True
    while changed:
        changed = False
        for k in range(len(levels) - 2, 0, -1):
            children = kept_children(levels, k)
            for v in levels[k]:
                if v.pruned:
                    continue
                kids = [c for c, _ in children.get(v.key(), []) if not c.pruned]
                if not kids:
                    v.pruned = True
                    changed = True


# ---------------------------------------------------------------------------
# neighborhoods and canonical forms

_PRESCREEN_EPS = 1e-9


def _float_overlap(a: FtcVertex, b: FtcVertex, eps: float = _PRESCREEN_EPS) -> int:
    """-1 definitely disjoint, +1 definitely overlapping, 0 undecided."""
    alo, ahi = a.bounding_floats()
    blo, bhi = b.bounding_floats()
    verdict = 1
    for lo1, hi1, lo2, hi2 in zip(alo, ahi, blo, bhi):
        lo = max(lo1, lo2)
        hi = min(hi1, hi2)
        if hi - lo < -eps:
            return -1
        if hi - lo < eps:
            verdict = 0
    return verdict


def compute_neighborhood(v: FtcVertex, level_set: Sequence[FtcVertex]) -> List[FtcVertex]:
    members = []
    for u in level_set:
        if u.level != v.level or u.host != v.host:
            continue
        if u is v:
            members.append(u)
            continue
        quick = _float_overlap(u, v)
        if quick < 0:
            continue
        if len(u.image.boxes) == 1 and len(v.image.boxes) == 1 and quick > 0:
            members.append(u)
            continue
        if u.image.intersects_open(v.image):
            members.append(u)
    return members


def neighborhoods_by_host(level: Sequence[FtcVertex]) -> Dict[Tuple, List[FtcVertex]]:
    """Neighborhood members for every vertex of one level: overlap is
    symmetric, so one sweep over float x-extents per host bucket fills both
    sides of every overlapping pair."""
    members: Dict[Tuple, List[FtcVertex]] = {v.key(): [v] for v in level}
    buckets: Dict[int, List[FtcVertex]] = {}
    for v in level:
        buckets.setdefault(v.host, []).append(v)
    for bucket in buckets.values():
        bucket.sort(key=lambda v: v.bounding_floats()[0][0])
        for i, v in enumerate(bucket):
            v_hi = v.bounding_floats()[1][0]
            for u in bucket[i + 1 :]:
                if u.bounding_floats()[0][0] > v_hi + _PRESCREEN_EPS:
                    break
                if _member_test(u, v):
                    members[v.key()].append(u)
                    members[u.key()].append(v)
    return members


def _member_test(u: FtcVertex, v: FtcVertex) -> bool:
    quick = _float_overlap(u, v)
    if quick < 0:
        return False
    if quick > 0 and len(u.image.boxes) == 1 and len(v.image.boxes) == 1:
        return True
    return u.image.intersects_open(v.image)


def neighborhood_form(v: FtcVertex, members: Sequence[FtcVertex]):
    # pull members back to the owner's scale: v ~ v' via the isometry
    # f_v' o f_v^-1 holds exactly when the multisets {f_v^-1 o f_u} agree,
    # and these relative maps live on a bounded lattice
    inv = v.map.inverse()
    entries = sorted((u.target, inv.compose(u.map).key()) for u in members)
    return (v.target, tuple(entries))


class TypeRegistry:
    def __init__(self):
        self.forms: Dict[Tuple, int] = {}

    def classify(self, form) -> int:
        if form not in self.forms:
            self.forms[form] = len(self.forms)
        return self.forms[form]


# ---------------------------------------------------------------------------
# the detector


@dataclass
class ReducedGraphReport:
    finite: bool
    levels_explored: int
    type_count: int
    transitions: Dict[int, Tuple[Tuple[int, int], ...]]  # type -> sorted (child type, exp)
    removed_edges: List[dict]
    root_types: List[int]
    type_members: Dict[int, List[str]]
    matrix: Optional[RatioMatrix] = None
    note: str = ""

    def to_dict(self):
        return {
            "finite": self.finite,
            "levels_explored": self.levels_explored,
            "type_count": self.type_count,
            "root_types": [t + 1 for t in self.root_types],
            "transitions": {
                str(t + 1): [[c + 1, exp] for c, exp in row]
                for t, row in sorted(self.transitions.items())
            },
            "removed_edges": self.removed_edges,
            "type_members": {
                str(t + 1): members[:16] for t, members in sorted(self.type_members.items())
            },
            "note": self.note,
        }


def detect_finite_type(g: Gifs, max_levels: int = DEFAULT_MAX_LEVELS) -> ReducedGraphReport:
    if max_levels < 2:
        raise ValueError("max_levels must be >= 2")
    roots = make_roots(g)
    levels: List[List[FtcVertex]] = [roots]
    by_key: Dict[Tuple, FtcVertex] = {v.key(): v for v in roots}
    removed: List[dict] = []

    registry = TypeRegistry()
    forms_seen: Set[Tuple] = set()
    for r in roots:
        form = neighborhood_form(r, compute_neighborhood(r, roots))
        r.form_id = registry.classify(form)
        forms_seen.add(form)

    last_error = "level cap reached before a stable level"
    for k in range(1, max_levels + 1):
        level = generate_level(g, levels[-1], k)
        if not level:
            last_error = "system died out (no paths)"
            break
        for v in level:
            by_key[v.key()] = v
        reduce_level(level, removed, by_key)
        levels.append(level)

        new_form = False
        member_map = neighborhoods_by_host(level)
        for v in level:
            form = neighborhood_form(v, member_map[v.key()])
            v.form_id = registry.classify(form)
            if form not in forms_seen:
                forms_seen.add(form)
                new_form = True

        if new_form or k < 2:
            continue
        result = _refine_and_build(g, levels, removed)
        if result is not None:
            result.levels_explored = k
            return result
        last_error = "refinement split a frontier class; needs deeper exploration"

    partial = ReducedGraphReport(
        finite=False,
        levels_explored=min(max_levels, len(levels) - 1),
        type_count=len(registry.forms),
        transitions={},
        removed_edges=removed,
        root_types=[r.form_id for r in roots],
        type_members={},
        note=f"finite type not detected within {max_levels} levels: {last_error}",
    )
    raise LevelCapExceeded(partial.note, partial)


def _refine_and_build(
    g: Gifs, levels: List[List[FtcVertex]], removed: List[dict]
) -> Optional[ReducedGraphReport]:
    """Depth-indexed partition refinement (bounded bisimulation).

    c_0 is the neighborhood-form partition on every explored vertex;
    c_{n+1}(v) = (c_n(v), sorted multiset of (c_n(child), ratio exp)) is
    defined for vertices at least n+1 levels above the frontier.  Types
    are certified at the smallest depth n where c_{n+1} induces the same
    partition as c_n on their common prefix and no c_n class appears first
    on the deepest usable level; otherwise the caller explores deeper.
    """
    K = len(levels) - 1
    child_map: Dict[Tuple, List[Tuple[FtcVertex, int]]] = {}
    for k in range(K):
        child_map.update(kept_children(levels, k))

    def prefix(depth_limit: int) -> List[FtcVertex]:
        return [v for k in range(depth_limit + 1) for v in levels[k]]

    colors: Dict[Tuple, Tuple] = {
        v.key(): ("f", v.form_id) for k in range(K + 1) for v in levels[k]
    }

    for n in range(K):
        usable = K - (n + 1)  # deepest level with c_{n+1} defined
        nxt: Dict[Tuple, Tuple] = {}
        for k in range(usable + 1):
            for v in levels[k]:
                kids = child_map.get(v.key(), [])
                row = tuple(
                    sorted((colors[c.key()], g.edges[i].map.ratio_exp) for c, i in kids)
                )
                nxt[v.key()] = (colors[v.key()], row)

        # stable iff the new colors do not split any class on the prefix
        split = False
        rep_color: Dict[Tuple, Tuple] = {}
        for v in prefix(usable):
            old = colors[v.key()]
            new = nxt[v.key()]
            if old in rep_color:
                if rep_color[old] != new:
                    split = True
                    break
            else:
                rep_color[old] = new
        if not split:
            deep_classes = {colors[v.key()] for v in levels[usable + 1]} if usable + 1 <= K else set()
            shallow_classes = {colors[v.key()] for v in prefix(usable)}
            if deep_classes <= shallow_classes:
                return _build_report(g, levels, removed, child_map, colors, usable)
            return None
        colors.update(nxt)
    return None


def _build_report(
    g: Gifs,
    levels: List[List[FtcVertex]],
    removed: List[dict],
    child_map: Dict[Tuple, List[Tuple[FtcVertex, int]]],
    colors: Dict[Tuple, Tuple],
    usable: int,
) -> ReducedGraphReport:
    # final ids: root classes first in vertex order, then first appearance
    # in (level, canonical vertex order)
    final_ids: Dict[Tuple, int] = {}

    def touch(cls: Tuple):
        if cls not in final_ids:
            final_ids[cls] = len(final_ids)

    for r in levels[0]:
        touch(colors[r.key()])
    reps: Dict[int, List[FtcVertex]] = {}
    for k in range(usable + 1):
        for v in sorted(levels[k], key=lambda v: (v.map.key(), v.target)):
            touch(colors[v.key()])
    for k in range(usable + 1):
        for v in levels[k]:
            reps.setdefault(final_ids[colors[v.key()]], []).append(v)

    transitions: Dict[int, Tuple[Tuple[int, int], ...]] = {}
    for cls, vs in sorted(reps.items()):
        rows = set()
        for v in vs:
            kids = child_map.get(v.key(), [])
            row = tuple(
                sorted(
                    (final_ids[colors[c.key()]], g.edges[i].map.ratio_exp) for c, i in kids
                )
            )
            rows.add(row)
        if len(rows) != 1:
            raise InconsistentRepresentatives(
                f"type {cls + 1} has representatives with differing offspring rows"
            )
        transitions[cls] = rows.pop()

    type_members: Dict[int, List[str]] = {}
    for k in range(usable + 1):
        for v in levels[k]:
            type_members.setdefault(final_ids[colors[v.key()]], []).append(v.path_label())

    report = ReducedGraphReport(
        finite=True,
        levels_explored=len(levels) - 1,
        type_count=len(final_ids),
        transitions=transitions,
        removed_edges=removed,
        root_types=[final_ids[colors[r.key()]] for r in levels[0]],
        type_members=type_members,
    )
    report.matrix = weighted_incidence(report, g)
    return report


def weighted_incidence(report: ReducedGraphReport, g: Gifs) -> RatioMatrix:
    cells: Dict[Tuple[int, int], List[int]] = {}
    for t, row in report.transitions.items():
        for child_type, exp in row:
            cells.setdefault((t, child_type), []).append(exp)
    fixed = {key: tuple(sorted(v)) for key, v in cells.items()}
    field_ = g.edges[0].map.field
    return RatioMatrix(report.type_count, fixed, field_)
