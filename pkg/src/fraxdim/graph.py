"""Directed multigraph of contractive similitudes with invariant box families.

Edge (src i, dst j, f) means f maps the dst vertex's sets into the src
vertex's: f(U_j) subset U_i.  A directed path (e_1, ..., e_q) chains
dst(e_l) == src(e_{l+1}) and composes to f_{e_1} o ... o f_{e_q}, acting on
the last vertex's sets.  Vertex and edge indices are 0-based internally;
reports use 1-based labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .boxes import RegionSet
from .errors import NonAdjacentEdges
from .maps import Similitude


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    map: Similitude

    def key(self):
        return (self.src, self.dst, self.map.key())


@dataclass
class GifsVertex:
    w: RegionSet
    u: RegionSet


class Gifs:
    def __init__(self, vertices: Sequence[GifsVertex], edges: Sequence[Edge]):
        self.vertices = list(vertices)
        self.edges = list(edges)
        m = len(self.vertices)
        for e in self.edges:
            if not (0 <= e.src < m and 0 <= e.dst < m):
                raise ValueError(f"edge {e} references a vertex outside [0, {m})")
        self._out: Dict[int, List[int]] = {i: [] for i in range(m)}
        for idx, e in enumerate(self.edges):
            self._out[e.src].append(idx)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def edges_from(self, vertex: int) -> List[int]:
        return self._out[vertex]

    # -- validation ------------------------------------------------------

    def validate(self) -> "Report":
        report = Report("gifs-validate")
        for idx, e in enumerate(self.edges):
            if not e.map.is_contraction():
                report.add(f"edge {idx + 1}: map is not a contraction (ratio_exp {e.map.ratio_exp})")
            img_w = e.map.apply_region(self.vertices[e.dst].w)
            if not self.vertices[e.src].w.covers(img_w):
                report.add(f"edge {idx + 1}: f(W_{e.dst + 1}) not inside W_{e.src + 1}")
            img_u = e.map.apply_region(self.vertices[e.dst].u)
            if not _open_region_inside(img_u, self.vertices[e.src].u):
                report.add(f"edge {idx + 1}: f(U_{e.dst + 1}) not inside U_{e.src + 1}")
        for i, v in enumerate(self.vertices):
            if v.u.is_empty() or v.w.is_empty():
                report.add(f"vertex {i + 1}: empty set family")
            for b in v.u.boxes:
                if b.is_degenerate():
                    report.add(f"vertex {i + 1}: open set has a degenerate box")
        return report

    # -- paths -----------------------------------------------------------

    def compose_path(self, edge_indices: Sequence[int]) -> "DirectedPath":
        if not edge_indices:
            raise NonAdjacentEdges("empty path")
        edges = [self.edges[i] for i in edge_indices]
        for a, b in zip(edges, edges[1:]):
            if a.dst != b.src:
                raise NonAdjacentEdges(f"edges {a} and {b} do not chain")
        composed = edges[0].map
        for e in edges[1:]:
            composed = composed.compose(e.map)
        return DirectedPath(tuple(edge_indices), edges[0].src, edges[-1].dst, composed)

    def enumerate_paths(self, q: int) -> List["DirectedPath"]:
        if q < 1:
            raise ValueError("path length must be >= 1")
        paths = [
            DirectedPath((i,), e.src, e.dst, e.map) for i, e in enumerate(self.edges)
        ]
        for _ in range(q - 1):
            nxt = []
            for p in paths:
                for idx in self._out[p.dst]:
                    e = self.edges[idx]
                    nxt.append(
                        DirectedPath(
                            p.edge_indices + (idx,), p.src, e.dst, p.map.compose(e.map)
                        )
                    )
            paths = nxt
        paths.sort(key=lambda p: p.edge_indices)
        return paths

    def count_paths(self, q: int) -> int:
        counts = [1] * len(self.edges)
        for _ in range(q - 1):
            nxt = []
            for i, e in enumerate(self.edges):
                nxt.append(sum(counts[j] for j in self._out[e.dst]))
            counts = nxt
        return sum(counts)

    def is_strongly_connected(self) -> bool:
        m = self.vertex_count
        if m == 0:
            return False
        fwd = {i: set() for i in range(m)}
        rev = {i: set() for i in range(m)}
        for e in self.edges:
            fwd[e.src].add(e.dst)
            rev[e.dst].add(e.src)

        def reach(adj):
            seen = {0}
            stack = [0]
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            return seen

        return len(reach(fwd)) == m and len(reach(rev)) == m

    # -- separation ------------------------------------------------------

    def check_gosc(self) -> "GoscReport":
        violations = []
        images = [e.map.apply_region(self.vertices[e.dst].u) for e in self.edges]
        by_src: Dict[int, List[int]] = {}
        for idx, e in enumerate(self.edges):
            by_src.setdefault(e.src, []).append(idx)
        for src, idxs in sorted(by_src.items()):
            for a_pos, a in enumerate(idxs):
                for b in idxs[a_pos + 1 :]:
                    if images[a].intersects_open(images[b]):
                        violations.append((a, b))
        return GoscReport(holds=not violations, violations=violations)

    # -- simplification ----------------------------------------------------

    def minimal_simplify(self) -> "Gifs":
        g = self
        while True:
            candidate = g._find_removable()
            if candidate is None:
                return g
            g = g._remove_vertex(*candidate)

    def _find_removable(self) -> Optional[Tuple[int, int]]:
        m = self.vertex_count
        for v in range(m):
            for u in range(m):
                if u == v:
                    continue
                wv, wu = self.vertices[v].w, self.vertices[u].w
                if not wu.covers(wv):
                    continue
                if wv.covers(wu) and v < u:
                    continue  # equal sets: keep the lowest index
                if self._removal_ok(v, u):
                    return (v, u)
        return None

    def _removal_ok(self, v: int, u: int) -> bool:
        # every edge acting on W_v must still land inside some vertex when
        # widened to W_u
        for e in self.edges:
            if e.dst == v and self._retarget_src(e, u) is None:
                return False
        return True

    def _retarget_src(self, e: Edge, u: int) -> Optional[int]:
        img = e.map.apply_region(self.vertices[u].w)
        for s, vert in enumerate(self.vertices):
            if vert.w.covers(img):
                return s
        return None

    def _remove_vertex(self, v: int, u: int) -> "Gifs":
        remap = {}
        new_vertices = []
        for i, vert in enumerate(self.vertices):
            if i == v:
                continue
            remap[i] = len(new_vertices)
            new_vertices.append(vert)

        new_edges = []
        seen = set()
        for e in self.edges:
            if e.dst == v:
                # the map now acts on the absorbing vertex's larger set
                dst = u
                src = self._retarget_src(e, u)
                if src == v:
                    src = u
            else:
                dst = e.dst
                src = u if e.src == v else e.src
            edge = Edge(remap[src], remap[dst], e.map)
            if edge.key() not in seen:
                seen.add(edge.key())
                new_edges.append(edge)
        new_edges.sort(key=lambda e: (e.src, e.dst, e.map.key()))
        return Gifs(new_vertices, new_edges)


@dataclass(frozen=True)
class DirectedPath:
    edge_indices: Tuple[int, ...]
    src: int
    dst: int
    map: Similitude

    @property
    def length(self) -> int:
        return len(self.edge_indices)


@dataclass
class Report:
    stage: str
    violations: List[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, message: str):
        self.violations.append(message)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(self.violations[:8]) + ("..." if len(self.violations) > 8 else "")

    def to_dict(self):
        out = {"stage": self.stage, "ok": self.ok, "violations": list(self.violations)}
        if self.data:
            out["data"] = self.data
        return out


@dataclass
class GoscReport:
    holds: bool
    violations: List[Tuple[int, int]]

    def to_dict(self):
        return {
            "holds": self.holds,
            "violations": [[a + 1, b + 1] for a, b in self.violations],
        }


def _open_region_inside(inner: RegionSet, outer: RegionSet) -> bool:
    """Containment of open box unions.

    Exact when the outer family is a single box per component; for unions it
    falls back to the closed cover test, which agrees on all shipped
    families (their open parts are single boxes).
    """
    if len(outer.boxes) == 1:
        out = outer.boxes[0]
        return all(out.contains_box(b) for b in inner.boxes)
    return outer.covers(inner)
