"""Exact axis-aligned box calculus over a Pisot field.

Boxes are closed products of intervals with algebraic endpoints; degenerate
axes (lo == hi) are allowed because the multivalued seams of the shipped
systems are measure-zero lines.  Region sets are finite unions of boxes.
Cover tests subdivide at the covering boxes' face coordinates, which is
exact for closed unions.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

from .algebra import AlgebraicNumber, PisotField


class Box:
    __slots__ = ("lo", "hi", "_rat")

    def __init__(self, lo: Sequence[AlgebraicNumber], hi: Sequence[AlgebraicNumber]):
        lo = tuple(lo)
        hi = tuple(hi)
        if len(lo) != len(hi):
            raise ValueError("corner dimension mismatch")
        for a, b in zip(lo, hi):
            if (a - b).sign() > 0:
                raise ValueError("box has lo > hi on some axis")
        self.lo = lo
        self.hi = hi
        self._rat = None

    def rational_bounds(self):
        """(lo fractions, hi fractions) when every corner is rational."""
        if self._rat is None:
            if all(c.is_rational() for c in self.lo) and all(
                c.is_rational() for c in self.hi
            ):
                self._rat = (
                    tuple(c.coeffs[0] for c in self.lo),
                    tuple(c.coeffs[0] for c in self.hi),
                )
            else:
                self._rat = False
        return self._rat or None

    @property
    def dim(self) -> int:
        return len(self.lo)

    def is_degenerate(self) -> bool:
        return any(a == b for a, b in zip(self.lo, self.hi))

    def degenerate_axes(self) -> Tuple[int, ...]:
        return tuple(i for i, (a, b) in enumerate(zip(self.lo, self.hi)) if a == b)

    def intersect(self, other: "Box") -> Optional["Box"]:
        """Closed intersection, or None when empty."""
        lo, hi = [], []
        for a1, b1, a2, b2 in zip(self.lo, self.hi, other.lo, other.hi):
            a = a1 if (a1 - a2).sign() >= 0 else a2
            b = b1 if (b1 - b2).sign() <= 0 else b2
            if (a - b).sign() > 0:
                return None
            lo.append(a)
            hi.append(b)
        return Box(lo, hi)

    def overlaps_open(self, other: "Box") -> bool:
        """True iff the interiors intersect (strict overlap on every axis)."""
        mine = self.rational_bounds()
        theirs = other.rational_bounds()
        if mine and theirs:
            for a1, b1, a2, b2 in zip(mine[0], mine[1], theirs[0], theirs[1]):
                if (a1 if a1 > a2 else a2) >= (b1 if b1 < b2 else b2):
                    return False
            return True
        for a1, b1, a2, b2 in zip(self.lo, self.hi, other.lo, other.hi):
            a = a1 if (a1 - a2).sign() >= 0 else a2
            b = b1 if (b1 - b2).sign() <= 0 else b2
            if (a - b).sign() >= 0:
                return False
        return True

    def contains_box(self, other: "Box") -> bool:
        for a1, b1, a2, b2 in zip(self.lo, self.hi, other.lo, other.hi):
            if (a2 - a1).sign() < 0 or (b1 - b2).sign() < 0:
                return False
        return True

    def contains_point(self, point) -> bool:
        return all(
            (x - a).sign() >= 0 and (b - x).sign() >= 0
            for a, b, x in zip(self.lo, self.hi, point)
        )

    def key(self):
        return tuple(c.coeffs for c in self.lo) + tuple(c.coeffs for c in self.hi)

    def float_bounds(self, tol=1e-12):
        return (
            tuple(c.to_float(tol) for c in self.lo),
            tuple(c.to_float(tol) for c in self.hi),
        )

    def __eq__(self, other):
        return isinstance(other, Box) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        lo = ",".join(str(c.coeffs[0]) if c.is_rational() else repr(c) for c in self.lo)
        hi = ",".join(str(c.coeffs[0]) if c.is_rational() else repr(c) for c in self.hi)
        return f"Box[{lo} .. {hi}]"


def _subtract(box: Box, cover: Box) -> List[Box]:
    """Closed boxes whose union contains box minus cover (exact for covers).

    Splits box along cover's faces; the central piece lies inside cover and
    is dropped.  Remaining pieces may share faces with cover, which is the
    right semantics for closed-cover testing.
    """
    inter = box.intersect(cover)
    if inter is None:
        return [box]
    pieces = []
    lo = list(box.lo)
    hi = list(box.hi)
    for axis in range(box.dim):
        c_lo, c_hi = cover.lo[axis], cover.hi[axis]
        if (c_lo - lo[axis]).sign() > 0:
            new_hi = list(hi)
            new_hi[axis] = c_lo
            pieces.append(Box(lo.copy(), new_hi))
            lo[axis] = c_lo
        if (hi[axis] - c_hi).sign() > 0:
            new_lo = list(lo)
            new_lo[axis] = c_hi
            pieces.append(Box(new_lo, hi.copy()))
            hi[axis] = c_hi
    # the remaining [lo, hi] is inside cover: dropped
    return pieces


class RegionSet:
    """Finite union of closed boxes over one field and dimension."""

    __slots__ = ("boxes",)

    def __init__(self, boxes: Iterable[Box], normalize: bool = True):
        boxes = list(boxes)
        if normalize:
            boxes = _absorb(boxes)
            boxes.sort(key=lambda b: b.key())
        self.boxes = tuple(boxes)

    @property
    def dim(self) -> int:
        return self.boxes[0].dim if self.boxes else 0

    def is_empty(self) -> bool:
        return not self.boxes

    def covers_box(self, box: Box) -> bool:
        pending = [box]
        for cover in self.boxes:
            nxt = []
            for piece in pending:
                nxt.extend(_subtract(piece, cover))
            pending = nxt
            if not pending:
                return True
        return not pending

    def uncovered_part(self, box: Box) -> List[Box]:
        pending = [box]
        for cover in self.boxes:
            nxt = []
            for piece in pending:
                nxt.extend(_subtract(piece, cover))
            pending = nxt
            if not pending:
                break
        return pending

    def covers(self, other: "RegionSet") -> bool:
        return all(self.covers_box(b) for b in other.boxes)

    def equals(self, other: "RegionSet") -> bool:
        return self.covers(other) and other.covers(self)

    def contains_point(self, point) -> bool:
        return any(b.contains_point(point) for b in self.boxes)

    def intersects_open(self, other: "RegionSet") -> bool:
        return any(a.overlaps_open(b) for a in self.boxes for b in other.boxes)

    def intersect(self, other: "RegionSet") -> "RegionSet":
        out = []
        for a in self.boxes:
            for b in other.boxes:
                c = a.intersect(b)
                if c is not None:
                    out.append(c)
        return RegionSet(out)

    def union(self, other: "RegionSet") -> "RegionSet":
        return RegionSet(list(self.boxes) + list(other.boxes))

    def key(self):
        return tuple(b.key() for b in self.boxes)

    def __eq__(self, other):
        return isinstance(other, RegionSet) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __iter__(self):
        return iter(self.boxes)

    def __len__(self):
        return len(self.boxes)

    def __repr__(self):
        return f"RegionSet({list(self.boxes)!r})"


def _absorb(boxes: List[Box]) -> List[Box]:
    """Drop duplicate boxes and boxes contained in a single other box."""
    boxes = list(dict.fromkeys(boxes))  # removes exact duplicates
    kept = []
    for i, b in enumerate(boxes):
        if any(j != i and other.contains_box(b) for j, other in enumerate(boxes)):
            continue
        kept.append(b)
    return kept


def box_from_fractions(field: PisotField, lo, hi) -> Box:
    return Box(
        [field.from_rational(c) for c in lo],
        [field.from_rational(c) for c in hi],
    )


def split_box_at(box: Box, axis: int, coord: AlgebraicNumber) -> List[Box]:
    """Split a box along axis at coord (no-op when coord is outside)."""
    if (coord - box.lo[axis]).sign() <= 0 or (box.hi[axis] - coord).sign() <= 0:
        return [box]
    left_hi = list(box.hi)
    left_hi[axis] = coord
    right_lo = list(box.lo)
    right_lo[axis] = coord
    return [Box(box.lo, left_hi), Box(right_lo, box.hi)]


def split_box_at_many(box: Box, cuts_per_axis: Sequence[Iterable[AlgebraicNumber]]) -> List[Box]:
    pieces = [box]
    for axis, coords in enumerate(cuts_per_axis):
        nxt = []
        for piece in pieces:
            parts = [piece]
            for coord in coords:
                parts = [q for p in parts for q in split_box_at(p, axis, coord)]
            nxt.extend(parts)
        pieces = nxt
    return pieces
