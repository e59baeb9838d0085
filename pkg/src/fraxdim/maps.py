"""Contractive similitudes x -> rho * R * x + b with rho a power of 1/beta.

R is a signed permutation, so boxes map to boxes and every composition /
inverse stays in the class.  ratio_exp is the positive integer k with
rho = beta**-k for edge maps; negative exponents (expansions) are allowed
internally for the relative maps used by neighborhood canonical forms.
"""

from __future__ import annotations

from typing import Sequence, Tuple

from .algebra import AlgebraicNumber, PisotField
from .boxes import Box, RegionSet
from .errors import FieldMismatch


class SignedPermutation:
    """Orthogonal part: (R x)_i = signs[i] * x[perm[i]]."""

    __slots__ = ("perm", "signs")

    def __init__(self, perm: Sequence[int], signs: Sequence[int]):
        perm = tuple(int(p) for p in perm)
        signs = tuple(int(s) for s in signs)
        n = len(perm)
        if sorted(perm) != list(range(n)) or len(signs) != n:
            raise ValueError("not a permutation")
        if any(s not in (-1, 1) for s in signs):
            raise ValueError("signs must be +-1")
        self.perm = perm
        self.signs = signs

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(n)), (1,) * n)

    def apply(self, vec):
        return tuple(
            vec[self.perm[i]] if self.signs[i] == 1 else -vec[self.perm[i]]
            for i in range(len(self.perm))
        )

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        # (self o other)(x) = self(other(x))
        n = len(self.perm)
        perm = tuple(other.perm[self.perm[i]] for i in range(n))
        signs = tuple(self.signs[i] * other.signs[self.perm[i]] for i in range(n))
        return SignedPermutation(perm, signs)

    def inverse(self) -> "SignedPermutation":
        n = len(self.perm)
        perm = [0] * n
        signs = [1] * n
        for i in range(n):
            perm[self.perm[i]] = i
            signs[self.perm[i]] = self.signs[i]
        return SignedPermutation(tuple(perm), tuple(signs))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm))) and all(s == 1 for s in self.signs)

    def key(self):
        return (self.perm, self.signs)

    def __eq__(self, other):
        return isinstance(other, SignedPermutation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SignedPermutation(perm={self.perm}, signs={self.signs})"


class Similitude:
    __slots__ = ("field", "dim", "ratio_exp", "orth", "trans", "_key")

    def __init__(
        self,
        field: PisotField,
        ratio_exp: int,
        orth: SignedPermutation,
        trans: Sequence[AlgebraicNumber],
    ):
        self.field = field
        self.dim = len(orth.perm)
        self.ratio_exp = int(ratio_exp)
        self.orth = orth
        trans = tuple(trans)
        if len(trans) != self.dim:
            raise ValueError("translation dimension mismatch")
        for t in trans:
            if t.field is not field:
                raise FieldMismatch("translation entries in a different field")
        self.trans = trans
        self._key = None

    @classmethod
    def identity(cls, field: PisotField, dim: int) -> "Similitude":
        return cls(field, 0, SignedPermutation.identity(dim), [field.zero()] * dim)

    def ratio(self) -> AlgebraicNumber:
        return self.field.beta_pow(-self.ratio_exp)

    def is_contraction(self) -> bool:
        return self.ratio_exp >= 1

    def apply(self, point: Sequence[AlgebraicNumber]):
        if len(point) != self.dim:
            raise FieldMismatch("point dimension mismatch")
        rho = self.ratio()
        rotated = self.orth.apply(tuple(point))
        return tuple(rho * x + t for x, t in zip(rotated, self.trans))

    def apply_box(self, box: Box) -> Box:
        a = self.apply(box.lo)
        b = self.apply(box.hi)
        lo, hi = [], []
        for x, y in zip(a, b):
            if (x - y).sign() <= 0:
                lo.append(x)
                hi.append(y)
            else:
                lo.append(y)
                hi.append(x)
        return Box(lo, hi)

    def apply_region(self, region: RegionSet) -> RegionSet:
        return RegionSet([self.apply_box(b) for b in region.boxes])

    def compose(self, other: "Similitude") -> "Similitude":
        """self after other: (self o other)(x) = self(other(x))."""
        if other.field is not self.field:
            raise FieldMismatch("cannot compose across fields")
        return Similitude(
            self.field,
            self.ratio_exp + other.ratio_exp,
            self.orth.compose(other.orth),
            self.apply(other.trans),
        )

    def inverse(self) -> "Similitude":
        inv_orth = self.orth.inverse()
        beta_k = self.field.beta_pow(self.ratio_exp)
        neg = inv_orth.apply(self.trans)
        return Similitude(
            self.field,
            -self.ratio_exp,
            inv_orth,
            [-(beta_k * t) for t in neg],
        )

    def translated(self, offset: Sequence[AlgebraicNumber]) -> "Similitude":
        return Similitude(
            self.field,
            self.ratio_exp,
            self.orth,
            [t + o for t, o in zip(self.trans, offset)],
        )

    def key(self):
        if self._key is None:
            self._key = (
                self.ratio_exp,
                self.orth.key(),
                tuple(t.coeffs for t in self.trans),
            )
        return self._key

    def __eq__(self, other):
        return (
            isinstance(other, Similitude)
            and self.field is other.field
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Similitude(exp={self.ratio_exp}, orth={self.orth.key()}, trans={list(self.trans)})"
