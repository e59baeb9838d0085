"""Exact arithmetic in a real number field Q(beta) with beta > 1.

Numbers are stored as rational coefficient vectors in the power basis
1, beta, ..., beta^(d-1), reduced modulo the monic minimal polynomial, so
structural equality is mathematical equality.  Signs are decided exactly
by interval arithmetic over an isolating interval of beta that is refined
on demand (the field keeps the refinement state; it only ever shrinks).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DivisionByZero, FieldMismatch, NoRootInInterval, RootNotGreaterThanOne

Rat = Fraction

_MAX_BISECTIONS = 400


def _poly_eval(coeffs: Sequence[Rat], x: Rat) -> Rat:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deriv(coeffs: Sequence[Rat]):
    return [c * i for i, c in enumerate(coeffs)][1:]


def _poly_rem(num, den):
    # remainder of num / den in Q[x]; den non-zero
    num = list(num)
    while num and num[-1] == 0:
        num.pop()
    dn = list(den)
    while dn and dn[-1] == 0:
        dn.pop()
    while len(num) >= len(dn) and num:
        coef = num[-1] / dn[-1]
        shift = len(num) - len(dn)
        for i, c in enumerate(dn):
            num[i + shift] -= coef * c
        while num and num[-1] == 0:
            num.pop()
    return num


def _sturm_chain(coeffs):
    chain = [list(coeffs), _poly_deriv(coeffs)]
    while chain[-1]:
        rem = _poly_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return [c for c in chain if c]


def _sign_changes(chain, x: Rat) -> int:
    signs = []
    for poly in chain:
        v = _poly_eval(poly, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    changes = 0
    for a, b in zip(signs, signs[1:]):
        if a != b:
            changes += 1
    return changes


def _interval_mul(a, b):
    prods = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(prods), max(prods))


class PisotField:
    """Q(beta) for the unique root beta > 1 of a monic integer polynomial.

    Irreducibility (and the Pisot property of the shipped presets) is
    asserted, not recomputed; only the real-root condition is verified.
    """

    def __init__(self, minpoly: Iterable[int], isolating_interval):
        minpoly = [int(c) for c in minpoly]
        if len(minpoly) < 2 or minpoly[-1] != 1:
            raise NoRootInInterval("minimal polynomial must be monic of degree >= 1")
        lo, hi = (Fraction(isolating_interval[0]), Fraction(isolating_interval[1]))
        if not lo < hi:
            raise NoRootInInterval("isolating interval is empty")
        self.minpoly = tuple(minpoly)
        self.degree = len(minpoly) - 1
        self._sturm = _sturm_chain([Fraction(c) for c in minpoly])
        lo, hi = self._isolate(lo, hi)
        # interval state only ever shrinks; shared by every number in the field
        self._lo = lo
        self._hi = hi
        # x^d = -(c_0 + ... + c_{d-1} x^{d-1})
        self._reduction = tuple(-Fraction(c) for c in minpoly[:-1])
        self._pow_cache = {}
        self._beta_inv = None

    # -- root isolation ------------------------------------------------

    def _count_roots(self, lo, hi):
        return _sign_changes(self._sturm, lo) - _sign_changes(self._sturm, hi)

    def _isolate(self, lo, hi):
        poly = [Fraction(c) for c in self.minpoly]
        # nudge endpoints off roots
        step = (hi - lo) / 1024
        while _poly_eval(poly, lo) == 0:
            lo -= step
        while _poly_eval(poly, hi) == 0:
            hi += step
        n = self._count_roots(lo, hi)
        if n == 0:
            raise NoRootInInterval(f"no root of {self.minpoly} in ({lo}, {hi})")
        for _ in range(_MAX_BISECTIONS):
            if n == 1:
                break
            mid = (lo + hi) / 2
            if _poly_eval(poly, mid) == 0:
                # rational root; isolate it tightly
                width = (hi - lo) / 4096
                cand_lo, cand_hi = mid - width, mid + width
                if self._count_roots(cand_lo, cand_hi) == 1:
                    lo, hi = cand_lo, cand_hi
                    n = 1
                    break
                mid += width / 7
            left = self._count_roots(lo, mid)
            if left >= 1:
                hi, n = mid, left
            else:
                lo, n = mid, n - left
        if n != 1:
            raise NoRootInInterval("could not isolate a single root")
        # the isolated root must exceed 1
        while lo <= 1:
            if hi <= 1:
                raise RootNotGreaterThanOne(f"isolated root of {self.minpoly} is <= 1")
            mid = (lo + hi) / 2
            if self._count_roots(lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        return lo, hi

    def _refine(self):
        poly = [Fraction(c) for c in self.minpoly]
        lo, hi = self._lo, self._hi
        mid = (lo + hi) / 2
        v = _poly_eval(poly, mid)
        if v == 0:
            eps = (hi - lo) / 1024
            lo, hi = mid - eps, mid + eps
            if self._count_roots(lo, hi) != 1:
                raise NoRootInInterval("refinement lost the root")
        elif self._count_roots(lo, mid) == 1:
            hi = mid
        else:
            lo = mid
        self._lo, self._hi = lo, hi

    def interval(self):
        return (self._lo, self._hi)

    # -- elements ------------------------------------------------------

    def zero(self):
        return AlgebraicNumber(self, (0,) * self.degree)

    def one(self):
        return self.from_rational(1)

    def from_rational(self, q) -> "AlgebraicNumber":
        coeffs = [Fraction(q)] + [Fraction(0)] * (self.degree - 1)
        return AlgebraicNumber(self, coeffs)

    def beta(self) -> "AlgebraicNumber":
        if self.degree == 1:
            # beta is the rational root itself
            return self.from_rational(-Fraction(self.minpoly[0]))
        coeffs = [Fraction(0)] * self.degree
        coeffs[1] = Fraction(1)
        return AlgebraicNumber(self, coeffs)

    def beta_inv(self) -> "AlgebraicNumber":
        if self._beta_inv is None:
            self._beta_inv = self.one() / self.beta()
        return self._beta_inv

    def beta_pow(self, k: int) -> "AlgebraicNumber":
        """beta**k for any integer k (negative powers use the inverse)."""
        if k in self._pow_cache:
            return self._pow_cache[k]
        if k == 0:
            out = self.one()
        elif k > 0:
            out = self.beta_pow(k - 1) * self.beta()
        else:
            out = self.beta_pow(k + 1) * self.beta_inv()
        self._pow_cache[k] = out
        return out

    def __repr__(self):
        return f"PisotField(minpoly={list(self.minpoly)})"


def field_make(minpoly, isolating_interval) -> PisotField:
    return PisotField(minpoly, isolating_interval)


class AlgebraicNumber:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: PisotField, coeffs):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != field.degree:
            raise FieldMismatch(
                f"coefficient vector of length {len(coeffs)} in a degree-{field.degree} field"
            )
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    # -- ring operations -----------------------------------------------

    def _check(self, other) -> "AlgebraicNumber":
        if isinstance(other, AlgebraicNumber):
            if other.field is not self.field:
                raise FieldMismatch("operands live in different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, AlgebraicNumber) and other.field is self.field:
            out = AlgebraicNumber.__new__(AlgebraicNumber)
            out.field = self.field
            out.coeffs = tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
            out._hash = None
            return out
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return AlgebraicNumber(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, AlgebraicNumber) and other.field is self.field:
            out = AlgebraicNumber.__new__(AlgebraicNumber)
            out.field = self.field
            out.coeffs = tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
            out._hash = None
            return out
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return AlgebraicNumber(self.field, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return AlgebraicNumber(self.field, [-a for a in self.coeffs])

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        d = self.field.degree
        if d == 1:
            out = AlgebraicNumber.__new__(AlgebraicNumber)
            out.field = self.field
            out.coeffs = (self.coeffs[0] * other.coeffs[0],)
            out._hash = None
            return out
        if d == 2:
            a0, a1 = self.coeffs
            b0, b1 = other.coeffs
            r0, r1 = self.field._reduction
            hi = a1 * b1
            out = AlgebraicNumber.__new__(AlgebraicNumber)
            out.field = self.field
            out.coeffs = (a0 * b0 + hi * r0, a0 * b1 + a1 * b0 + hi * r1)
            out._hash = None
            return out
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    prod[i + j] += a * b
        red = self.field._reduction
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c == 0:
                continue
            prod[k] = Fraction(0)
            for i, r in enumerate(red):
                prod[k - d + i] += c * r
        return AlgebraicNumber(self.field, prod[:d])

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        d = self.field.degree
        if d == 1:
            return self.field.from_rational(1 / self.coeffs[0])
        # extended Euclid in Q[x]: s*self + t*minpoly = 1 (minpoly irreducible)
        r0 = [Fraction(c) for c in self.field.minpoly]
        r1 = list(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if not r1:
                raise DivisionByZero("element not invertible (reducible minimal polynomial?)")
            if len(r1) == 1:
                inv = 1 / r1[0]
                out = [c * inv for c in s1]
                out += [Fraction(0)] * (d - len(out))
                return AlgebraicNumber(self.field, out[:d])
            q, rem = _poly_divmod(r0, r1)
            s_new = _poly_sub(s0, _poly_mul(q, s1))
            r0, r1 = r1, rem
            s0, s1 = s1, s_new
            # keep s1 reduced mod minpoly to bound degrees
            _, s1 = _poly_divmod(s1, [Fraction(c) for c in self.field.minpoly])

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._check(other) / self

    # -- order and sign ------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def value_interval(self):
        """Exact rational interval enclosing the real value."""
        lo, hi = self.field.interval()
        acc = (Fraction(0), Fraction(0))
        for c in reversed(self.coeffs):
            acc = _interval_mul(acc, (lo, hi))
            acc = (acc[0] + c, acc[1] + c)
        return acc

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            c = self.coeffs[0]
            return 1 if c > 0 else -1
        for _ in range(_MAX_BISECTIONS):
            lo, hi = self.value_interval()
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.field._refine()
        raise ArithmeticError("sign undecided after maximum refinement")

    def to_float(self, tol: float = 1e-12) -> float:
        if tol <= 0:
            raise ValueError("tol must be positive")
        if self.is_rational():
            return float(self.coeffs[0])
        tol = Fraction(tol).limit_denominator(10**30)
        for _ in range(_MAX_BISECTIONS):
            lo, hi = self.value_interval()
            if hi - lo < tol:
                return float((lo + hi) / 2)
            self.field._refine()
        raise ArithmeticError("interval refinement stalled")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __lt__(self, other):
        return (self - self._check(other)).sign() < 0

    def __le__(self, other):
        return (self - self._check(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._check(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._check(other)).sign() >= 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.field), self.coeffs))
        return self._hash

    def __repr__(self):
        return f"AN{list(map(str, self.coeffs))}"


def _poly_divmod(num, den):
    num = list(num)
    den = list(den)
    while den and den[-1] == 0:
        den.pop()
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    while num and num[-1] == 0:
        num.pop()
    while len(num) >= len(den):
        coef = num[-1] / den[-1]
        shift = len(num) - len(den)
        q[shift] = coef
        for i, c in enumerate(den):
            num[i + shift] -= coef * c
        while num and num[-1] == 0:
            num.pop()
    return q, num


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1 if a and b else 0)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def an_arith(a: AlgebraicNumber, b: AlgebraicNumber, op: str) -> AlgebraicNumber:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def an_sign(a: AlgebraicNumber) -> int:
    return a.sign()


def an_to_float(a: AlgebraicNumber, tol: float = 1e-12) -> float:
    return a.to_float(tol)


def rational_gcd(values: Iterable[Fraction]) -> Fraction:
    """gcd of rationals: largest r with every value an integer multiple of r.

    Equals gcd(numerators) / lcm(denominators) over the reduced inputs.
    """
    num, den = 0, 1
    for v in values:
        v = Fraction(v)
        if v == 0:
            continue
        num = gcd(num, abs(v.numerator))
        den = den * v.denominator // gcd(den, v.denominator)
    if num == 0:
        return Fraction(0)
    return Fraction(num, den)


DYADIC_FIELD_SPEC = ((-2, 1), ("1", "3"))
GOLDEN_FIELD_SPEC = ((-1, -1, 1), ("1", "2"))


def preset_field(name: str) -> PisotField:
    if name in ("dyadic", "beta2", "2"):
        return PisotField(*DYADIC_FIELD_SPEC)
    if name in ("golden", "phi"):
        return PisotField(*GOLDEN_FIELD_SPEC)
    raise KeyError(name)
