from fractions import Fraction

import pytest

from fraxdim.algebra import preset_field
from fraxdim.boxes import Box, RegionSet, box_from_fractions, split_box_at_many
from fraxdim.maps import SignedPermutation, Similitude


@pytest.fixture(scope="module")
def F():
    return preset_field("dyadic")


def B(F, lo, hi):
    return box_from_fractions(F, [Fraction(x) for x in lo], [Fraction(x) for x in hi])


def test_box_basic(F):
    b = B(F, ["0", "0"], ["1", "2"])
    assert not b.is_degenerate()
    line = B(F, ["1", "0"], ["1", "2"])
    assert line.is_degenerate() and line.degenerate_axes() == (0,)
    with pytest.raises(ValueError):
        B(F, ["1"], ["0"])


def test_intersection_and_open_overlap(F):
    a = B(F, ["0"], ["1"])
    b = B(F, ["1"], ["2"])
    c = B(F, ["1/2"], ["3/2"])
    assert a.intersect(b) is not None  # closed boxes share the point 1
    assert not a.overlaps_open(b)
    assert a.overlaps_open(c)


def test_cover_simple(F):
    region = RegionSet([B(F, ["0"], ["1/2"]), B(F, ["1/2"], ["1"])])
    assert region.covers_box(B(F, ["0"], ["1"]))
    assert not region.covers_box(B(F, ["0"], ["9/8"]))


def test_cover_2d_with_hole(F):
    outer = B(F, ["0", "0"], ["3", "3"])
    tiles = [
        B(F, ["0", "0"], ["3", "1"]),
        B(F, ["0", "2"], ["3", "3"]),
        B(F, ["0", "1"], ["1", "2"]),
        B(F, ["2", "1"], ["3", "2"]),
    ]
    region = RegionSet(tiles)
    assert not region.covers_box(outer)
    missing = region.uncovered_part(outer)
    # the hole is the middle tile
    hole = RegionSet(missing)
    assert hole.equals(RegionSet([B(F, ["1", "1"], ["2", "2"])]))
    assert region.union(hole).covers_box(outer)


def test_region_equality_by_subdivision(F):
    left = RegionSet([B(F, ["0", "0"], ["2", "1"])])
    right = RegionSet([B(F, ["0", "0"], ["1", "1"]), B(F, ["1", "0"], ["2", "1"])])
    assert left.equals(right)


def test_degenerate_cover(F):
    region = RegionSet([B(F, ["0", "0"], ["1", "1"])])
    assert region.covers_box(B(F, ["1", "0"], ["1", "1"]))  # face line


def test_split_box(F):
    b = B(F, ["0"], ["1"])
    pieces = split_box_at_many(b, [[F.from_rational(Fraction(1, 4)), F.from_rational(Fraction(1, 2))]])
    assert len(pieces) == 3


def test_signed_permutation_roundtrip():
    p = SignedPermutation((1, 0), (-1, 1))
    q = p.inverse()
    assert p.compose(q).is_identity()
    assert q.compose(p).is_identity()


def test_similitude_apply_and_compose(F):
    half = Similitude(
        F, 1, SignedPermutation.identity(2), [F.from_rational(Fraction(1, 2)), F.from_rational(Fraction(1, 4))]
    )
    img = half.apply((F.zero(), F.zero()))
    assert [c.coeffs[0] for c in img] == [Fraction(1, 2), Fraction(1, 4)]

    one_d = Similitude(F, 1, SignedPermutation.identity(1), [F.zero()])
    assert one_d.apply((F.one(),))[0].coeffs[0] == Fraction(1, 2)

    # two ratio-1/2 maps compose to ratio 1/4
    comp = half.compose(half)
    assert comp.ratio_exp == 2
    assert comp.ratio().to_float() == pytest.approx(0.25)


def test_similitude_inverse(F):
    f = Similitude(
        F,
        2,
        SignedPermutation((1, 0), (1, -1)),
        [F.from_rational(Fraction(3, 8)), F.from_rational(Fraction(-1, 2))],
    )
    g = f.inverse()
    assert f.compose(g) == Similitude.identity(F, 2)
    assert g.compose(f) == Similitude.identity(F, 2)


def test_golden_ratio_identity():
    """rho - rho^2 = rho^3 in the golden field, via map application."""
    G = preset_field("golden")
    rho = G.beta_inv()
    f = Similitude(G, 1, SignedPermutation.identity(1), [-(rho * rho)])
    # f(theta) = rho*theta - rho^2 applied at theta = 1 (pi units)
    out = f.apply((G.one(),))[0]
    assert out == rho * rho * rho


def test_apply_box_with_flip(F):
    f = Similitude(
        F, 1, SignedPermutation((0,), (-1,)), [F.one()]
    )  # x -> 1 - x/2
    b = B(F, ["0"], ["1"])
    img = f.apply_box(b)
    assert img.lo[0].coeffs[0] == Fraction(1, 2)
    assert img.hi[0].coeffs[0] == Fraction(1)
