from fractions import Fraction

import pytest

from fraxdim.algebra import preset_field
from fraxdim.boxes import RegionSet, box_from_fractions
from fraxdim.errors import BranchDomainGap
from fraxdim.irs import (
    assemble_gifs,
    associated_base,
    iterate_attractor,
    validate_containments,
    validate_decomposition,
    verify_association,
)


def region(field, *pairs):
    return RegionSet([box_from_fractions(field, [Fraction(a)], [Fraction(b)]) for a, b in pairs])


def test_iterate_depth0(moran_cfg):
    spec = moran_cfg.irs
    assert iterate_attractor(spec, 0).equals(spec.space.e0)


def test_moran_iterate_no_holes(moran_cfg):
    spec = moran_cfg.irs
    e3 = iterate_attractor(spec, 3)
    full = spec.space.e0
    assert e3.equals(full)  # dyadic cover keeps the whole interval


def test_interval_overlap_first_iterate(interval_cfg):
    spec = interval_cfg.irs
    f = interval_cfg.field
    e1 = iterate_attractor(spec, 1)
    # E_1 = [1/2,1] u [0,1/4] u [3/8,5/8] u (1/4,1/2] as closed boxes
    expected = region(f, ("1/2", "1"), ("0", "1/4"), ("3/8", "5/8"), ("1/4", "1/2"))
    assert e1.equals(expected)


def test_validate_decomposition_positive(cylinder_cfg, four_map_cfg, torus_cfg):
    for cfg in (cylinder_cfg, four_map_cfg, torus_cfg):
        assert validate_decomposition(cfg.irs).ok
        assert validate_containments(cfg.irs).ok


def test_validate_decomposition_noncontractive(fixtures_dir):
    from fraxdim.scene import load_scene

    cfg = load_scene(fixtures_dir / "noncontractive.json")
    report = validate_decomposition(cfg.irs)
    assert not report.ok
    assert any("non-contractive branch" in v for v in report.violations)


def test_cover_gap_detected():
    from fraxdim.scene import parse_scene

    doc = {
        "field": {"minpoly": [-2, 1], "root_bracket": ["1", "3"]},
        "space": {"dim": 1, "periodic": [None], "units": [None], "e0": [{"lo": ["0"], "hi": ["1"]}]},
        "irs": {
            "relations": [
                {
                    "name": "R1",
                    "pieces": [
                        {
                            "kind": "single",
                            "domain": [{"lo": ["0"], "hi": ["1/2"]}],
                            "branches": [{"ratio_exp": 1, "trans": ["0"]}],
                        }
                    ],
                }
            ]
        },
    }
    report = validate_decomposition(parse_scene(doc).irs)
    assert any("cover gap" in v for v in report.violations)


def test_containment_straddling(fixtures_dir):
    from fraxdim.scene import load_scene

    cfg = load_scene(fixtures_dir / "straddling.json")
    report = validate_containments(cfg.irs)
    assert not report.ok
    assert any("straddles" in v for v in report.violations)


def test_moran_assembles_single_vertex(moran_cfg):
    g = assemble_gifs(moran_cfg.irs)
    assert g.vertex_count == 1
    assert len(g.edges) == 2
    k0, base = associated_base(moran_cfg.irs)
    assert k0 == 0
    assert base.equals(moran_cfg.space.e0)


def test_cylinder_assembly_matches_worked_example(cylinder_cfg):
    g = assemble_gifs(cylinder_cfg.irs)
    assert g.vertex_count == 6
    assert len(g.edges) == 18
    assert g.is_strongly_connected()
    f = cylinder_cfg.field

    def box2(xlo, ylo, xhi, yhi):
        return box_from_fractions(
            f, [Fraction(xlo), Fraction(ylo)], [Fraction(xhi), Fraction(yhi)]
        )

    expected_w = [
        box2("-1", "1/2", "-1/2", "3/2"),
        box2("-1/2", "3/4", "0", "7/4"),
        box2("-1/2", "1/4", "0", "5/4"),
        box2("0", "3/4", "1/2", "7/4"),
        box2("0", "1/4", "1/2", "5/4"),
        box2("1/2", "1/2", "1", "3/2"),
    ]
    for vert, exp in zip(g.vertices, expected_w):
        assert vert.w.equals(RegionSet([exp]))
    # every vertex has exactly three outgoing edges
    for i in range(6):
        assert len(g.edges_from(i)) == 3


def test_four_map_assembly(four_map_cfg):
    g = assemble_gifs(four_map_cfg.irs)
    assert g.vertex_count == 8
    assert len(g.edges) == 32
    for i in range(8):
        assert len(g.edges_from(i)) == 4


def test_torus_assembly(torus_cfg):
    g = assemble_gifs(torus_cfg.irs)
    assert g.vertex_count == 8
    assert len(g.edges) == 32


def test_assembled_gifs_is_invariant_family(cylinder_cfg, four_map_cfg, torus_cfg):
    for cfg in (cylinder_cfg, four_map_cfg, torus_cfg):
        g = assemble_gifs(cfg.irs)
        assert g.validate().ok


def test_verify_association_positive(moran_cfg, cylinder_cfg, four_map_cfg, torus_cfg, interval_cfg):
    for cfg, max_q in [
        (moran_cfg, 4),
        (cylinder_cfg, 3),
        (four_map_cfg, 2),
        (torus_cfg, 2),
        (interval_cfg, 3),
    ]:
        g = assemble_gifs(cfg.irs)
        report = verify_association(cfg.irs, g, max_q=max_q)
        assert report.ok, (cfg.name, report.detail)


def test_verify_association_detects_perturbation(moran_cfg):
    from fraxdim.graph import Edge, Gifs

    g = assemble_gifs(moran_cfg.irs)
    f = moran_cfg.field
    bad_map = g.edges[1].map.translated([f.from_rational(Fraction(1, 8))])
    bad = Gifs(g.vertices, [g.edges[0], Edge(0, 0, bad_map)])
    report = verify_association(moran_cfg.irs, bad, max_q=2)
    assert not report.ok
    assert report.failed_q == 1


def test_iterate_monotone_hull(cylinder_cfg):
    spec = cylinder_cfg.irs
    e1 = iterate_attractor(spec, 1)
    e2 = iterate_attractor(spec, 2)
    assert e1.covers(e2)


def test_branch_domain_gap():
    import copy

    from fraxdim.scene import parse_scene

    doc = {
        "field": {"minpoly": [-2, 1], "root_bracket": ["1", "3"]},
        "space": {"dim": 1, "periodic": [None], "units": [None], "e0": [{"lo": ["0"], "hi": ["1"]}]},
        "irs": {
            "relations": [
                {
                    "name": "R1",
                    "pieces": [
                        {
                            "kind": "single",
                            "domain": [{"lo": ["0"], "hi": ["1/2"]}],
                            "branches": [{"ratio_exp": 1, "trans": ["0"]}],
                        }
                    ],
                }
            ]
        },
    }
    cfg = parse_scene(doc)
    with pytest.raises(BranchDomainGap):
        iterate_attractor(cfg.irs, 1)
