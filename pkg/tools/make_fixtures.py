#!/usr/bin/env python3
"""Regenerate the JSON scene fixtures in ./fixtures.

Numbers are exact rational strings; golden-field elements are coefficient
vectors over (1, beta).  Chart coordinates of the cylinder scenes are in
units of pi (theta in [-1, 1], z in [0, 2]); the triangle scene measures z
in units of sqrt(3)*pi.
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures"

DYADIC = {"minpoly": [-2, 1], "root_bracket": ["1", "3"]}
GOLDEN = {"minpoly": [-1, -1, 1], "root_bracket": ["1", "2"]}


def box(lo, hi):
    return {"lo": [str(x) for x in lo], "hi": [str(x) for x in hi]}


def sim(exp, trans, wrap=None, orth=None):
    out = {"ratio_exp": exp, "trans": [t if isinstance(t, list) else str(t) for t in trans]}
    if wrap:
        out["wrap"] = wrap
    if orth:
        out["orth"] = orth
    return out


def cylinder_relations(z_consts, flip_first=True):
    """Relations on the cylinder chart [-1,1]x[0,2] (pi units).

    z_consts[t] is the z-translation of relation t; relation 0 optionally
    uses the antipodal lift (theta/2 +- 1), the rest keep theta/2.
    """
    relations = []
    for t, c in enumerate(z_consts):
        antipodal = flip_first and t == 0
        if antipodal:
            j1 = sim(1, ["1", c])   # theta/2 + 1 on theta in [-1, 0]
            j2 = sim(1, ["-1", c])  # theta/2 - 1 on theta in (0, 1)
            seam_lo = [sim(1, ["1", c]), sim(1, ["0", c])]
            seam_hi = [sim(1, ["-1", c]), sim(1, ["0", c])]
        else:
            j1 = sim(1, ["0", c])
            j2 = sim(1, ["0", c])
            seam_lo = [sim(1, ["0", c]), sim(1, ["1", c])]
            seam_hi = [sim(1, ["0", c]), sim(1, ["-1", c])]
        relations.append(
            {
                "name": f"R{t + 1}",
                "pieces": [
                    {"kind": "single", "domain": [box(["-1", "0"], ["0", "2"])], "branches": [j1]},
                    {"kind": "single", "domain": [box(["0", "0"], ["1", "2"])], "branches": [j2]},
                    {"kind": "multi", "domain": [box(["-1", "0"], ["-1", "2"])], "branches": seam_lo},
                    {"kind": "multi", "domain": [box(["1", "0"], ["1", "2"])], "branches": seam_hi},
                ],
            }
        )
    return relations


def cylinder_space():
    return {
        "dim": 2,
        "periodic": [{"period": "2"}, None],
        "units": ["pi", "pi"],
        "e0": [box(["-1", "0"], ["1", "2"])],
    }


def cylinder_sierpinski():
    # three relations, r = 1/4: z-consts 1/2 (antipodal), 3/4, 1/4
    relations = cylinder_relations(["1/2", "3/4", "1/4"])
    # GOSC witness family: centered half-height slabs inside each W
    open_family = [
        {"match": box(["-1", "1/2"], ["-1/2", "3/2"]), "u": box(["-1", "3/4"], ["-1/2", "5/4"])},
        {"match": box(["-1/2", "3/4"], ["0", "7/4"]), "u": box(["-1/2", "1"], ["0", "3/2"])},
        {"match": box(["-1/2", "1/4"], ["0", "5/4"]), "u": box(["-1/2", "1/2"], ["0", "1"])},
        {"match": box(["0", "3/4"], ["1/2", "7/4"]), "u": box(["0", "1"], ["1/2", "3/2"])},
        {"match": box(["0", "1/4"], ["1/2", "5/4"]), "u": box(["0", "1/2"], ["1/2", "1"])},
        {"match": box(["1/2", "1/2"], ["1", "3/2"]), "u": box(["1/2", "3/4"], ["1", "5/4"])},
    ]
    return {
        "name": "cylinder_sierpinski",
        "field": DYADIC,
        "space": cylinder_space(),
        "irs": {"condition_c": True, "relations": relations, "open_family": open_family},
        "render": {"width": 600, "height": 600, "depth": 6},
    }


def four_map_cylinder():
    # four relations, r = 1/4: z-consts 1/2 (antipodal), 3/4, 1/2, 1/4
    relations = cylinder_relations(["1/2", "3/4", "1/2", "1/4"])
    return {
        "name": "four_map_cylinder",
        "field": DYADIC,
        "space": cylinder_space(),
        "irs": {"condition_c": True, "relations": relations},
        "solver": {"max_levels": 8},
        "render": {"width": 600, "height": 600, "depth": 6},
    }


def interval_overlap():
    # two relations on [0, 1]; the doubled region [0, 1/2] is split at 1/4
    # so every branch image sits inside a single piece closure
    r1 = {
        "name": "R1",
        "pieces": [
            {"kind": "single", "domain": [box(["0"], ["1"])], "branches": [sim(1, ["1/2"])]}
        ],
    }
    r2 = {
        "name": "R2",
        "pieces": [
            {
                "kind": "multi",
                "domain": [box(["0"], ["1/4"])],
                "branches": [sim(1, ["0"]), sim(1, ["3/8"])],
            },
            {
                "kind": "multi",
                "domain": [box(["1/4"], ["1/2"])],
                "branches": [sim(1, ["0"]), sim(1, ["3/8"])],
            },
            {"kind": "single", "domain": [box(["1/2"], ["1"])], "branches": [sim(1, ["0"])]},
        ],
    }
    return {
        "name": "interval_overlap",
        "field": DYADIC,
        "space": {"dim": 1, "periodic": [None], "units": [None], "e0": [box(["0"], ["1"])]},
        "irs": {"condition_c": True, "relations": [r1, r2]},
        "solver": {"max_levels": 10},
        "render": {"width": 1024, "height": 64, "depth": 10},
    }


def torus_four_map():
    b = {1: ("0", "1/4"), 2: ("1/4", "1/4"), 3: ("1/2", "1/4"), 4: ("1/4", "3/4")}
    relations = []
    for t in (1, 2, 3, 4):
        bx, by = b[t]
        j1 = sim(1, [bx, by])
        j2 = sim(1, [bx, by], wrap=[0, -1] if t == 4 else None)
        # x-seam pieces carry the two x-lifts; the y-seam the two y-lifts
        relations.append(
            {
                "name": f"R{t}",
                "pieces": [
                    {"kind": "single", "domain": [box(["0", "0"], ["1", "1/2"])], "branches": [j1]},
                    {"kind": "single", "domain": [box(["0", "1/2"], ["1", "1"])], "branches": [j2]},
                    {
                        "kind": "multi",
                        "domain": [box(["0", "0"], ["0", "1/2"])],
                        "branches": [sim(1, [bx, by]), sim(1, [f_add(bx, "1/2"), by])],
                    },
                    {
                        "kind": "multi",
                        "domain": [box(["0", "1/2"], ["0", "1"])],
                        "branches": [
                            sim(1, [bx, by], wrap=[0, -1] if t == 4 else None),
                            sim(1, [f_add(bx, "1/2"), by], wrap=[0, -1] if t == 4 else None),
                        ],
                    },
                    {
                        "kind": "multi",
                        "domain": [box(["0", "0"], ["1", "0"])],
                        "branches": [
                            sim(1, [bx, by]),
                            sim(1, [bx, f_add(by, "1/2")], wrap=[0, -1] if t == 4 else None),
                        ],
                    },
                ],
            }
        )
    return {
        "name": "torus_four_map",
        "field": DYADIC,
        "space": {
            "dim": 2,
            "periodic": [{"period": "1"}, {"period": "1"}],
            "units": [None, None],
            "e0": [box(["0", "0"], ["1", "1"])],
        },
        "irs": {"condition_c": True, "relations": relations},
        "solver": {"max_levels": 8},
        "render": {"width": 512, "height": 512, "depth": 6},
    }


def f_add(a, b):
    from fractions import Fraction

    return str(Fraction(a) + Fraction(b))


def golden_triangle():
    # direct GIFS on the unrolled chart: theta in [-1,1] pi-units,
    # z in [0,1] sqrt(3)pi-units.  rho = 1/beta; rho^2 = 2 - beta etc.
    rho = ["-1", "1"]       # beta - 1
    neg_rho2 = ["-2", "1"]  # beta - 2 = -(2 - beta)
    rho2 = ["2", "-1"]
    w = box(["-1", "0"], ["1", "1"])
    return {
        "name": "golden_triangle",
        "field": GOLDEN,
        "space": {
            "dim": 2,
            "periodic": [{"period": "2"}, None],
            "units": ["pi", "sqrt3_pi"],
            "e0": [w],
        },
        "gifs": {
            "vertices": [{"w": [w]}],
            "edges": [
                {"src": 1, "dst": 1, "map": {"ratio_exp": 1, "trans": [neg_rho2, "0"]}},
                {"src": 1, "dst": 1, "map": {"ratio_exp": 1, "trans": [rho2, "0"]}},
                {"src": 1, "dst": 1, "map": {"ratio_exp": 2, "trans": ["0", rho]}},
            ],
        },
        "solver": {"max_levels": 10},
        "render": {"width": 640, "height": 554, "depth": 8},
    }


def moran_pair():
    return {
        "name": "moran_pair",
        "field": DYADIC,
        "space": {"dim": 1, "periodic": [None], "units": [None], "e0": [box(["0"], ["1"])]},
        "irs": {
            "condition_c": True,
            "relations": [
                {
                    "name": "R1",
                    "pieces": [
                        {"kind": "single", "domain": [box(["0"], ["1"])], "branches": [sim(1, ["0"])]}
                    ],
                },
                {
                    "name": "R2",
                    "pieces": [
                        {"kind": "single", "domain": [box(["0"], ["1"])], "branches": [sim(1, ["1/2"])]}
                    ],
                },
            ],
        },
        "render": {"width": 1024, "height": 32, "depth": 10},
    }


def golden_shift():
    # 2-vertex GIFS with incidence [[1,1],[1,0]]: alpha = log(phi)/log(2)
    w1 = box(["0"], ["1"])
    w2 = box(["0"], ["1/2"])
    return {
        "name": "golden_shift",
        "field": DYADIC,
        "space": {"dim": 1, "periodic": [None], "units": [None], "e0": [w1]},
        "gifs": {
            "vertices": [{"w": [w1]}, {"w": [w2]}],
            "edges": [
                {"src": 1, "dst": 1, "map": sim(1, ["0"])},
                {"src": 1, "dst": 2, "map": sim(1, ["1/2"])},
                {"src": 2, "dst": 1, "map": sim(1, ["0"])},
            ],
        },
    }


def infinite_values():
    # finite truncation attempt of a relation with countably many values at
    # one point; the branch family is not a finite list -> parse rejection
    return {
        "name": "infinite_values",
        "field": {"minpoly": [-3, 1], "root_bracket": ["2", "4"]},
        "space": {"dim": 1, "periodic": [None], "units": [None], "e0": [box(["0"], ["1"])]},
        "irs": {
            "condition_c": False,
            "relations": [
                {
                    "name": "R1",
                    "pieces": [
                        {"kind": "single", "domain": [box(["0"], ["1"])], "branches": [sim(1, ["2/3"])]}
                    ],
                },
                {
                    "name": "R2",
                    "pieces": [
                        {"kind": "single", "domain": [box(["0"], ["1"])], "branches": [sim(1, ["0"])]},
                        {
                            "kind": "multi",
                            "domain": [box(["0"], ["0"])],
                            "branches": {"family": "1/2^p, p >= 1"},
                        },
                    ],
                },
            ],
        },
    }


def noncontractive():
    return {
        "name": "noncontractive",
        "field": DYADIC,
        "space": {"dim": 1, "periodic": [None], "units": [None], "e0": [box(["0"], ["1"])]},
        "irs": {
            "condition_c": False,
            "relations": [
                {
                    "name": "R1",
                    "pieces": [
                        {
                            "kind": "multi",
                            "domain": [box(["0"], ["1/2"])],
                            "branches": [sim(0, ["0"]), sim(0, ["1/4"])],
                        },
                        {"kind": "single", "domain": [box(["1/2"], ["1"])], "branches": [sim(1, ["1/4"])]},
                    ],
                },
                {
                    "name": "R2",
                    "pieces": [
                        {"kind": "single", "domain": [box(["0"], ["1"])], "branches": [sim(1, ["0"])]}
                    ],
                },
            ],
        },
    }


def straddling():
    # one-piece doubled region whose second branch image crosses the piece
    # boundary: containment validation must refuse assembly
    return {
        "name": "straddling",
        "field": DYADIC,
        "space": {"dim": 1, "periodic": [None], "units": [None], "e0": [box(["0"], ["1"])]},
        "irs": {
            "condition_c": True,
            "relations": [
                {
                    "name": "R1",
                    "pieces": [
                        {"kind": "single", "domain": [box(["0"], ["1"])], "branches": [sim(1, ["1/2"])]}
                    ],
                },
                {
                    "name": "R2",
                    "pieces": [
                        {
                            "kind": "multi",
                            "domain": [box(["0"], ["1/2"])],
                            "branches": [sim(1, ["0"]), sim(1, ["3/8"])],
                        },
                        {"kind": "single", "domain": [box(["1/2"], ["1"])], "branches": [sim(1, ["3/8"])]},
                    ],
                },
            ],
        },
    }


FIXTURES = {
    "moran_pair.json": moran_pair,
    "cylinder_sierpinski.json": cylinder_sierpinski,
    "interval_overlap.json": interval_overlap,
    "four_map_cylinder.json": four_map_cylinder,
    "torus_four_map.json": torus_four_map,
    "golden_triangle.json": golden_triangle,
    "golden_shift.json": golden_shift,
    "infinite_values.json": infinite_values,
    "noncontractive.json": noncontractive,
    "straddling.json": straddling,
}


def main():
    OUT.mkdir(exist_ok=True)
    for name, builder in FIXTURES.items():
        path = OUT / name
        path.write_text(json.dumps(builder(), indent=2) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
