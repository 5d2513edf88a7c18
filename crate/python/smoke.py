"""Smoke test for the pyholonomy extension module.

Build the module first, either with `maturin develop -m crates/py/Cargo.toml`
or with `cargo build -p holonomy-py --release` and put the produced
`libpyholonomy.so` on the path as `pyholonomy.so`.
"""

import cmath
import json
import math

import pyholonomy as ph


def main():
    tri = ph.Triangulation.canonical(1, [3])
    assert (tri.triangle_count, tri.interior_arc_count, tri.free_rank) == (3, 4, 2)
    assert tri.validate(1, [3]) == []
    assert tri.validate(2, [3]) != []
    same = ph.Triangulation.from_json(tri.to_json())
    assert same.id == tri.id

    assert abs(ph.cross_ratio(0, 1, None, 2) - (-2)) < 1e-12
    assert abs(ph.solve_fourth(0, 1, None, math.e) - (-math.e)) < 1e-12

    coords = ph.Coordinates.random(tri, seed=7)
    dev = ph.Development(tri, coords)
    back = dev.extract().to_dict()
    for arc, x in coords.to_dict().items():
        assert abs(back[arc] - x) <= 1e-9 * max(1.0, abs(x))
    assert dev.equivariance_residual() < 1e-9
    assert dev.is_nondegenerate()
    assert len(dev.generators()) == 2
    assert len(dev.framing()) == 1
    assert dev.flags()[0] == [0j, 1 + 0j, None]

    flipped, mutated = coords.mutate(tri, 0)
    twice_tri, twice = mutated.mutate(flipped, 0)
    for arc, x in coords.to_dict().items():
        assert abs(twice.to_dict()[arc] - x) < 1e-12 * max(1.0, abs(x))

    positive = ph.Coordinates.random(tri, seed=3, positive=True)
    witness = json.loads(ph.grafting_witness(tri, positive))
    assert witness["schema"] == "holonomy.witness/1"
    assert witness["lamination"]["finite_leaves"] == {}
    for t2 in ph.Development(tri, positive).trace_squared().values():
        assert abs(t2.imag) < 1e-9

    i_coords = ph.Coordinates.from_dict(tri, {0: 1j, 1: 1, 2: 1, 3: 1})
    shear, bend = i_coords.pleats()[0]
    assert abs(shear) < 1e-15 and abs(bend - math.pi / 2) < 1e-15
    assert abs(cmath.exp(complex(shear, bend)) - 1j) < 1e-12

    svg = ph.render(tri, coords, depth=4)
    assert svg.count("<polygon") == 31

    try:
        ph.Triangulation.canonical(0, [3])
    except ValueError as e:
        assert "non-negative" in str(e)
    else:
        raise AssertionError("(0,(3)) accepted")

    print("pyholonomy smoke test passed")


if __name__ == "__main__":
    main()
