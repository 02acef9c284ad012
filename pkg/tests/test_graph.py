"""Graph construction: neighborhoods, symmetry, translation invariance."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from richflow import build_box, build_layered, build_torus, closed_neighborhood
from richflow.graph import disjoint_union


def hood(g, x):
    return set(closed_neighborhood(g, x))


def test_cycle_neighborhood():
    g = build_torus(1, [5])
    assert hood(g, 0) == {4, 0, 1}
    assert len(closed_neighborhood(g, 0)) == 3
    assert closed_neighborhood(g, 2) == [1, 2, 3]


def test_length_two_axes_deduplicate():
    g = build_torus(2, [2, 2])
    # (0,0): self, (1,0), (0,1); the +1/-1 wraparounds coincide
    assert hood(g, 0) == {0, 1, 2}
    assert g.uniform_count == 3


def test_torus_2d_degree():
    g = build_torus(2, [8, 8])
    assert g.vertex_count == 64
    assert (g.counts == 5).all()
    assert g.max_degree == 4


def test_torus_3x3_neighborhood():
    g = build_torus(2, [3, 3])
    # (0,0) on a 3x3 torus: itself, (1,0), (2,0), (0,1), (0,2)
    assert hood(g, 0) == {0, 3, 6, 1, 2}


def test_torus_rejects_bad_dimensions():
    with pytest.raises(ValueError):
        build_torus(0, [])
    with pytest.raises(ValueError):
        build_torus(1, [1])
    with pytest.raises(ValueError):
        build_torus(2, [4])  # length list shorter than d
    with pytest.raises(ValueError, match="overflow"):
        build_torus(2, [65536, 65536])


def test_vertex_id_range_checked():
    g = build_torus(1, [5])
    with pytest.raises(ValueError):
        closed_neighborhood(g, 5)
    with pytest.raises(ValueError):
        g.coords(-1)


@pytest.fixture
def ladder():
    # two 6-cycles joined by rungs
    return build_layered(2, 1, [6], [(1, 1, 1), (2, 2, 1), (1, 2, 0)])


def test_ladder_neighborhoods(ladder):
    # vertex (1,0): ring neighbors (1,1),(1,5), rung (2,0), itself
    assert hood(ladder, 0) == {0, 1, 5, 6}
    # ladder degree is 3: every |G_x| = 4
    assert ladder.uniform_count == 4
    assert ladder.max_degree == 3
    assert ladder.coords(0) == (1, 0)
    assert ladder.coords(7) == (2, 1)


def test_layered_single_layer_equals_torus():
    gl = build_layered(1, 2, [4, 4], [(1, 1, (1, 0)), (1, 1, (0, 1))])
    gt = build_torus(2, [4, 4])
    assert gl.vertex_count == gt.vertex_count
    for x in range(gt.vertex_count):
        assert closed_neighborhood(gl, x) == closed_neighborhood(gt, x)


def test_layered_rejects_bad_templates():
    with pytest.raises(ValueError, match="self-loop"):
        build_layered(2, 1, [6], [(1, 1, 0)])
    with pytest.raises(ValueError, match="invalid layer"):
        build_layered(2, 1, [6], [(1, 3, 0)])
    with pytest.raises(ValueError):
        build_layered(2, 0, [], [(1, 2, 0)])  # d >= 1 enforced
    with pytest.raises(ValueError):
        build_layered(0, 1, [6], [])


def test_layered_translation_invariance(ladder):
    # neighborhood structure commutes with the cyclic shift (j, x) -> (j, x+1)
    base = 6
    for x in range(ladder.vertex_count):
        j, c = divmod(x, base)
        shifted = j * base + (c + 1) % base
        expect = {nj * base + (nc + 1) % base
                  for nj, nc in (divmod(y, base) for y in hood(ladder, x))}
        assert hood(ladder, shifted) == expect


def test_box_boundary_restricts():
    g = build_box(2, [4, 4])
    assert g.boundary == "free"
    assert hood(g, 0) == {0, 1, 4}            # corner keeps in-box neighbors only
    assert hood(g, 5) == {1, 4, 5, 6, 9}      # interior keeps 2d+1
    assert g.max_degree == 4


@pytest.mark.parametrize("g", [
    build_torus(1, [2]),
    build_torus(1, [7]),
    build_torus(2, [2, 5]),
    build_torus(3, [3, 3, 3]),
    build_box(2, [4, 5]),
    build_layered(2, 1, [6], [(1, 1, 1), (2, 2, 1), (1, 2, 0)]),
    build_layered(3, 2, [4, 4], [(1, 1, (1, 0)), (2, 2, (0, 1)), (1, 2, (0, 0)), (2, 3, (1, 1))]),
])
def test_symmetry_and_self_membership(g):
    hoods = [hood(g, x) for x in range(g.vertex_count)]
    for x in range(g.vertex_count):
        assert x in hoods[x]
        lst = closed_neighborhood(g, x)
        assert len(lst) == len(set(lst))          # duplicate-free
        assert lst == sorted(lst)                 # stored order contract
        for y in hoods[x]:
            assert x in hoods[y]                  # y in G_x <=> x in G_y


def test_torus_transitivity_surrogate():
    g = build_torus(2, [4, 6])
    lengths = np.array([4, 6])
    offsets = set()
    for x in range(g.vertex_count):
        cx = np.array(g.coords(x))
        offs = frozenset(
            tuple((np.array(g.coords(y)) - cx) % lengths) for y in hood(g, x)
        )
        offsets.add(offs)
    assert len(offsets) == 1  # identical offset pattern at every vertex


def test_degree_sum_identity():
    for d, lengths in [(1, [8]), (2, [4, 4]), (3, [3, 4, 5])]:
        g = build_torus(d, lengths)
        assert int(g.counts.sum()) == g.vertex_count * (2 * d + 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda d: st.tuples(st.just(d), st.lists(st.integers(2, 6), min_size=d, max_size=d))
))
def test_torus_invariants_random(dims):
    d, lengths = dims
    g = build_torus(d, lengths)
    assert g.vertex_count == int(np.prod(lengths))
    nbrs = [hood(g, x) for x in range(g.vertex_count)]
    for x in range(g.vertex_count):
        assert x in nbrs[x]
        assert all(x in nbrs[y] for y in nbrs[x])
        if all(v >= 3 for v in lengths):
            assert len(nbrs[x]) == 2 * d + 1


def test_disjoint_union_copies():
    g = build_torus(1, [4])
    big = disjoint_union(g, 3)
    assert big.vertex_count == 12
    for c in range(3):
        for x in range(4):
            assert hood(big, c * 4 + x) == {c * 4 + y for y in hood(g, x)}


def test_graph_params_roundtrip():
    g = build_layered(2, 1, [6], [(1, 2, 0)])
    p = g.params()
    assert p["kind"] == "layered" and p["layers"] == 2
    assert p["templates"] == [[1, 2, [0]]]
    t = build_torus(2, [4, 4]).params()
    assert t == {"kind": "torus", "boundary": "periodic", "d": 2, "lengths": [4, 4]}
