import numpy as np
import pytest
from hypothesis import given, strategies as st

from fsstsp.instance import InvalidTourError, build_instance, tour_length
from fsstsp.tsplib import RawInstance, bundled_instance, bundled_opt_tour, known_best

from oracles import dist_matrix, random_raw


def raw_of(points):
    return RawInstance("t", len(points), tuple((float(x), float(y)) for x, y in points), "EUC_2D")


def test_rounding_examples():
    inst = build_instance(raw_of([(0, 0), (3, 4), (1, 1)]))
    assert inst.dist(0, 1) == 5
    assert inst.dist(0, 2) == 1


def test_half_rounds_up():
    inst = build_instance(raw_of([(0, 0), (0.5, 0), (2.5, 0)]))
    assert inst.dist(0, 1) == 1
    assert inst.dist(0, 2) == 3


def test_triangle_length():
    inst = build_instance(raw_of([(0, 0), (3, 0), (0, 4)]))
    assert tour_length(inst, [0, 1, 2]) == 12


def test_eil51_neighbors_and_optimum():
    inst = build_instance(bundled_instance("eil51"), 20)
    assert inst.neighbors.shape == (51, 20)
    assert tour_length(inst, bundled_opt_tour("eil51")) == 426


@pytest.mark.parametrize("name", ["eil51", "berlin52", "kroA100", "pr76", "rd100", "ch150",
                                  "a280", "pcb442"])
def test_opt_tours_reach_known_best(name):
    inst = build_instance(bundled_instance(name))
    assert tour_length(inst, bundled_opt_tour(name)) == known_best(name)


def test_not_a_permutation():
    inst = build_instance(raw_of([(0, 0), (3, 0), (0, 4)]))
    for bad in ([0, 1], [0, 1, 1], [0, 1, 3]):
        with pytest.raises(InvalidTourError):
            tour_length(inst, bad)


def test_lazy_distances_match_dense():
    raw = random_raw(60, 3)
    dense = build_instance(raw)
    lazy = build_instance(raw, dense_limit=10)
    assert lazy.matrix is None
    assert all(dense.dist(a, b) == lazy.dist(a, b) for a in range(60) for b in range(60))
    assert np.array_equal(dense.neighbors, lazy.neighbors)


@given(st.integers(3, 120), st.integers(0, 10 ** 6), st.integers(1, 30))
def test_matrix_and_neighbor_lists_vs_brute_force(n, seed, c):
    raw = random_raw(n, seed, scale=50)  # small grid, so plenty of distance ties
    inst = build_instance(raw, c)
    d = dist_matrix(raw)
    assert inst.matrix.tolist() == d
    width = min(c, n - 1)
    assert inst.neighbors.shape == (n, width)
    for a in range(n):
        expect = sorted((b for b in range(n) if b != a), key=lambda b: (d[a][b], b))[:width]
        assert inst.neighbors[a].tolist() == expect


@given(st.integers(3, 40), st.integers(0, 10 ** 6), st.integers(0, 39), st.booleans())
def test_length_invariant_under_rotation_and_reversal(n, seed, shift, flip):
    inst = build_instance(random_raw(n, seed))
    order = np.random.default_rng(seed).permutation(n)
    other = np.roll(order, shift % n)
    if flip:
        other = other[::-1]
    assert tour_length(inst, order) == tour_length(inst, other)
