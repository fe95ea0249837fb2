import numpy as np
import pytest
from hypothesis import given, strategies as st

from fsstsp.construction import InfeasibleFixedSetError, greedy_randomized, greedy_with_fixed
from fsstsp.fixed_set import FixedSet
from fsstsp.instance import build_instance, check_permutation
from fsstsp.tour import edges_of
from fsstsp.tsplib import RawInstance, bundled_instance

from oracles import brute_force, dist_matrix, random_raw


def follows_rcl_contract(inst, order) -> bool:
    """Each step goes to an unvisited neighbour-list member, or else to the nearest unvisited node."""
    d = inst.matrix
    visited = {int(order[0])}
    for a, b in zip(order[:-1], order[1:]):
        a, b = int(a), int(b)
        rcl = [int(v) for v in inst.neighbors[a] if int(v) not in visited]
        if rcl:
            if b not in rcl:
                return False
        else:
            rest = [v for v in range(inst.dimension) if v not in visited]
            if d[a, b] != min(d[a, v] for v in rest):
                return False
        visited.add(b)
    return True


def test_triangle_is_unique(kernels):
    raw = RawInstance("t", 3, ((0.0, 0.0), (3.0, 0.0), (0.0, 4.0)), "EUC_2D")
    inst = build_instance(raw)
    for seed in range(10):
        t = greedy_randomized(inst, np.random.default_rng(seed), kernels)
        assert t.length == 12


def test_deterministic_on_eil51(kernels):
    inst = build_instance(bundled_instance("eil51"))
    a = greedy_randomized(inst, np.random.default_rng(7), kernels)
    b = greedy_randomized(inst, np.random.default_rng(7), kernels)
    assert np.array_equal(a.order, b.order) and a.length == b.length


@pytest.mark.parametrize("seed", range(5))
def test_many_constructions_hit_the_optimum(seed):
    # a 20-wide list on 10 nodes is a uniform shuffle, so use a short list here
    raw = random_raw(10, seed)
    inst = build_instance(raw, 4)
    rng = np.random.default_rng(0)
    best = None
    for _ in range(10_000):
        t = greedy_randomized(inst, rng)
        check_permutation(t.order, 10)
        best = t.length if best is None else min(best, t.length)
    assert best == brute_force(dist_matrix(raw))


def test_empty_fixed_set_matches_plain(kernels):
    inst = build_instance(random_raw(30, 4))
    a = greedy_randomized(inst, np.random.default_rng(3), kernels)
    b = greedy_with_fixed(inst, FixedSet.empty(30), np.random.default_rng(3), kernels)
    c = greedy_with_fixed(inst, None, np.random.default_rng(3), kernels)
    assert np.array_equal(a.order, b.order) and np.array_equal(a.order, c.order)


def test_single_path_on_five_nodes(kernels):
    inst = build_instance(random_raw(5, 8))
    fixed = FixedSet.from_edges([(2, 3), (3, 4)], 5)
    for seed in range(20):
        t = greedy_with_fixed(inst, fixed, np.random.default_rng(seed), kernels)
        assert {(2, 3), (3, 4)} <= edges_of(t)


def test_three_cycle_is_infeasible():
    with pytest.raises(InfeasibleFixedSetError):
        FixedSet.from_edges([(0, 1), (1, 2), (0, 2)], 5)


def test_degree_three_is_infeasible():
    with pytest.raises(InfeasibleFixedSetError):
        FixedSet.from_edges([(0, 1), (0, 2), (0, 3)], 5)


def test_fixed_set_must_leave_a_free_edge():
    inst = build_instance(random_raw(5, 1))
    with pytest.raises(InfeasibleFixedSetError):
        greedy_with_fixed(inst, FixedSet.empty(6), np.random.default_rng(0))


@given(st.integers(3, 60), st.integers(0, 10 ** 6), st.integers(1, 25))
def test_plain_construction_contract(n, seed, c):
    inst = build_instance(random_raw(n, seed), c)
    t = greedy_randomized(inst, np.random.default_rng(seed))
    check_permutation(t.order, n)
    assert follows_rcl_contract(inst, t.order)


@given(st.integers(4, 50), st.integers(0, 10 ** 6), st.data())
def test_r3_inclusion_random_subsets(n, seed, data):
    inst = build_instance(random_raw(n, seed))
    rng = np.random.default_rng(seed)
    base = rng.permutation(n)
    edges = sorted(edges_of(base))
    size = data.draw(st.integers(0, n - 1))
    picked = [edges[i] for i in rng.choice(n, size=size, replace=False)]
    fixed = FixedSet.from_edges(picked, n)
    t = greedy_with_fixed(inst, fixed, rng)
    check_permutation(t.order, n)
    assert set(picked) <= edges_of(t)
