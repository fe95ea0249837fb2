import itertools

import numpy as np
from hypothesis import given, strategies as st

from fsstsp.fixed_set import FixedSet, preset_from_fixed
from fsstsp.instance import build_instance, check_permutation
from fsstsp.local_search import three_opt, two_opt
from fsstsp.tour import Tour
from fsstsp.tsplib import RawInstance, bundled_instance

from oracles import (best_2exchange, best_3exchange, brute_force, cycle, dist_matrix,
                     random_raw)

SQUARE = RawInstance("sq", 4, ((0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)), "EUC_2D")


def test_square_uncrossed(kernels):
    inst = build_instance(SQUARE)
    crossing = Tour.from_order(inst, [0, 2, 1, 3])
    assert crossing.length == 48
    # brute force over the three distinct 4-node cycles
    assert brute_force(dist_matrix(SQUARE)) == 40
    assert two_opt(inst, crossing, kernels=kernels).length == 40
    assert three_opt(inst, crossing, kernels=kernels).length == 40


def test_optimal_tour_unchanged(kernels):
    inst = build_instance(SQUARE)
    t = Tour.from_order(inst, [0, 1, 2, 3])
    assert two_opt(inst, t, kernels=kernels) is t
    assert three_opt(inst, t, kernels=kernels) is t


def test_all_preset_means_no_change(kernels):
    inst = build_instance(random_raw(40, 2))
    t = Tour.from_order(inst, np.random.default_rng(0).permutation(40))
    everyone = range(40)
    assert two_opt(inst, t, everyone, kernels=kernels) is t
    assert three_opt(inst, t, everyone, kernels=kernels) is t
    mask = np.ones(40, dtype=bool)
    assert three_opt(inst, t, mask, kernels=kernels) is t


def test_tiny_instances_exhaustive():
    # every start permutation of every 5..7 node instance in a small family
    for seed in range(6):
        for n in (5, 6, 7):
            raw = random_raw(n, seed)
            inst, d = build_instance(raw), dist_matrix(raw)
            opt = brute_force(d)
            for p in itertools.islice(itertools.permutations(range(n)), 0, None, 7):
                t = Tour.from_order(inst, p)
                out = three_opt(inst, t)
                assert opt <= out.length <= t.length
                assert best_3exchange(d, list(out.order)) <= 0


def test_three_opt_beats_a_two_opt_local_optimum():
    # find a 2-opt optimal tour that some 3-exchange improves, then check 3-opt improves it
    found = 0
    for seed in range(400):
        raw = random_raw(7, seed)
        inst, d = build_instance(raw), dist_matrix(raw)
        t = two_opt(inst, Tour.from_order(inst, np.random.default_rng(seed).permutation(7)))
        if best_2exchange(d, list(t.order)) == 0 and best_3exchange(d, list(t.order)) > 0:
            assert three_opt(inst, t).length < t.length
            found += 1
    assert found > 0


def test_moves_can_unfreeze_preset_nodes(kernels):
    inst = build_instance(random_raw(30, 5))
    t = Tour.from_order(inst, np.random.default_rng(1).permutation(30))
    half = set(range(15))
    out = two_opt(inst, t, half, kernels=kernels)
    assert out.length < t.length
    check_permutation(out.order, 30)


def test_preset_from_fixed():
    assert preset_from_fixed(FixedSet.from_edges([(2, 3), (3, 4)], 6)) == {3}
    assert preset_from_fixed(FixedSet.from_edges([(5, 6)], 8)) == set()
    path = [(i, i + 1) for i in range(7)]
    assert len(preset_from_fixed(FixedSet.from_edges(path, 10))) == 6


def test_eil51_local_optima(kernels):
    inst = build_instance(bundled_instance("eil51"))
    t = Tour.from_order(inst, np.random.default_rng(4).permutation(51))
    t2 = two_opt(inst, t, kernels=kernels)
    t3 = three_opt(inst, t, kernels=kernels)
    assert t3.length <= t.length and t2.length <= t.length
    assert two_opt(inst, t2, kernels=kernels) is t2
    assert three_opt(inst, t3, kernels=kernels) is t3


@given(st.integers(5, 16), st.integers(0, 10 ** 6))
def test_full_lists_give_unrestricted_local_optima(n, seed):
    raw = random_raw(n, seed)
    inst, d = build_instance(raw, 20), dist_matrix(raw)
    t = Tour.from_order(inst, np.random.default_rng(seed).permutation(n))
    t2 = two_opt(inst, t)
    t3 = three_opt(inst, t)
    assert t2.length == cycle(d, list(t2.order)) <= t.length
    assert t3.length == cycle(d, list(t3.order)) <= t.length
    assert best_2exchange(d, list(t2.order)) == 0
    assert best_3exchange(d, list(t3.order)) == 0


@given(st.integers(5, 200), st.integers(0, 10 ** 6), st.sampled_from(["2opt", "3opt"]))
def test_monotone_valid_fixpoint(n, seed, which):
    inst = build_instance(random_raw(n, seed), 8)
    search = two_opt if which == "2opt" else three_opt
    t = Tour.from_order(inst, np.random.default_rng(seed).permutation(n))
    out = search(inst, t)
    check_permutation(out.order, n)
    assert out.length <= t.length
    assert search(inst, out) is out


@given(st.integers(5, 120), st.integers(0, 10 ** 6), st.sampled_from(["2opt", "3opt"]),
       st.floats(0, 1))
def test_preset_runs_stay_monotone_and_valid(n, seed, which, share):
    inst = build_instance(random_raw(n, seed), 8)
    rng = np.random.default_rng(seed)
    search = two_opt if which == "2opt" else three_opt
    t = Tour.from_order(inst, rng.permutation(n))
    out = search(inst, t, rng.random(n) < share)
    check_permutation(out.order, n)
    assert out.length <= t.length
