"""Independent reference implementations used by the tests.

Nothing here imports the solver kernels; everything is brute force over
plain Python lists so it can be trusted on small inputs.
"""
from __future__ import annotations

import itertools
import math
import random

from fsstsp.tsplib import RawInstance


def random_raw(n: int, seed: int, scale: int = 1000, name: str = "rand") -> RawInstance:
    r = random.Random(seed)
    coords = tuple((float(r.randrange(scale)), float(r.randrange(scale))) for _ in range(n))
    return RawInstance(f"{name}{n}", n, coords, "EUC_2D")


def dist_matrix(raw: RawInstance) -> list[list[int]]:
    c = raw.coords
    return [[int(math.floor(math.sqrt((xa - xb) ** 2 + (ya - yb) ** 2) + 0.5))
             for xb, yb in c] for xa, ya in c]


def cycle(d, order) -> int:
    return sum(d[order[i - 1]][order[i]] for i in range(len(order)))


def brute_force(d) -> int:
    """Optimal tour length by enumerating the (n-1)!/2 distinct cycles."""
    n = len(d)
    best = None
    for perm in itertools.permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue  # the reversed cycle is enumerated too
        length = cycle(d, (0,) + perm)
        if best is None or length < best:
            best = length
    return best


def edge_set(order) -> set[tuple[int, int]]:
    n = len(order)
    return {tuple(sorted((int(order[i]), int(order[(i + 1) % n])))) for i in range(n)}


def best_2exchange(d, order) -> int:
    """Largest gain of any 2-exchange (unrestricted)."""
    n = len(order)
    best = 0
    for i in range(n - 1):
        for j in range(i + 2, n):
            a, b = order[i], order[i + 1]
            c, e = order[j], order[(j + 1) % n]
            if e == a:
                continue
            best = max(best, d[a][b] + d[c][e] - d[a][c] - d[b][e])
    return best


def three_exchanges(order):
    """Every tour reachable by removing three tour edges and reconnecting."""
    o = list(order)
    n = len(o)
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            for k in range(j + 1, n):
                a = o[k + 1:] + o[:i + 1]
                b = o[i + 1:j + 1]
                c = o[j + 1:k + 1]
                br, cr = b[::-1], c[::-1]
                for tail in (br + c, b + cr, br + cr, c + b, c + br, cr + b, cr + br):
                    yield a + tail


def best_3exchange(d, order) -> int:
    base = cycle(d, order)
    return max(base - cycle(d, t) for t in three_exchanges(order))


def fix_oracle(base_order, sample_orders, size) -> set[tuple[int, int]]:
    """Top-`size` base edges by occurrence count, ties by ascending edge, via a full sort."""
    sets = [edge_set(s) for s in sample_orders]
    counts = {e: sum(e in s for s in sets) for e in edge_set(base_order)}
    ranked = sorted(counts, key=lambda e: (-counts[e], e))
    return set(ranked[:size])


def size_schedule_oracle(dimension: int, min_free: int = 10) -> list[int]:
    sizes = []
    i = 1
    while math.floor(dimension / 2 ** i) >= min_free:
        sizes.append(dimension - math.floor(dimension / 2 ** i))
        i += 1
    return sorted(set(sizes)) or [dimension // 2]
