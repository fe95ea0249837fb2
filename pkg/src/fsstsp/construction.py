"""Randomised nearest-neighbour construction, optionally around fixed paths.

At every step the next city is drawn uniformly from the unvisited members
of the current city's candidate list; when all of those are visited the
globally nearest unvisited city is taken instead. Reaching an endpoint of a
fixed path pulls in the whole path, and the walk continues from its far end.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from ._context import kernel_context
from .fixed_set import FixedPath, FixedSet, InfeasibleFixedSetError
from .instance import Instance, cycle_length
from .tour import Tour

__all__ = ["FixedPath", "InfeasibleFixedSetError", "greedy_randomized", "greedy_with_fixed"]


def greedy_randomized(instance: Instance, rng: np.random.Generator, kernels=None) -> Tour:
    return greedy_with_fixed(instance, FixedSet.empty(instance.dimension), rng, kernels)


def greedy_with_fixed(instance: Instance, fixed: Optional[FixedSet], rng: np.random.Generator,
                      kernels=None) -> Tour:
    n = instance.dimension
    if fixed is None:
        fixed = FixedSet.empty(n)
    if fixed.dimension != n:
        raise InfeasibleFixedSetError(
            f"fixed set is for dimension {fixed.dimension}, instance has {n}")
    if fixed.size >= n:
        raise InfeasibleFixedSetError("fixed set closes a cycle")
    k, ctx = kernel_context(instance, kernels)
    u = rng.random(n)
    interior = fixed.interior_mask.view(np.uint8)
    order = k.construct(ctx, u, fixed.adjacency, interior)
    return Tour(order, cycle_length(instance, order))
