"""2-opt and 3-opt with candidate lists and don't-look bits.

Both searches are first-improvement. A move anchored at node ``a`` breaks
one of a's two tour edges and adds an edge from its tour neighbour to a
candidate-list member; 3-opt extends this sequentially by one more
exchange (segment reversals, segment moves and or-opt style reinsertion).
Preset nodes start with their don't-look bit set and are skipped until an
applied move touches them.
"""
from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from ._context import kernel_context
from .instance import Instance, InvalidTourError, check_permutation, cycle_length
from .tour import Tour


class InvariantError(AssertionError):
    pass


def _active(n: int, preset) -> np.ndarray:
    active = np.ones(n, dtype=np.uint8)
    if preset is None:
        return active
    if isinstance(preset, np.ndarray) and preset.dtype == bool:
        active[preset] = 0
    else:
        idx = np.fromiter(preset, dtype=np.int64)
        if idx.size:
            active[idx] = 0
    return active


def _run(which: str, instance: Instance, tour: Tour, preset, kernels) -> Tour:
    k, ctx = kernel_context(instance, kernels)
    order = np.array(tour.order, dtype=np.int32)
    gain = int(getattr(k, which)(ctx, order, _active(len(order), preset)))
    if gain == 0:
        return tour
    if gain < 0:
        raise InvariantError(f"{which} reported a negative gain {gain}")
    try:
        check_permutation(order, instance.dimension)
    except InvalidTourError as exc:
        raise InvariantError(f"{which} broke the permutation: {exc}") from exc
    length = cycle_length(instance, order)
    if length != tour.length - gain:
        raise InvariantError(
            f"{which}: length {length} != {tour.length} - gain {gain}")
    return Tour(order, length)


def two_opt(instance: Instance, tour: Tour, preset: Optional[Iterable[int]] = None,
            kernels=None) -> Tour:
    return _run("two_opt", instance, tour, preset, kernels)


def three_opt(instance: Instance, tour: Tour, preset: Optional[Iterable[int]] = None,
              kernels=None) -> Tour:
    return _run("three_opt", instance, tour, preset, kernels)


SEARCHES = {"2opt": two_opt, "3opt": three_opt}
