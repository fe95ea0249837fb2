"""Tours as node permutations, their edge sets, and a rotation/reversal-free key."""
from __future__ import annotations

from functools import cached_property
from typing import Sequence

import numpy as np

from .instance import Instance, check_permutation, tour_length
from .tsplib import format_tour

Edge = tuple[int, int]


def edge(u: int, v: int) -> Edge:
    """Normalised undirected edge with the smaller id first."""
    if u == v:
        raise ValueError(f"self-loop on node {u}")
    return (u, v) if u < v else (v, u)


class Tour:
    """A Hamiltonian cycle with its cached length.

    The order array is read-only; local search works on a copy and returns
    a new ``Tour``.
    """

    def __init__(self, order: Sequence[int] | np.ndarray, length: int):
        arr = np.array(order, dtype=np.int32)
        arr.flags.writeable = False
        self.order = arr
        self.length = int(length)

    @classmethod
    def from_order(cls, instance: Instance, order: Sequence[int] | np.ndarray) -> "Tour":
        return cls(order, tour_length(instance, order))

    def __len__(self) -> int:
        return self.order.shape[0]

    def __repr__(self) -> str:
        head = ", ".join(str(v) for v in self.order[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"Tour(length={self.length}, order=[{head}{more}])"

    @cached_property
    def following(self) -> np.ndarray:
        """``order`` shifted left by one: ``following[i]`` comes after ``order[i]``."""
        return np.concatenate((self.order[1:], self.order[:1]))

    @cached_property
    def succ(self) -> np.ndarray:
        s = np.empty_like(self.order)
        s[self.order] = self.following
        return s

    @cached_property
    def pos(self) -> np.ndarray:
        p = np.empty_like(self.order)
        p[self.order] = np.arange(len(self), dtype=np.int32)
        return p

    @cached_property
    def key(self) -> bytes:
        return canonical_key(self)

    def has_edge(self, u: int, v: int) -> bool:
        s = self.succ
        return bool(s[u] == v or s[v] == u)

    def validate(self, instance: Instance) -> None:
        check_permutation(self.order, instance.dimension)
        actual = tour_length(instance, self.order)
        if actual != self.length:
            raise AssertionError(f"cached length {self.length} != actual {actual}")

    def to_tsplib(self, name: str) -> str:
        return format_tour(name, self.order, self.length)


def edges_of(tour: Tour | Sequence[int]) -> set[Edge]:
    order = tour.order if isinstance(tour, Tour) else np.asarray(tour)
    nxt = np.concatenate((order[1:], order[:1]))
    return {edge(int(u), int(v)) for u, v in zip(order, nxt)}


def canonical_key(tour: Tour | Sequence[int]) -> bytes:
    """Equal keys iff the edge sets are equal.

    Rotate node 0 to the front, then read in whichever direction puts the
    smaller of its two neighbours second.
    """
    order = tour.order if isinstance(tour, Tour) else np.asarray(tour, dtype=np.int32)
    order = np.asarray(order, dtype=np.int32)
    p = int(np.flatnonzero(order == 0)[0])
    rot = np.roll(order, -p)
    if len(rot) > 2 and rot[1] > rot[-1]:
        rot = np.concatenate((rot[:1], rot[:0:-1]))
    return rot.tobytes()
