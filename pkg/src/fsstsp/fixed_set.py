"""Elite-solution archive and fixed-set generation.

A fixed set is a subset of the edges of one elite *base* tour, chosen as
the edges that occur most often in a random sample of other elite tours.
Because it comes from a single Hamiltonian cycle it always decomposes into
vertex-disjoint paths and can be completed into a tour.
"""
from __future__ import annotations

import bisect
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .tour import Edge, Tour, edge


class InfeasibleFixedSetError(ValueError):
    pass


class FixedPath(NamedTuple):
    nodes: np.ndarray  # int32, >= 2 nodes

    @property
    def first(self) -> int:
        return int(self.nodes[0])

    @property
    def last(self) -> int:
        return int(self.nodes[-1])

    def edges(self) -> list[Edge]:
        p = self.nodes
        return [edge(int(a), int(b)) for a, b in zip(p[:-1], p[1:])]


class FixedSet:
    """Edges to keep, held as paths plus a per-node path adjacency table.

    ``adjacency[v]`` is ``(previous, next)`` along v's path, ``-1`` where
    there is none; nodes outside every path have ``(-1, -1)``.
    """

    def __init__(self, dimension: int, paths: Sequence[FixedPath] = (),
                 adjacency: Optional[np.ndarray] = None, base_key: Optional[bytes] = None,
                 size: Optional[int] = None):
        self.dimension = dimension
        self.base_key = base_key
        if adjacency is None:
            paths = tuple(paths)
            self.paths = paths
            adjacency = np.full((dimension, 2), -1, dtype=np.int32)
            for p in paths:
                adjacency[p.nodes[1:], 0] = p.nodes[:-1]
                adjacency[p.nodes[:-1], 1] = p.nodes[1:]
        elif paths:
            self.paths = tuple(paths)
        self.adjacency = adjacency
        self.size = int((adjacency[:, 1] != -1).sum()) if size is None else size

    @cached_property
    def paths(self) -> tuple[FixedPath, ...]:
        adj = self.adjacency
        starts = np.flatnonzero((adj[:, 0] == -1) & (adj[:, 1] != -1))
        out = []
        for s in starts:
            nodes = [int(s)]
            v = adj[s, 1]
            while v != -1:
                nodes.append(int(v))
                v = adj[v, 1]
            out.append(FixedPath(np.array(nodes, dtype=np.int32)))
        return tuple(out)

    @classmethod
    def empty(cls, dimension: int) -> "FixedSet":
        return cls(dimension, ())

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], dimension: int,
                   base_key: Optional[bytes] = None) -> "FixedSet":
        """Decompose an edge set into paths; reject anything that is not a linear forest."""
        adj: dict[int, list[int]] = {}
        seen: set[Edge] = set()
        for u, v in edges:
            e = edge(int(u), int(v))
            if not (0 <= e[0] and e[1] < dimension):
                raise InfeasibleFixedSetError(f"edge {e} outside 0..{dimension - 1}")
            if e in seen:
                continue
            seen.add(e)
            for a, b in (e, e[::-1]):
                adj.setdefault(a, []).append(b)
                if len(adj[a]) > 2:
                    raise InfeasibleFixedSetError(f"node {a} has degree > 2")
        paths = []
        done: set[int] = set()
        for start in sorted(adj):
            if len(adj[start]) != 1 or start in done:
                continue
            nodes = [start]
            prev, cur = -1, start
            while True:
                nxt = [w for w in adj[cur] if w != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                nodes.append(cur)
            done.update(nodes)
            paths.append(FixedPath(np.array(nodes, dtype=np.int32)))
        if len(done) != len(adj):
            raise InfeasibleFixedSetError("fixed edges contain a cycle")
        return cls(dimension, paths, base_key=base_key)

    @cached_property
    def edges(self) -> frozenset[Edge]:
        return frozenset(e for p in self.paths for e in p.edges())

    def __len__(self) -> int:
        return self.size

    @cached_property
    def interior_mask(self) -> np.ndarray:
        return (self.adjacency[:, 0] != -1) & (self.adjacency[:, 1] != -1)

    def __repr__(self) -> str:
        return f"FixedSet(size={self.size}, paths={len(self.paths)})"


def occurrence_count(e: tuple[int, int], sample: Iterable[Tour]) -> int:
    u, v = e
    return sum(1 for s in sample if s.has_edge(u, v))


def edge_counts(base: Tour, sample: Sequence[Tour]) -> np.ndarray:
    """Occurrence count of every base edge ``(order[i], order[i+1])`` in the sample."""
    order = base.order
    nxt = base.following
    succ = np.stack([s.succ for s in sample])
    return ((succ[:, order] == nxt) | (succ[:, nxt] == order)).sum(axis=0)


def fix(base: Tour, sample: Sequence[Tour], size: int) -> FixedSet:
    """Keep the ``size`` base edges seen most often in ``sample``.

    Ties go to the lexicographically smaller normalised edge.
    """
    n = len(base)
    if not 0 <= size < n:
        raise ValueError(f"fixed set size must be in [0, {n - 1}], got {size}")
    if size == 0:
        return FixedSet(n, (), base_key=base.key)
    if not sample:
        raise ValueError("sample must contain at least one tour")
    order = base.order
    nxt = base.following
    counts = edge_counts(base, sample)
    lo = np.minimum(order, nxt).astype(np.int64)
    hi = np.maximum(order, nxt).astype(np.int64)
    # unique per edge: higher count first, then (lo, hi) ascending
    key = (len(sample) - counts) * (n * n) + lo * n + hi
    chosen = np.argpartition(key, size - 1)[:size] if size < n else np.arange(n)
    a, b = order[chosen], nxt[chosen]
    adjacency = np.full((n, 2), -1, dtype=np.int32)
    adjacency[b, 0] = a
    adjacency[a, 1] = b
    fs = FixedSet(n, adjacency=adjacency, base_key=base.key, size=size)
    if (adjacency[:, 1] != -1).sum() != size:
        raise AssertionError("fixed set has the wrong size")
    return fs


class _Entry(NamedTuple):
    length: int
    seq: int
    tour: Tour


class Population:
    """The best distinct tours seen so far, ranked by length then arrival.

    Only the best ``capacity`` distinct tours are retained; a tour whose edge
    set is already present is ignored.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._ranked: list[_Entry] = []
        self._keys: set[bytes] = set()
        self._seq = 0
        self.offered = 0

    def __len__(self) -> int:
        return len(self._ranked)

    def add(self, tour: Tour) -> Optional[int]:
        """Insert ``tour``; return its rank, or None if it was rejected."""
        self.offered += 1
        ranked = self._ranked
        if len(ranked) >= self.capacity and tour.length >= ranked[-1].length:
            return None
        key = tour.key
        if key in self._keys:
            return None
        entry = _Entry(tour.length, self._seq, tour)
        self._seq += 1
        rank = bisect.bisect_right(ranked, (tour.length, entry.seq))
        ranked.insert(rank, entry)
        self._keys.add(key)
        if len(ranked) > self.capacity:
            dropped = ranked.pop()
            self._keys.discard(dropped.tour.key)
        return rank

    def at(self, rank: int) -> Tour:
        return self._ranked[rank].tour

    def best(self, count: int) -> list[Tour]:
        return [e.tour for e in self._ranked[:count]]

    @property
    def best_tour(self) -> Optional[Tour]:
        return self._ranked[0].tour if self._ranked else None

    @property
    def best_length(self) -> Optional[int]:
        return self._ranked[0].length if self._ranked else None

    def __contains__(self, tour: Tour) -> bool:
        return tour.key in self._keys


def sample_solutions(pop: Population, k: int, n: int, rng: np.random.Generator) -> list[Tour]:
    """k distinct tours drawn uniformly from the n best (all of them if fewer)."""
    size = min(n, len(pop))
    if size == 0:
        raise ValueError("population is empty")
    if size <= k:
        return pop.best(size)
    return [pop.at(int(i)) for i in rng.choice(size, size=k, replace=False)]


def pick_base(pop: Population, m: int, rng: np.random.Generator) -> Tour:
    size = min(m, len(pop))
    if size == 0:
        raise ValueError("population is empty")
    return pop.at(int(rng.integers(size)))


def preset_from_fixed(fixed: FixedSet) -> set[int]:
    """Interior nodes of the fixed paths; their tour neighbours are already decided."""
    return {int(v) for v in np.flatnonzero(fixed.interior_mask)}
