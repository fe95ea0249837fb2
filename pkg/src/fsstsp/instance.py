"""Distance oracle and nearest-neighbour candidate lists."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .tsplib import RawInstance

DENSE_LIMIT = 4096
DEFAULT_RCL = 20


class InvalidTourError(ValueError):
    pass


def euc_2d(xa, ya, xb, yb):
    """TSPLIB nearest-integer Euclidean distance; works on scalars and arrays."""
    return np.floor(np.sqrt((xa - xb) ** 2 + (ya - yb) ** 2) + 0.5)


@dataclass(frozen=True, eq=False)
class Instance:
    raw: RawInstance
    coords: np.ndarray  # (n, 2) float64
    matrix: Optional[np.ndarray]  # (n, n) int32, None above DENSE_LIMIT
    neighbors: np.ndarray  # (n, c) int32, ascending distance
    rcl_size: int

    @property
    def name(self) -> str:
        return self.raw.name

    @property
    def dimension(self) -> int:
        return self.raw.dimension

    def dist(self, a: int, b: int) -> int:
        if self.matrix is not None:
            return int(self.matrix[a, b])
        xa, ya = self.coords[a]
        xb, yb = self.coords[b]
        return int(euc_2d(xa, ya, xb, yb))

    def row(self, a: int) -> np.ndarray:
        """Distances from ``a`` to every node as an int64 array."""
        if self.matrix is not None:
            return self.matrix[a].astype(np.int64)
        x, y = self.coords[:, 0], self.coords[:, 1]
        return euc_2d(x[a], y[a], x, y).astype(np.int64)

    def edge_lengths(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix[u, v].astype(np.int64)
        c = self.coords
        return euc_2d(c[u, 0], c[u, 1], c[v, 0], c[v, 1]).astype(np.int64)


def build_instance(raw: RawInstance, rcl_size: int = DEFAULT_RCL,
                   dense_limit: int = DENSE_LIMIT) -> Instance:
    if rcl_size < 1:
        raise ValueError(f"rcl_size must be >= 1, got {rcl_size}")
    n = raw.dimension
    coords = np.asarray(raw.coords, dtype=np.float64).reshape(n, 2)
    c = min(rcl_size, n - 1)
    x, y = coords[:, 0], coords[:, 1]

    matrix = None
    if n <= dense_limit:
        matrix = euc_2d(x[:, None], y[:, None], x[None, :], y[None, :]).astype(np.int32)

    neighbors = np.empty((n, c), dtype=np.int32)
    chunk = max(1, min(n, 4_000_000 // n))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        if matrix is not None:
            block = matrix[lo:hi].astype(np.int64)
        else:
            block = euc_2d(x[lo:hi, None], y[lo:hi, None], x[None, :], y[None, :]).astype(np.int64)
        block[np.arange(hi - lo), np.arange(lo, hi)] = np.iinfo(np.int64).max
        # stable sort: equal distances keep ascending node order
        neighbors[lo:hi] = np.argsort(block, axis=1, kind="stable")[:, :c]
    return Instance(raw, coords, matrix, neighbors, rcl_size)


def check_permutation(order: Sequence[int] | np.ndarray, n: int) -> np.ndarray:
    arr = np.asarray(order)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise InvalidTourError(f"tour has {arr.size} entries, expected {n}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise InvalidTourError("tour entries must be integers")
    seen = np.zeros(n, dtype=bool)
    if arr.min() < 0 or arr.max() >= n:
        raise InvalidTourError("tour entry outside 0..n-1")
    seen[arr] = True
    if not seen.all():
        raise InvalidTourError("tour is not a permutation")
    return arr


def cycle_length(instance: Instance, arr: np.ndarray) -> int:
    """Length of the closed walk ``arr`` without validating it."""
    return int(instance.edge_lengths(arr, np.concatenate((arr[1:], arr[:1]))).sum())


def tour_length(instance: Instance, order: Sequence[int] | np.ndarray) -> int:
    return cycle_length(instance, check_permutation(order, instance.dimension))
