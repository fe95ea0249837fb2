"""GRASP and fixed set search drivers."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .construction import greedy_randomized, greedy_with_fixed
from .fixed_set import FixedSet, Population, fix, pick_base, sample_solutions
from .instance import Instance
from .local_search import SEARCHES, InvariantError
from .tour import Tour

METHODS = ("grasp", "fss")


def default_budget(dimension: int) -> int:
    """Solutions generated per run: 100|V| below 1000 nodes, 10|V| above."""
    return 100 * dimension if dimension < 1000 else 10 * dimension


@dataclass
class FssParams:
    k: int = 10
    n: int = 500
    m: int = 100
    init_population: int = 100
    stag: int = 100
    rcl_size: int = 20
    local_search: str = "3opt"
    max_solutions: Optional[int] = None  # None -> default_budget(dimension)
    seed: int = 0
    min_free: int = 10
    method: str = "fss"

    def validate(self) -> None:
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if not 1 <= self.m <= self.n:
            raise ValueError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if self.stag < 1:
            raise ValueError("stag must be >= 1")
        if self.init_population < 1:
            raise ValueError("init_population must be >= 1")
        if self.rcl_size < 1:
            raise ValueError("rcl_size must be >= 1")
        if self.min_free < 1:
            raise ValueError("min_free must be >= 1")
        if self.local_search not in SEARCHES:
            raise ValueError(f"unknown local search {self.local_search!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.max_solutions is not None and self.max_solutions < 1:
            raise ValueError("max_solutions must be >= 1")
        if (self.method == "fss" and self.max_solutions is not None
                and self.max_solutions < self.init_population):
            raise ValueError("max_solutions must be >= init_population")

    def budget(self, dimension: int) -> int:
        return self.max_solutions if self.max_solutions is not None else default_budget(dimension)

    @property
    def label(self) -> str:
        return f"{self.method}-{self.local_search}"


class SizeSchedule:
    """Ascending fixed-set sizes with a cursor; sizes can be dropped, never added."""

    def __init__(self, sizes):
        self.sizes = sorted(set(int(s) for s in sizes))
        self.index = 0

    def __len__(self) -> int:
        return len(self.sizes)

    def __bool__(self) -> bool:
        return bool(self.sizes)

    @property
    def current(self) -> int:
        return self.sizes[self.index]

    def switch(self, remove: bool = False) -> None:
        """Move to the next larger size (wrapping), first dropping the current one if asked.

        Only the smallest size may be removed.
        """
        if remove:
            if self.index != 0:
                raise InvariantError("only the smallest size may be removed")
            del self.sizes[0]
            self.index = 0
            return
        self.index = (self.index + 1) % len(self.sizes)


def size_schedule(dimension: int, min_free: int = 10) -> SizeSchedule:
    """Sizes |V| - floor(|V| / 2^i), i = 1, 2, ..., while floor(|V| / 2^i) >= min_free."""
    if dimension < 4:
        raise ValueError("dimension must be >= 4")
    sizes = []
    i = 1
    while dimension // 2 ** i >= min_free:
        sizes.append(dimension - dimension // 2 ** i)
        i += 1
    if not sizes:
        sizes = [dimension // 2]
    return SizeSchedule(sizes)


@dataclass
class RunRecord:
    instance: str
    params: FssParams
    evaluation: list[int] = field(default_factory=list)
    length: list[int] = field(default_factory=list)
    best_so_far: list[int] = field(default_factory=list)
    elapsed: list[float] = field(default_factory=list)
    fixed_size: list[int] = field(default_factory=list)
    best_tour: Optional[Tour] = None
    size_switches: int = 0
    sizes_removed: int = 0
    schedule_exhausted: bool = False
    wall_time: float = 0.0
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    @property
    def evaluations(self) -> int:
        return len(self.evaluation)

    @property
    def best_length(self) -> Optional[int]:
        return self.best_tour.length if self.best_tour is not None else None

    def log(self, tour: Tour, fixed_size: int) -> bool:
        """Append one evaluation; returns True when it is a new best."""
        improved = self.best_tour is None or tour.length < self.best_tour.length
        if improved:
            self.best_tour = tour
        self.evaluation.append(len(self.evaluation) + 1)
        self.length.append(tour.length)
        self.best_so_far.append(self.best_tour.length)
        self.elapsed.append(time.perf_counter() - self._t0)
        self.fixed_size.append(fixed_size)
        return improved

    def trace(self, timing: bool = True) -> list[tuple]:
        rows = zip(self.evaluation, self.length, self.best_so_far, self.elapsed, self.fixed_size)
        if timing:
            return list(rows)
        return [(e, l, b, 0.0, s) for e, l, b, _, s in rows]

    def summary(self) -> dict:
        return {
            "instance": self.instance,
            "method": self.params.label,
            "best": self.best_length,
            "evaluations": self.evaluations,
            "size_switches": self.size_switches,
            "sizes_removed": self.sizes_removed,
            "wall_time": self.wall_time,
            "params": asdict(self.params),
        }


def _check_contains(tour: Tour, fixed: FixedSet) -> None:
    adj = fixed.adjacency
    has = adj[:, 1] != -1
    if not has.any():
        return
    a = np.flatnonzero(has)
    b = adj[a, 1]
    succ = tour.succ
    if not np.all((succ[a] == b) | (succ[b] == a)):
        raise InvariantError("constructed tour does not contain the fixed set")


def grasp(instance: Instance, params: FssParams, budget: int, pop: Population,
          rng: np.random.Generator, record: RunRecord, kernels=None) -> None:
    """Construct, improve and archive ``budget`` solutions."""
    search = SEARCHES[params.local_search]
    for _ in range(budget):
        s = greedy_randomized(instance, rng, kernels)
        s = search(instance, s, kernels=kernels)
        pop.add(s)
        record.log(s, 0)


def run_grasp(instance: Instance, params: FssParams, kernels=None) -> RunRecord:
    params.validate()
    rng = np.random.default_rng(params.seed)
    record = RunRecord(instance.name, params)
    pop = Population(max(params.n, params.m))
    grasp(instance, params, params.budget(instance.dimension), pop, rng, record, kernels)
    record.wall_time = time.perf_counter() - record._t0
    return record


def run_fss(instance: Instance, params: FssParams, kernels=None) -> RunRecord:
    params.validate()
    budget = params.budget(instance.dimension)
    if budget < params.init_population:
        raise ValueError("budget must cover the initial population")
    rng = np.random.default_rng(params.seed)
    record = RunRecord(instance.name, params)
    pop = Population(max(params.n, params.m))
    search = SEARCHES[params.local_search]
    schedule = size_schedule(instance.dimension, params.min_free)

    grasp(instance, params, params.init_population, pop, rng, record, kernels)

    best_stagnant = 0
    quality_stagnant = 0
    while record.evaluations < budget and schedule:
        size = schedule.current
        sample = sample_solutions(pop, params.k, params.n, rng)
        base = pick_base(pop, params.m, rng)
        fixed = fix(base, sample, size)
        s = greedy_with_fixed(instance, fixed, rng, kernels)
        _check_contains(s, fixed)
        s = search(instance, s, fixed.interior_mask, kernels=kernels)
        rank = pop.add(s)
        if record.log(s, size):
            best_stagnant = 0
        else:
            best_stagnant += 1
        if rank is not None and rank < params.n:
            quality_stagnant = 0
        else:
            quality_stagnant += 1

        if best_stagnant >= params.stag:
            remove = quality_stagnant >= params.stag and size == schedule.sizes[0]
            schedule.switch(remove)
            record.size_switches += 1
            record.sizes_removed += remove
            best_stagnant = quality_stagnant = 0
    record.schedule_exhausted = not schedule
    record.wall_time = time.perf_counter() - record._t0
    return record


def solve(instance: Instance, params: FssParams, kernels=None) -> RunRecord:
    if params.method == "grasp":
        return run_grasp(instance, params, kernels)
    return run_fss(instance, params, kernels)


def relative_error(found: int, known_best: int) -> float:
    """Percentage gap to the known best, rounded to 2 decimals."""
    if known_best <= 0:
        raise ValueError("known_best must be positive")
    return round(100.0 * (found - known_best) / known_best, 2)
