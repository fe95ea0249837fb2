"""Pure-Python kernels: construction, 2-opt and 3-opt.

Reference implementation and fallback for ``_ckernels``. Both modules must
produce identical tours for identical inputs; keep them in lock step.
"""
from __future__ import annotations

from collections import deque

import numpy as np

from .instance import euc_2d

NAME = "python"


class _LazyRows:
    def __init__(self, coords: np.ndarray):
        self.x = coords[:, 0]
        self.y = coords[:, 1]
        self.cache: dict[int, list[int]] = {}

    def __getitem__(self, a: int) -> list[int]:
        row = self.cache.get(a)
        if row is None:
            if len(self.cache) > 4096:
                self.cache.clear()
            row = euc_2d(self.x[a], self.y[a], self.x, self.y).astype(np.int64).tolist()
            self.cache[a] = row
        return row


class Context:
    def __init__(self, matrix, coords, neighbors):
        self.n = int(neighbors.shape[0])
        self.M = matrix.tolist() if matrix is not None else _LazyRows(coords)
        self.nbrs = neighbors.tolist()


def construct(ctx: Context, u: np.ndarray, fix_adj: np.ndarray, interior: np.ndarray) -> np.ndarray:
    n, M, nbrs = ctx.n, ctx.M, ctx.nbrs
    u = u.tolist()
    adj0 = fix_adj[:, 0].tolist()
    adj1 = fix_adj[:, 1].tolist()
    inner = interior.tolist()
    visited = [False] * n
    order: list[int] = []

    def take(v: int) -> int:
        order.append(v)
        visited[v] = True
        slot = adj1 if adj1[v] != -1 else adj0
        w = slot[v]
        while w != -1:
            order.append(w)
            visited[w] = True
            v = w
            w = slot[v]
        return v

    pool = [v for v in range(n) if not inner[v]]
    start = pool[min(int(u[0] * len(pool)), len(pool) - 1)]
    cur = take(start)
    step = 1
    while len(order) < n:
        cand = [j for j in nbrs[cur] if not visited[j] and not inner[j]]
        if cand:
            nxt = cand[min(int(u[step] * len(cand)), len(cand) - 1)]
        else:
            row = M[cur]
            nxt = -1
            best = 0
            for j in range(n):
                if not visited[j] and not inner[j] and (nxt == -1 or row[j] < best):
                    nxt, best = j, row[j]
        step += 1
        cur = take(nxt)
    return np.array(order, dtype=np.int32)


class _State:
    def __init__(self, ctx: Context, order: np.ndarray):
        self.n = ctx.n
        self.M = ctx.M
        self.nbrs = ctx.nbrs
        self.tour = order.tolist()
        self.pos = [0] * self.n
        for i, v in enumerate(self.tour):
            self.pos[v] = i

    def succ(self, v: int) -> int:
        return self.tour[(self.pos[v] + 1) % self.n]

    def pred(self, v: int) -> int:
        return self.tour[(self.pos[v] - 1) % self.n]

    def reverse_path(self, u: int, v: int) -> None:
        n, tour, pos = self.n, self.tour, self.pos
        i, j = pos[u], pos[v]
        length = (j - i) % n + 1
        if 2 * length > n:
            i, j = (j + 1) % n, (i - 1) % n
            length = n - length
        for _ in range(length // 2):
            x, y = tour[i], tour[j]
            tour[i] = y
            pos[y] = i
            tour[j] = x
            pos[x] = j
            i = (i + 1) % n
            j = (j - 1) % n

    def flip(self, a: int, b: int, c: int, d: int) -> None:
        # drop {a,b},{c,d}; add {a,c},{b,d}
        if self.succ(a) == b:
            self.reverse_path(b, c)
        else:
            self.reverse_path(a, d)

    def oriented(self, x: int, y: int) -> tuple[int, int]:
        return (x, y) if self.succ(x) == y else (y, x)


def _same(a: int, b: int, c: int, d: int) -> bool:
    return (a == c and b == d) or (a == d and b == c)


def _has(x: int, y: int, added) -> bool:
    for p, q in added:
        if (p == x and q == y) or (p == y and q == x):
            return True
    return False


def _apply2(st: _State, t1: int, t2: int, t3: int, t4: int) -> bool:
    e = sorted((st.oriented(t1, t2), st.oriented(t3, t4)), key=lambda uv: st.pos[uv[0]])
    (u0, v0), (u1, v1) = e
    added = ((t2, t3), (t4, t1))
    if not (_has(u0, u1, added) and _has(v0, v1, added)):
        return False
    st.flip(u0, v0, u1, v1)
    return True


def _apply3(st: _State, t1: int, t2: int, t3: int, t4: int, t5: int, t6: int) -> bool:
    e = sorted((st.oriented(t1, t2), st.oriented(t3, t4), st.oriented(t5, t6)),
               key=lambda uv: st.pos[uv[0]])
    (a, b1), (b2, c1), (c2, a0) = e
    added = ((t2, t3), (t4, t5), (t6, t1))
    if _has(a, b2, added) and _has(b1, c2, added) and _has(c1, a0, added):
        st.flip(a, b1, b2, c1)
        st.flip(b1, c1, c2, a0)
    elif _has(a, c1, added) and _has(c2, b1, added) and _has(b2, a0, added):
        st.flip(a, b1, c2, a0)
        st.flip(a, c2, c1, b2)
        st.flip(c2, b2, b1, a0)
    elif _has(a, c1, added) and _has(c2, b2, added) and _has(b1, a0, added):
        st.flip(a, b1, c2, a0)
        st.flip(a, c2, c1, b2)
    elif _has(a, c2, added) and _has(c1, b1, added) and _has(b2, a0, added):
        st.flip(a, b1, c2, a0)
        st.flip(c1, b2, b1, a0)
    else:
        return False
    return True


def _improve2(st: _State, a: int):
    n, tour, pos, M = st.n, st.tour, st.pos, st.M
    for step in (1, -1):
        a2 = tour[(pos[a] + step) % n]
        d1 = M[a][a2]
        row_a = M[a]
        for c in st.nbrs[a]:
            g1 = d1 - row_a[c]
            if g1 <= 0:
                break
            c2 = tour[(pos[c] + step) % n]
            if c2 == a or c == a2:
                continue
            g = g1 + M[c][c2] - M[a2][c2]
            if g > 0:
                st.flip(a, a2, c, c2)
                return g, (a, a2, c, c2)
    return 0, ()


def _improve3(st: _State, t1: int):
    n, tour, pos, M, nbrs = st.n, st.tour, st.pos, st.M, st.nbrs
    s1 = tour[(pos[t1] + 1) % n]
    q1 = tour[(pos[t1] - 1) % n]
    for t2 in (s1, q1):
        d12 = M[t1][t2]
        for t3 in nbrs[t2]:
            g1 = d12 - M[t2][t3]
            if g1 <= 0:
                break
            p3 = pos[t3]
            s3 = tour[(p3 + 1) % n]
            q3 = tour[(p3 - 1) % n]
            if t3 == t1 or s3 == t2 or q3 == t2:
                continue
            for t4 in (s3, q3):
                big_g1 = g1 + M[t3][t4]
                if t4 != t1 and t4 != s1 and t4 != q1:
                    g = big_g1 - M[t4][t1]
                    if g > 0 and _apply2(st, t1, t2, t3, t4):
                        return g, (t1, t2, t3, t4)
                row4 = M[t4]
                for t5 in nbrs[t4]:
                    g2 = big_g1 - row4[t5]
                    if g2 <= 0:
                        break
                    p5 = pos[t5]
                    s5 = tour[(p5 + 1) % n]
                    q5 = tour[(p5 - 1) % n]
                    if s5 == t4 or q5 == t4:
                        continue
                    for t6 in (s5, q5):
                        if _same(t5, t6, t1, t2) or _same(t5, t6, t3, t4):
                            continue
                        if t6 == t1 or t6 == s1 or t6 == q1:
                            continue
                        g = g2 + M[t5][t6] - M[t6][t1]
                        if g > 0 and _apply3(st, t1, t2, t3, t4, t5, t6):
                            return g, (t1, t2, t3, t4, t5, t6)
    return 0, ()


def _search(ctx: Context, order: np.ndarray, active: np.ndarray, improve) -> int:
    st = _State(ctx, order)
    frozen = [not a for a in active.tolist()]
    queued = [not f for f in frozen]
    queue = deque(v for v in st.tour if not frozen[v])
    total = 0
    improved = False
    while True:
        while queue:
            a = queue.popleft()
            queued[a] = False
            g, touched = improve(st, a)
            if g:
                total += g
                improved = True
                for v in touched:
                    frozen[v] = False
                    if not queued[v]:
                        queued[v] = True
                        queue.append(v)
        if not improved:
            break
        # confirm local optimality with a full sweep over every unfrozen anchor
        improved = False
        for v in st.tour:
            if not frozen[v] and not queued[v]:
                queued[v] = True
                queue.append(v)
    order[:] = st.tour
    return total


def two_opt(ctx: Context, order: np.ndarray, active: np.ndarray) -> int:
    return _search(ctx, order, active, _improve2)


def three_opt(ctx: Context, order: np.ndarray, active: np.ndarray) -> int:
    return _search(ctx, order, active, _improve3)
