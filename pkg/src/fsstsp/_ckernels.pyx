# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled construction and local-search kernels.

Mirrors ``_pykernels`` exactly; see that module for the reference logic.
"""
import numpy as np

from libc.math cimport floor, sqrt
from libc.stdlib cimport free, malloc
from libc.string cimport memset

NAME = "cython"


cdef struct Dist:
    int n
    const int* M  # NULL -> compute from xy
    const double* xy


cdef inline long long dist(const Dist* D, int a, int b) nogil:
    cdef double dx, dy
    if D.M != NULL:
        return D.M[<Py_ssize_t>a * D.n + b]
    dx = D.xy[2 * a] - D.xy[2 * b]
    dy = D.xy[2 * a + 1] - D.xy[2 * b + 1]
    return <long long>floor(sqrt(dx * dx + dy * dy) + 0.5)


cdef class Context:
    cdef Dist d
    cdef int c
    cdef const int* nbrs
    cdef object _matrix, _xy, _nbrs

    def __init__(self, matrix, coords, neighbors):
        cdef const int[:, ::1] mv
        cdef const double[:, ::1] xv
        cdef const int[:, ::1] nv
        self._xy = np.ascontiguousarray(coords, dtype=np.float64)
        self._nbrs = np.ascontiguousarray(neighbors, dtype=np.int32)
        xv = self._xy
        nv = self._nbrs
        self.d.n = nv.shape[0]
        self.d.xy = &xv[0, 0]
        self.c = nv.shape[1]
        self.nbrs = &nv[0, 0]
        if matrix is None:
            self._matrix = None
            self.d.M = NULL
        else:
            self._matrix = np.ascontiguousarray(matrix, dtype=np.int32)
            mv = self._matrix
            self.d.M = &mv[0, 0]

    @property
    def n(self):
        return self.d.n


def construct(Context ctx, const double[::1] u, const int[:, ::1] fix_adj,
              const unsigned char[::1] interior):
    cdef int n = ctx.d.n, c = ctx.c
    cdef const int* nb = ctx.nbrs
    out = np.empty(n, dtype=np.int32)
    cdef int[::1] order = out
    cdef unsigned char* visited = <unsigned char*>malloc(n)
    cdef int* cand = <int*>malloc(sizeof(int) * (c + 1))
    cdef int cnt = 0, pool = 0, step = 1, m, j, k, cur, nxt, v, w, slot
    cdef long long best, dj
    if visited == NULL or cand == NULL:
        free(visited)
        free(cand)
        raise MemoryError()
    memset(visited, 0, n)
    with nogil:
        for v in range(n):
            if not interior[v]:
                pool += 1
        k = <int>(u[0] * pool)
        if k > pool - 1:
            k = pool - 1
        nxt = -1
        for v in range(n):
            if not interior[v]:
                if k == 0:
                    nxt = v
                    break
                k -= 1
        while True:
            # take nxt and walk its fixed path, if any
            order[cnt] = nxt
            cnt += 1
            visited[nxt] = 1
            slot = 1 if fix_adj[nxt, 1] != -1 else 0
            v = nxt
            w = fix_adj[v, slot]
            while w != -1:
                order[cnt] = w
                cnt += 1
                visited[w] = 1
                v = w
                w = fix_adj[v, slot]
            cur = v
            if cnt >= n:
                break
            m = 0
            for k in range(c):
                j = nb[<Py_ssize_t>cur * c + k]
                if not visited[j] and not interior[j]:
                    cand[m] = j
                    m += 1
            if m > 0:
                k = <int>(u[step] * m)
                if k > m - 1:
                    k = m - 1
                nxt = cand[k]
            else:
                nxt = -1
                best = 0
                for j in range(n):
                    if not visited[j] and not interior[j]:
                        dj = dist(&ctx.d, cur, j)
                        if nxt == -1 or dj < best:
                            nxt = j
                            best = dj
            step += 1
    free(visited)
    free(cand)
    return out


cdef struct State:
    int n
    int c
    const int* nbrs
    int* tour
    int* pos


cdef inline int succ(State* s, int v) nogil:
    cdef int p = s.pos[v] + 1
    if p == s.n:
        p = 0
    return s.tour[p]


cdef inline int pred(State* s, int v) nogil:
    cdef int p = s.pos[v] - 1
    if p < 0:
        p = s.n - 1
    return s.tour[p]


cdef void reverse_path(State* s, int u, int v) nogil:
    cdef int n = s.n
    cdef int i = s.pos[u], j = s.pos[v], length, k, x, y, t
    length = (j - i + n) % n + 1
    if 2 * length > n:
        t = i
        i = (j + 1) % n
        j = (t - 1 + n) % n
        length = n - length
    for k in range(length // 2):
        x = s.tour[i]
        y = s.tour[j]
        s.tour[i] = y
        s.pos[y] = i
        s.tour[j] = x
        s.pos[x] = j
        i += 1
        if i == n:
            i = 0
        j -= 1
        if j < 0:
            j = n - 1


cdef inline void flip(State* s, int a, int b, int c, int d) nogil:
    # drop {a,b},{c,d}; add {a,c},{b,d}
    if succ(s, a) == b:
        reverse_path(s, b, c)
    else:
        reverse_path(s, a, d)


cdef inline bint same(int a, int b, int c, int d) nogil:
    return (a == c and b == d) or (a == d and b == c)


cdef inline bint has(int x, int y, int* added) nogil:
    cdef int k
    for k in range(3):
        if same(x, y, added[2 * k], added[2 * k + 1]):
            return True
    return False


cdef inline void orient(State* s, int x, int y, int* u, int* v) nogil:
    if succ(s, x) == y:
        u[0] = x
        v[0] = y
    else:
        u[0] = y
        v[0] = x


cdef bint apply2(State* s, int t1, int t2, int t3, int t4) nogil:
    cdef int u0, v0, u1, v1, t
    cdef int added[6]
    orient(s, t1, t2, &u0, &v0)
    orient(s, t3, t4, &u1, &v1)
    if s.pos[u1] < s.pos[u0]:
        t = u0; u0 = u1; u1 = t
        t = v0; v0 = v1; v1 = t
    added[0] = t2; added[1] = t3
    added[2] = t4; added[3] = t1
    added[4] = -1; added[5] = -1
    if not (has(u0, u1, added) and has(v0, v1, added)):
        return False
    flip(s, u0, v0, u1, v1)
    return True


cdef bint apply3(State* s, int t1, int t2, int t3, int t4, int t5, int t6) nogil:
    cdef int us[3]
    cdef int vs[3]
    cdef int added[6]
    cdef int i, j, t, a, b1, b2, c1, c2, a0
    orient(s, t1, t2, &us[0], &vs[0])
    orient(s, t3, t4, &us[1], &vs[1])
    orient(s, t5, t6, &us[2], &vs[2])
    for i in range(1, 3):
        j = i
        while j > 0 and s.pos[us[j]] < s.pos[us[j - 1]]:
            t = us[j]; us[j] = us[j - 1]; us[j - 1] = t
            t = vs[j]; vs[j] = vs[j - 1]; vs[j - 1] = t
            j -= 1
    a = us[0]; b1 = vs[0]; b2 = us[1]; c1 = vs[1]; c2 = us[2]; a0 = vs[2]
    added[0] = t2; added[1] = t3
    added[2] = t4; added[3] = t5
    added[4] = t6; added[5] = t1
    if has(a, b2, added) and has(b1, c2, added) and has(c1, a0, added):
        flip(s, a, b1, b2, c1)
        flip(s, b1, c1, c2, a0)
    elif has(a, c1, added) and has(c2, b1, added) and has(b2, a0, added):
        flip(s, a, b1, c2, a0)
        flip(s, a, c2, c1, b2)
        flip(s, c2, b2, b1, a0)
    elif has(a, c1, added) and has(c2, b2, added) and has(b1, a0, added):
        flip(s, a, b1, c2, a0)
        flip(s, a, c2, c1, b2)
    elif has(a, c2, added) and has(c1, b1, added) and has(b2, a0, added):
        flip(s, a, b1, c2, a0)
        flip(s, c1, b2, b1, a0)
    else:
        return False
    return True


cdef long long improve2(State* s, const Dist* D, int a, int* touched, int* nt) nogil:
    cdef int n = s.n, c = s.c, k, dirn, a2, cc, c2
    cdef long long d1, g1, g
    for dirn in range(2):
        a2 = succ(s, a) if dirn == 0 else pred(s, a)
        d1 = dist(D, a, a2)
        for k in range(c):
            cc = s.nbrs[<Py_ssize_t>a * c + k]
            g1 = d1 - dist(D, a, cc)
            if g1 <= 0:
                break
            c2 = succ(s, cc) if dirn == 0 else pred(s, cc)
            if c2 == a or cc == a2:
                continue
            g = g1 + dist(D, cc, c2) - dist(D, a2, c2)
            if g > 0:
                flip(s, a, a2, cc, c2)
                touched[0] = a; touched[1] = a2; touched[2] = cc; touched[3] = c2
                nt[0] = 4
                return g
    return 0


cdef long long improve3(State* s, const Dist* D, int t1, int* touched, int* nt) nogil:
    cdef int c = s.c, k3, k5, i2, i4, i6, t2, t3, t4, t5, t6, s1, q1, s3, q3, s5, q5
    cdef long long d12, g1, bg1, g2, g
    s1 = succ(s, t1)
    q1 = pred(s, t1)
    for i2 in range(2):
        t2 = s1 if i2 == 0 else q1
        d12 = dist(D, t1, t2)
        for k3 in range(c):
            t3 = s.nbrs[<Py_ssize_t>t2 * c + k3]
            g1 = d12 - dist(D, t2, t3)
            if g1 <= 0:
                break
            s3 = succ(s, t3)
            q3 = pred(s, t3)
            if t3 == t1 or s3 == t2 or q3 == t2:
                continue
            for i4 in range(2):
                t4 = s3 if i4 == 0 else q3
                bg1 = g1 + dist(D, t3, t4)
                if t4 != t1 and t4 != s1 and t4 != q1:
                    g = bg1 - dist(D, t4, t1)
                    if g > 0 and apply2(s, t1, t2, t3, t4):
                        touched[0] = t1; touched[1] = t2; touched[2] = t3; touched[3] = t4
                        nt[0] = 4
                        return g
                for k5 in range(c):
                    t5 = s.nbrs[<Py_ssize_t>t4 * c + k5]
                    g2 = bg1 - dist(D, t4, t5)
                    if g2 <= 0:
                        break
                    s5 = succ(s, t5)
                    q5 = pred(s, t5)
                    if s5 == t4 or q5 == t4:
                        continue
                    for i6 in range(2):
                        t6 = s5 if i6 == 0 else q5
                        if same(t5, t6, t1, t2) or same(t5, t6, t3, t4):
                            continue
                        if t6 == t1 or t6 == s1 or t6 == q1:
                            continue
                        g = g2 + dist(D, t5, t6) - dist(D, t6, t1)
                        if g > 0 and apply3(s, t1, t2, t3, t4, t5, t6):
                            touched[0] = t1; touched[1] = t2; touched[2] = t3
                            touched[3] = t4; touched[4] = t5; touched[5] = t6
                            nt[0] = 6
                            return g
    return 0


cdef long long search(Context ctx, int[::1] order, const unsigned char[::1] active, int kind) except? -1:
    cdef int n = ctx.d.n
    cdef State s
    cdef int* pos = <int*>malloc(sizeof(int) * n)
    cdef int* queue = <int*>malloc(sizeof(int) * n)
    cdef unsigned char* frozen = <unsigned char*>malloc(n)
    cdef unsigned char* queued = <unsigned char*>malloc(n)
    cdef int touched[6]
    cdef int nt = 0, head = 0, count = 0, i, a, v
    cdef long long total = 0, g
    cdef bint improved = False
    if pos == NULL or queue == NULL or frozen == NULL or queued == NULL:
        free(pos); free(queue); free(frozen); free(queued)
        raise MemoryError()
    s.n = n
    s.c = ctx.c
    s.nbrs = ctx.nbrs
    s.tour = &order[0]
    s.pos = pos
    with nogil:
        for i in range(n):
            pos[order[i]] = i
        for i in range(n):
            frozen[i] = 0 if active[i] else 1
            queued[i] = 0
        for i in range(n):
            v = order[i]
            if not frozen[v]:
                queued[v] = 1
                queue[(head + count) % n] = v
                count += 1
        while True:
            while count > 0:
                a = queue[head]
                head = (head + 1) % n
                count -= 1
                queued[a] = 0
                if kind == 2:
                    g = improve2(&s, &ctx.d, a, touched, &nt)
                else:
                    g = improve3(&s, &ctx.d, a, touched, &nt)
                if g:
                    total += g
                    improved = True
                    for i in range(nt):
                        v = touched[i]
                        frozen[v] = 0
                        if not queued[v]:
                            queued[v] = 1
                            queue[(head + count) % n] = v
                            count += 1
            if not improved:
                break
            improved = False
            for i in range(n):
                v = order[i]
                if not frozen[v] and not queued[v]:
                    queued[v] = 1
                    queue[(head + count) % n] = v
                    count += 1
    free(pos); free(queue); free(frozen); free(queued)
    return total


def two_opt(Context ctx, int[::1] order, const unsigned char[::1] active):
    return search(ctx, order, active, 2)


def three_opt(Context ctx, int[::1] order, const unsigned char[::1] active):
    return search(ctx, order, active, 3)
