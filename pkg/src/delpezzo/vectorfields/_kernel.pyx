# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel for stabilizer point counts.

Same contract as ``pointcount._count_numpy``: enumerate the projectivized
candidate subspace, keep invertible matrices that fix every tower jet.
"""

cdef enum:
    MAX_Q = 1024


ctypedef struct Tables:
    const int* A
    const int* M
    const int* N
    const int* I
    int q


cdef inline int fadd(Tables* T, int a, int b) noexcept nogil:
    return T.A[a * T.q + b]


cdef inline int fmul(Tables* T, int a, int b) noexcept nogil:
    return T.M[a * T.q + b]


cdef void s_mul(Tables* T, int* a, int* b, int* out, int h) noexcept nogil:
    cdef int k, i, acc
    for k in range(h):
        acc = 0
        for i in range(k + 1):
            if a[i] and b[k - i]:
                acc = fadd(T, acc, fmul(T, a[i], b[k - i]))
        out[k] = acc


cdef bint tower_ok(Tables* T, int* g, const int[:, ::1] towers, int t) noexcept nogil:
    cdef int c = towers[t, 0], u = towers[t, 1], v = towers[t, 2], h = towers[t, 3]
    cdef int P[3]
    cdef int psi[9]
    cdef int gamma[3][8]
    cdef int Y[3][8]
    cdef int Wu[8]
    cdef int Wv[8]
    cdef int inv[8]
    cdef int U[8]
    cdef int V[8]
    cdef int acc[8]
    cdef int tmp[8]
    cdef int i, j, k, s
    for i in range(3):
        P[i] = towers[t, 4 + i]
    psi[0] = 0
    for k in range(1, h):
        psi[k] = towers[t, 6 + k]
    for i in range(3):
        for k in range(h):
            gamma[i][k] = 0
    gamma[c][0] = 1
    gamma[u][0] = P[u]
    gamma[u][1] = 1
    gamma[v][0] = P[v]
    for k in range(1, h):
        gamma[v][k] = psi[k]
    for i in range(3):
        for k in range(h):
            s = 0
            for j in range(3):
                if gamma[j][k]:
                    s = fadd(T, s, fmul(T, g[3 * i + j], gamma[j][k]))
            Y[i][k] = s
    for k in range(h):
        Wu[k] = fadd(T, Y[u][k], T.N[fmul(T, Y[c][k], P[u])])
        Wv[k] = fadd(T, Y[v][k], T.N[fmul(T, Y[c][k], P[v])])
    inv[0] = T.I[Y[c][0]]
    for k in range(1, h):
        s = 0
        for j in range(1, k + 1):
            s = fadd(T, s, fmul(T, Y[c][j], inv[k - j]))
        inv[k] = T.N[fmul(T, s, inv[0])]
    s_mul(T, Wu, inv, U, h)
    s_mul(T, Wv, inv, V, h)
    for k in range(h):
        acc[k] = 0
    acc[0] = psi[h - 1]
    for j in range(h - 2, 0, -1):
        s_mul(T, U, acc, tmp, h)
        for k in range(h):
            acc[k] = tmp[k]
        acc[0] = fadd(T, acc[0], psi[j])
    s_mul(T, U, acc, tmp, h)
    for k in range(h):
        if tmp[k] != V[k]:
            return False
    return True


def count_subspace(const int[:, ::1] basis, const int[:, ::1] A, const int[:, ::1] M,
                   const int[::1] N, const int[::1] I, const int[:, ::1] towers, int q):
    cdef int r = basis.shape[0]
    cdef int ntow = towers.shape[0]
    cdef long long total = 0
    cdef long long combos, idx
    cdef int lead, free, i, e, t, det, coef
    cdef int step[MAX_Q]
    if q > MAX_Q:
        raise ValueError("field too large for the compiled kernel")
    cdef int g[9]
    cdef int digits[9]
    cdef bint ok
    cdef Tables T
    T.A = &A[0, 0]
    T.M = &M[0, 0]
    T.N = &N[0]
    T.I = &I[0]
    T.q = q
    for i in range(q - 1):
        step[i] = fadd(&T, i + 1, T.N[i])
    step[q - 1] = T.N[q - 1]
    with nogil:
        for lead in range(r):
            free = r - 1 - lead
            combos = 1
            for i in range(free):
                combos *= q
            for i in range(9):
                digits[i] = 0
            for e in range(9):
                g[e] = basis[lead, e]
            for idx in range(combos):
                # odometer: moving digit i from code c to c + 1 adds
                # (c + 1 - c) times its basis row; wrapping adds -(q - 1)
                if idx:
                    i = 0
                    while True:
                        coef = step[digits[i]]
                        for e in range(9):
                            if basis[lead + 1 + i, e]:
                                g[e] = fadd(&T, g[e], fmul(&T, coef, basis[lead + 1 + i, e]))
                        digits[i] += 1
                        if digits[i] < q:
                            break
                        digits[i] = 0
                        i += 1
                det = fmul(&T, g[0], fadd(&T, fmul(&T, g[4], g[8]), T.N[fmul(&T, g[5], g[7])]))
                det = fadd(&T, det, T.N[fmul(&T, g[1], fadd(&T, fmul(&T, g[3], g[8]), T.N[fmul(&T, g[5], g[6])]))])
                det = fadd(&T, det, fmul(&T, g[2], fadd(&T, fmul(&T, g[3], g[7]), T.N[fmul(&T, g[4], g[6])])))
                if det == 0:
                    continue
                ok = True
                for t in range(ntow):
                    if not tower_ok(&T, g, towers, t):
                        ok = False
                        break
                if ok:
                    total += 1
    return total
