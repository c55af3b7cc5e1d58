"""Counting F_q-points of the stabilizer of a configuration inside PGL_3.

The search is cut down linearly first: g must send each base point P into
span(P), and for towers of height >= 2 the tangent direction T into
span(P, T).  Both are linear in the matrix entries, so the candidates form
a subspace L of 3x3 matrices; its projectivization is enumerated with the
first nonzero coordinate set to 1, keeping invertible matrices that also
fix the higher-order jets.

Two interchangeable kernels do the enumeration: a compiled one
(``_kernel``) and a numpy one here.  ``DELPEZZO_PURE_PYTHON=1`` forces the
numpy kernel.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..cluster import BlowupConfig
from ..exactalg import embedding, fq_make, nullspace
from ..exactalg.fields import ExtensionField

try:  # pragma: no cover - depends on the build
    from ._kernel import count_subspace as _compiled_count
except ImportError:  # pragma: no cover
    _compiled_count = None

MAX_TOWER_HEIGHT = 8


def compiled_available() -> bool:
    return _compiled_count is not None


def default_backend() -> str:
    if os.environ.get("DELPEZZO_PURE_PYTHON") == "1" or _compiled_count is None:
        return "numpy"
    return "compiled"


def pgl3_order(q: int) -> int:
    return (q**3 - 1) * (q**3 - q) * (q**3 - q**2) // (q - 1)


def split_prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, k
    raise ValueError(f"{q} is not a prime power")


@dataclass
class FqTables:
    q: int
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray

    @classmethod
    def build(cls, F) -> "FqTables":
        q = F.order
        els = list(F.elements())
        add = np.array([[F.add(a, b) for b in els] for a in els], dtype=np.int32)
        mul = np.array([[F.mul(a, b) for b in els] for a in els], dtype=np.int32)
        neg = np.array([F.neg(a) for a in els], dtype=np.int32)
        inv = np.array([0] + [F.inv(a) for a in els[1:]], dtype=np.int32)
        return cls(q, add, mul, neg, inv)


@dataclass
class CountProblem:
    """A configuration translated into codes of F_q."""

    q: int
    tables: FqTables
    basis: np.ndarray  # (r, 9) codes of a basis of the candidate subspace
    towers: np.ndarray  # (T, 16): chart, u, v, h, P0, P1, P2, psi_1..psi_8, pad


def _tangent_rows(F, t, emb):
    """The tangent-line condition for a tower of height >= 2 (one row)."""
    jet = t.jet
    P = [emb[x.v] for x in t.base.coords]
    T = [F.zero] * 3
    T[jet.u_index] = F.one
    T[jet.v_index] = emb[jet.psi[1]]
    line = [
        F.sub(F.mul(P[1], T[2]), F.mul(P[2], T[1])),
        F.sub(F.mul(P[2], T[0]), F.mul(P[0], T[2])),
        F.sub(F.mul(P[0], T[1]), F.mul(P[1], T[0])),
    ]
    row = [F.zero] * 9
    for i in range(3):
        for l in range(3):
            row[3 * i + l] = F.add(row[3 * i + l], F.mul(line[i], T[l]))
    return [row]


def _base_rows(F, t, emb):
    P = [emb[x.v] for x in t.base.coords]
    rows = []
    for i in range(3):
        for j in range(i + 1, 3):
            row = [F.zero] * 9
            for l in range(3):
                # (MP)_j P_i - (MP)_i P_j
                row[3 * j + l] = F.add(row[3 * j + l], F.mul(P[l], P[i]))
                row[3 * i + l] = F.sub(row[3 * i + l], F.mul(P[l], P[j]))
            rows.append(row)
    return rows


def build_problem(cfg: BlowupConfig, q: int, tangent: bool = True) -> CountProblem:
    p, k = split_prime_power(q)
    if cfg.field.char != p:
        raise ValueError(f"q = {q} is not a power of the characteristic {cfg.field.char}")
    if k % cfg.field.degree:
        raise ValueError(f"{cfg.field} is not contained in F_{q}")
    F = fq_make(p, k)
    emb = embedding(cfg.field, F)
    rows = []
    for t in cfg.towers:
        rows.extend(_base_rows(F, t, emb))
        if tangent and t.height >= 2:
            rows.extend(_tangent_rows(F, t, emb))
    basis = nullspace(rows, 9, F) if rows else [[F.one if i == j else F.zero for i in range(9)] for j in range(9)]
    towers = []
    for t in cfg.towers:
        need = 3 if tangent else 2
        if t.height < need:
            continue
        if t.height > MAX_TOWER_HEIGHT:
            raise ValueError("tower too high for the counting kernel")
        jet = t.jet
        row = [t.chart, jet.u_index, jet.v_index, t.height] + [emb[x.v] for x in t.base.coords]
        psi = [emb[c] for c in jet.psi[1 : t.height]]
        row += psi + [0] * (9 - len(psi))
        towers.append(row)
    tw = np.array(towers, dtype=np.int32).reshape(-1, 16)
    return CountProblem(q, FqTables.build(F), np.array(basis, dtype=np.int32).reshape(-1, 9), tw)


# numpy kernel -----------------------------------------------------------------------------


class _Ops:
    def __init__(self, t: FqTables):
        self.A, self.M, self.N, self.I = t.add, t.mul, t.neg, t.inv

    def add(self, a, b):
        return self.A[a, b]

    def sub(self, a, b):
        return self.A[a, self.N[b]]

    def mul(self, a, b):
        return self.M[a, b]


def _series_mul(ops, a, b, h):
    out = []
    for k in range(h):
        acc = ops.mul(a[0], b[k])
        for i in range(1, k + 1):
            acc = ops.add(acc, ops.mul(a[i], b[k - i]))
        out.append(acc)
    return out


def _tower_mask(ops, g, row, n):
    c, u, v, h = (int(x) for x in row[:4])
    P = [int(x) for x in row[4:7]]
    psi = [0] + [int(x) for x in row[7 : 7 + h - 1]]
    zero = np.zeros(n, dtype=np.int32)
    one = np.ones(n, dtype=np.int32)
    gamma = [None, None, None]
    gamma[c] = [1] + [0] * (h - 1)
    gamma[u] = [P[u], 1] + [0] * (h - 2)
    gamma[v] = [P[v]] + psi[1:h]
    Y = []
    for i in range(3):
        s = []
        for kk in range(h):
            acc = zero
            for j in range(3):
                coef = gamma[j][kk]
                if coef:
                    acc = ops.add(acc, ops.mul(g[3 * i + j], coef))
            s.append(acc)
        Y.append(s)
    Wu = [ops.sub(Y[u][kk], ops.mul(Y[c][kk], P[u])) for kk in range(h)]
    Wv = [ops.sub(Y[v][kk], ops.mul(Y[c][kk], P[v])) for kk in range(h)]
    # inverse of Y_c as a series
    inv = [ops.I[Y[c][0]]]
    for kk in range(1, h):
        acc = zero
        for j in range(1, kk + 1):
            acc = ops.add(acc, ops.mul(Y[c][j], inv[kk - j]))
        inv.append(ops.N[ops.mul(acc, inv[0])])
    U = _series_mul(ops, Wu, inv, h)
    V = _series_mul(ops, Wv, inv, h)
    # psi(U) by Horner
    acc = [np.full(n, psi[h - 1], dtype=np.int32)] + [zero] * (h - 1)
    for j in range(h - 2, 0, -1):
        acc = _series_mul(ops, U, acc, h)
        acc[0] = ops.add(acc[0], psi[j])
    comp = _series_mul(ops, U, acc, h)
    ok = one.astype(bool)
    for kk in range(h):
        ok &= V[kk] == comp[kk]
    return ok


def _count_numpy(prob: CountProblem, chunk: int = 1 << 18) -> int:
    ops = _Ops(prob.tables)
    q = prob.q
    B = prob.basis
    r = B.shape[0]
    total = 0
    for lead in range(r):
        free = r - 1 - lead
        combos = q**free
        for start in range(0, combos, chunk):
            idx = np.arange(start, min(combos, start + chunk), dtype=np.int64)
            n = idx.shape[0]
            g = [np.full(n, B[lead, e], dtype=np.int32) for e in range(9)]
            rest = idx
            for i in range(free):
                coef = (rest % q).astype(np.int32)
                rest = rest // q
                brow = B[lead + 1 + i]
                for e in range(9):
                    if brow[e]:
                        g[e] = ops.add(g[e], ops.mul(coef, brow[e]))
            a, b, c, d, e_, f, gg, hh, ii = g
            det = ops.sub(ops.mul(a, ops.sub(ops.mul(e_, ii), ops.mul(f, hh))), ops.mul(b, ops.sub(ops.mul(d, ii), ops.mul(f, gg))))
            det = ops.add(det, ops.mul(c, ops.sub(ops.mul(d, hh), ops.mul(e_, gg))))
            mask = det != 0
            if not mask.any():
                continue
            g = [x[mask] for x in g]
            m = int(mask.sum())
            ok = np.ones(m, dtype=bool)
            for row in prob.towers:
                if not ok.any():
                    break
                ok &= _tower_mask(ops, g, row, m)
            total += int(ok.sum())
    return total


def count_problem(prob: CountProblem, backend: str | None = None) -> int:
    backend = backend or default_backend()
    if backend == "compiled":
        if _compiled_count is None:
            raise RuntimeError("compiled kernel is not available")
        t = prob.tables
        return int(_compiled_count(prob.basis, t.add, t.mul, t.neg, t.inv, prob.towers, prob.q))
    if backend == "numpy":
        return _count_numpy(prob)
    raise ValueError(f"unknown backend {backend!r}")


def stabilizer_point_count(cfg: BlowupConfig, q: int, backend: str | None = None, tangent: bool = True) -> int:
    """|{g in PGL_3(F_q) : g fixes cfg}|."""
    if not cfg.towers:
        split_prime_power(q)
        return pgl3_order(q)
    return count_problem(build_problem(cfg, q, tangent), backend)


def brute_force_count(cfg: BlowupConfig, q: int) -> int:
    """Enumerate all of PGL_3(F_q) and test each element directly (tiny q only)."""
    import itertools

    from ..plane import PglElem
    from .conditions import fixes_config

    p, k = split_prime_power(q)
    F = fq_make(p, k)
    els = [F.elem(x) for x in F.elements()]
    count = 0
    for entries in itertools.product(els, repeat=9):
        first = next((x for x in entries if not x.is_zero()), None)
        if first is None or first.v != F.one:
            continue
        rows = [entries[0:3], entries[3:6], entries[6:9]]
        try:
            g = PglElem(rows, normalize=False)
        except ValueError:
            continue
        if not cfg.towers or fixes_config(g, cfg):
            count += 1
    return count


def default_qs(cfg: BlowupConfig) -> tuple[int, int]:
    """Two field sizes for the slope fit: (p^2, p^3) when p^3 <= 27, else (p, p^2).

    Configurations defined over F_4 use (4, 16), since F_8 does not contain F_4.
    """
    p = cfg.field.char
    if p == 0:
        raise ValueError("point counting needs positive characteristic")
    k = cfg.field.degree
    if isinstance(cfg.field, ExtensionField) and k > 1:
        return (p**k, p ** (2 * k))
    if p**3 <= 27:
        return (p**2, p**3)
    return (p, p**2)
