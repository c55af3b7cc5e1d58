"""Polynomial conditions for a 3x3 matrix to fix a blow-up configuration.

Everything here is division-free, so the same code runs over a field, over
dual numbers and over the parameter rings of stabilizer families.
"""

from __future__ import annotations

from typing import Callable, Sequence

from ..cluster import BlowupConfig, Tower
from ..exactalg import FieldElem, RingElem, dual_extend, embedding, rank
from ..plane import PglElem


def _lift_for(sample, cfg: BlowupConfig) -> Callable:
    """Map raw values of the configuration field into the ring of ``sample``."""
    if isinstance(sample, RingElem):
        ring = sample.ring
        if ring.field != cfg.field:
            raise ValueError(f"ring over {ring.field} does not contain {cfg.field}")
        return ring.const
    if isinstance(sample, FieldElem):
        F = sample.field
        if F == cfg.field:
            return F.elem
        table = embedding(cfg.field, F)
        return lambda raw: F.elem(table[raw])
    raise TypeError(f"unsupported matrix entry {sample!r}")


def _matrix(g) -> list[list]:
    if isinstance(g, PglElem):
        return [list(r) for r in g.m]
    return [list(r) for r in g]


def _s_mul(a, b, zero):
    n = len(a)
    out = [zero] * n
    for i in range(n):
        if a[i] == zero:
            continue
        for j in range(n - i):
            out[i + j] = out[i + j] + a[i] * b[j]
    return out


def base_point_conditions(g, P: Sequence) -> list:
    """gP proportional to P, written as the 2x2 minors of (gP, P)."""
    gP = [g[i][0] * P[0] + g[i][1] * P[1] + g[i][2] * P[2] for i in range(3)]
    return [gP[j] * P[i] - gP[i] * P[j] for i in range(3) for j in range(i + 1, 3)]


def tower_conditions(g, tower: Tower, lift: Callable, zero, one) -> list:
    """Coefficients of V - psi(U), cleared of the denominator Y_c^h, mod t^h.

    The branch is gamma(t) = (P_u + t, P_v + psi(t)) in the chart of P; its
    image under g has affine coordinates P + (W_u, W_v) / Y_c.  The image
    jet agrees with the original one to order h - 1 iff
    W_v Y_c^(h-1) - sum_j psi_j W_u^j Y_c^(h-j) = 0 mod t^h.
    """
    h = tower.height
    jet = tower.jet
    c, u, v = tower.chart, jet.u_index, jet.v_index
    P = [lift(x.v) for x in tower.base.coords]
    psi = [lift(x) for x in jet.psi[:h]] + [zero] * max(0, h - len(jet.psi))
    gamma = [None, None, None]
    gamma[c] = [one] + [zero] * (h - 1)
    gamma[u] = [P[u], one] + [zero] * (h - 2)
    gamma[v] = [P[v]] + psi[1:h]
    Y = []
    for i in range(3):
        row = [zero] * h
        for j in range(3):
            gij = g[i][j]
            if gij == zero:
                continue
            row = [r + gij * x for r, x in zip(row, gamma[j])]
        Y.append(row)
    Wu = [a - P[u] * b for a, b in zip(Y[u], Y[c])]
    Wv = [a - P[v] * b for a, b in zip(Y[v], Y[c])]
    # powers of Y_c and W_u
    yc_pow = [[one] + [zero] * (h - 1)]
    for _ in range(h):
        yc_pow.append(_s_mul(yc_pow[-1], Y[c], zero))
    wu_pow = [[one] + [zero] * (h - 1)]
    for _ in range(h - 1):
        wu_pow.append(_s_mul(wu_pow[-1], Wu, zero))
    H = _s_mul(Wv, yc_pow[h - 1], zero)
    for j in range(1, h):
        if psi[j] == zero:
            continue
        term = _s_mul(wu_pow[j], yc_pow[h - j], zero)
        H = [a - psi[j] * b for a, b in zip(H, term)]
    return H


def fixing_conditions(g, cfg: BlowupConfig, lift: Callable | None = None) -> list:
    """All ring elements that must vanish for g to fix every tower."""
    g = _matrix(g)
    sample = g[0][0]
    if lift is None:
        lift = _lift_for(sample, cfg)
    zero = sample - sample
    one = lift(cfg.field.one)
    out = []
    for t in cfg.towers:
        P = [lift(x.v) for x in t.base.coords]
        out.extend(base_point_conditions(g, P))
        if t.height >= 2:
            out.extend(tower_conditions(g, t, lift, zero, one))
    return out


def fixes_config(g, cfg: BlowupConfig, lift: Callable | None = None) -> bool:
    return all(c.is_zero() for c in fixing_conditions(g, cfg, lift))


def tangent_condition_matrix(cfg: BlowupConfig) -> list[list]:
    """Linear conditions on M (9 entries, row-major) for I + eps M to fix cfg."""
    F = cfg.field
    R = dual_extend(F)
    eps = R.var("eps")
    columns = []
    for k in range(9):
        g = [[R.const(F.one if i == j else F.zero) for j in range(3)] for i in range(3)]
        g[k // 3][k % 3] = g[k // 3][k % 3] + eps
        conds = fixing_conditions(g, cfg, R.const)
        columns.append([c.coeff((1,)).v for c in conds])
        assert all(c.coeff((0,)).is_zero() for c in conds), "identity must fix the configuration"
    nrows = len(columns[0]) if columns else 0
    return [[columns[k][r] for k in range(9)] for r in range(nrows)]


def h0_vector_fields(cfg: BlowupConfig) -> int:
    """dim H^0(X, T_X): the tangent space of the stabilizer, modulo scalars."""
    rows = tangent_condition_matrix(cfg)
    return 8 - rank(rows, 9, cfg.field)
