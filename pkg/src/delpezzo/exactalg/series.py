"""Truncated univariate power series on raw field values and the graph solver.

A series of order N is the list of its coefficients c_0..c_N.
"""

from __future__ import annotations

from .fields import Field
from .poly import MultiPoly


class SingularGermError(ValueError):
    """The germ has no v-linear term, so it is not a graph v = psi(u)."""


def s_add(F: Field, a, b):
    return [F.add(x, y) for x, y in zip(a, b)]


def s_sub(F: Field, a, b):
    return [F.sub(x, y) for x, y in zip(a, b)]


def s_scale(F: Field, a, c):
    return [F.mul(x, c) for x in a]


def s_mul(F: Field, a, b):
    n = len(a)
    out = [F.zero] * n
    add, mul, zero = F.add, F.mul, F.zero
    for i, x in enumerate(a):
        if x == zero:
            continue
        for j in range(n - i):
            y = b[j]
            if y != zero:
                out[i + j] = add(out[i + j], mul(x, y))
    return out


def s_inv(F: Field, a):
    """Inverse of a series with unit constant term."""
    n = len(a)
    a0inv = F.inv(a[0])
    out = [F.zero] * n
    out[0] = a0inv
    for k in range(1, n):
        acc = F.zero
        for j in range(1, k + 1):
            if a[j] != F.zero:
                acc = F.add(acc, F.mul(a[j], out[k - j]))
        out[k] = F.neg(F.mul(acc, a0inv))
    return out


def s_compose_graph(F: Field, f: MultiPoly, psi, order: int):
    """f(u, psi(u)) mod u^(order+1) for f in two variables (u, v)."""
    n = order + 1
    u = [F.zero] * n
    if n > 1:
        u[1] = F.one
    v = list(psi[:n]) + [F.zero] * max(0, n - len(psi))
    upow = [[F.one] + [F.zero] * (n - 1)]
    vpow = [[F.one] + [F.zero] * (n - 1)]
    total = [F.zero] * n
    for (a, b), c in f.terms.items():
        while len(upow) <= a:
            upow.append(s_mul(F, upow[-1], u))
        while len(vpow) <= b:
            vpow.append(s_mul(F, vpow[-1], v))
        term = s_scale(F, s_mul(F, upow[a], vpow[b]), c)
        total = s_add(F, total, term)
    return total


def hensel_graph(f: MultiPoly, order: int):
    """Solve f(u, psi(u)) = 0 mod u^(order+1) with psi(0) = 0.

    ``f`` is a polynomial in two variables (u, v).  Returns the coefficient
    list [psi_0, ..., psi_order] (psi_0 = 0).  The v-linear coefficient must
    be nonzero; no derivatives are taken, so this is safe in every
    characteristic.
    """
    if len(f.names) != 2:
        raise ValueError("hensel_graph expects a polynomial in two variables")
    F = f.field
    if f.terms.get((0, 0), F.zero) != F.zero:
        raise SingularGermError("germ does not pass through the origin")
    c = f.terms.get((0, 1), F.zero)
    if c == F.zero:
        raise SingularGermError("coefficient of v vanishes: not a smooth graph over u")
    cinv = F.inv(c)
    psi = [F.zero] * (order + 1)
    for k in range(1, order + 1):
        r = s_compose_graph(F, f, psi, k)[k]
        psi[k] = F.neg(F.mul(r, cinv))
    return psi
