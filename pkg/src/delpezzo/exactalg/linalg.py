"""Exact Gaussian elimination on raw field values."""

from __future__ import annotations

from .fields import Field, PrimeField


def _echelon_mod_p(rows, ncols, p):
    basis: list[list[int]] = []
    pivots: list[int] = []
    for row in rows:
        r = [x % p for x in row]
        for piv, b in zip(pivots, basis):
            c = r[piv]
            if c:
                r = [(x - c * y) % p for x, y in zip(r, b)]
        for j in range(ncols):
            if r[j]:
                inv = pow(r[j], -1, p)
                r = [(x * inv) % p for x in r]
                # keep the basis fully reduced so later rows need one pass
                for i, b in enumerate(basis):
                    c = b[j]
                    if c:
                        basis[i] = [(x - c * y) % p for x, y in zip(b, r)]
                basis.append(r)
                pivots.append(j)
                break
    return basis, pivots


def _echelon_generic(rows, ncols, F: Field):
    zero = F.zero
    basis: list[list] = []
    pivots: list[int] = []
    sub, mul = F.sub, F.mul
    for row in rows:
        r = list(row)
        for piv, b in zip(pivots, basis):
            c = r[piv]
            if c != zero:
                r = [sub(x, mul(c, y)) for x, y in zip(r, b)]
        for j in range(ncols):
            if r[j] != zero:
                inv = F.inv(r[j])
                r = [mul(x, inv) for x in r]
                for i, b in enumerate(basis):
                    c = b[j]
                    if c != zero:
                        basis[i] = [sub(x, mul(c, y)) for x, y in zip(b, r)]
                basis.append(r)
                pivots.append(j)
                break
    return basis, pivots


def echelon(rows, ncols: int, F: Field):
    """Reduced row echelon basis of the row space and its pivot columns."""
    if isinstance(F, PrimeField):
        return _echelon_mod_p(rows, ncols, F.p)
    return _echelon_generic(rows, ncols, F)


def rank(rows, ncols: int, F: Field) -> int:
    return len(echelon(rows, ncols, F)[0])


def nullspace(rows, ncols: int, F: Field) -> list[list]:
    """Basis of {x : row . x = 0 for all rows}."""
    basis, pivots = echelon(rows, ncols, F)
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for f in free:
        vec = [F.zero] * ncols
        vec[f] = F.one
        for piv, b in zip(pivots, basis):
            vec[piv] = F.neg(b[f])
        out.append(vec)
    return out


def det3(m, F: Field):
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    add, sub, mul = F.add, F.sub, F.mul
    t1 = mul(a, sub(mul(e, i), mul(f, h)))
    t2 = mul(b, sub(mul(d, i), mul(f, g)))
    t3 = mul(c, sub(mul(d, h), mul(e, g)))
    return add(sub(t1, t2), t3)
