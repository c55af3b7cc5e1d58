"""Parametric stabilizer families: symbolic verification, tangent dimension, F_q-points.

A family is a 3x3 matrix of polynomials in named parameters together with
relations of two shapes only, ``x^n`` (x nilpotent) and ``x^n=1`` (x a root
of unity), and a list of parameters that are units.  Over the ring
k[params]/(relations) with unit parameters inverted, each relation rewrites
one variable's exponent, so normal forms are unique and membership in the
stabilizer is decided by plain reduction.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..cluster import BlowupConfig
from ..exactalg import Field, RewriteRing, field_for, fq_make, nullspace, parse_expr, rank
from ..plane import VARS
from .conditions import fixing_conditions, h0_vector_fields
from .pointcount import FqTables, pgl3_order, split_prime_power

_NIL = re.compile(r"^\s*([A-Za-z_]\w*)\s*(?:\^\s*(\d+))?\s*$")
_ROOT = re.compile(r"^\s*([A-Za-z_]\w*)\s*\^\s*(\d+)\s*=\s*1\s*$")

FULL_PGL3 = (("a", "b", "c"), ("d", "e", "f"), ("g", "h", "i"))
ENUMERATION_LIMIT = 1 << 24


class FamilyError(ValueError):
    pass


def _names_in(text: str) -> set[str]:
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise FamilyError(f"cannot parse entry {text!r}: {exc.msg}") from None
    return {n.id for n in ast.walk(tree) if isinstance(n, ast.Name)}


@dataclass(frozen=True)
class StabFamily:
    matrix: tuple[tuple[str, ...], ...]
    nilpotent: Mapping[str, int]
    roots: Mapping[str, int]
    units: tuple[str, ...]
    full: bool = False

    def __post_init__(self):
        if len(self.matrix) != 3 or any(len(r) != 3 for r in self.matrix):
            raise FamilyError("family matrix must be 3x3")
        clash = set(self.params) & set(VARS)
        if clash:
            raise FamilyError(f"parameters {sorted(clash)} clash with coordinate names")
        for name in list(self.nilpotent) + list(self.roots) + list(self.units):
            if name not in self.params:
                raise FamilyError(f"relation or unit for unknown parameter {name!r}")
        if set(self.nilpotent) & set(self.roots):
            raise FamilyError("a parameter carries two relations; naive reduction is not confluent")
        if set(self.nilpotent) & set(self.units):
            raise FamilyError("a nilpotent parameter cannot be a unit")

    @property
    def params(self) -> tuple[str, ...]:
        names: set[str] = set()
        for row in self.matrix:
            for entry in row:
                names |= _names_in(entry)
        return tuple(sorted(names))

    @classmethod
    def from_json(cls, data) -> "StabFamily":
        if data == "PGL3" or (isinstance(data, Mapping) and data.get("matrix") == "PGL3"):
            return cls.pgl3()
        try:
            matrix = tuple(tuple(str(x) for x in row) for row in data["matrix"])
        except (KeyError, TypeError) as exc:
            raise FamilyError(f"bad family matrix: {exc}") from None
        nil: dict[str, int] = {}
        roots: dict[str, int] = {}
        for rel in data.get("relations", []):
            m = _ROOT.match(rel)
            if m:
                roots[m.group(1)] = int(m.group(2))
                continue
            m = _NIL.match(rel)
            if m:
                nil[m.group(1)] = int(m.group(2) or 1)
                continue
            raise FamilyError(f"relation {rel!r} is neither 'x^n' nor 'x^n=1'")
        return cls(matrix, nil, roots, tuple(data.get("units", [])))

    @classmethod
    def pgl3(cls) -> "StabFamily":
        return cls(FULL_PGL3, {}, {}, (), full=True)

    def to_json(self):
        if self.full:
            return "PGL3"
        rels = [f"{x}^{n}" for x, n in sorted(self.nilpotent.items())]
        rels += [f"{x}^{n}=1" for x, n in sorted(self.roots.items())]
        return {"matrix": [list(r) for r in self.matrix], "relations": rels, "units": list(self.units)}

    def ring(self, field: Field, suffixes: Sequence[str] = ("",)) -> RewriteRing:
        names, nil, roots, units = [], {}, {}, []
        for s in suffixes:
            for p in self.params:
                names.append(p + s)
                if p in self.nilpotent:
                    nil[p + s] = self.nilpotent[p]
                if p in self.roots:
                    roots[p + s] = self.roots[p]
                if p in self.units:
                    units.append(p + s)
        return RewriteRing(field, names, nil, roots, units)

    def evaluate(self, values: Mapping[str, object], number) -> list[list]:
        return [[parse_expr(e, values, number) for e in row] for row in self.matrix]

    def generic(self, ring: RewriteRing, suffix: str = "") -> list[list]:
        values = {p: ring.var(p + suffix) for p in self.params}
        return self.evaluate(values, lambda n: ring.const(ring.field.from_int(n)))

    def identity_values(self) -> dict[str, int]:
        """Parameter values at which the matrix is the identity: 1 on the diagonal, 0 elsewhere."""
        vals = {p: 0 for p in self.params}
        for i in range(3):
            if self.matrix[i][i].strip() in vals:
                vals[self.matrix[i][i].strip()] = 1
        for p in list(self.units) + list(self.roots):
            vals[p] = 1
        return vals


# symbolic verification -------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyCheck:
    fixes: bool
    closed: bool
    complete: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.fixes and self.closed and self.complete


def _free_positions(fam: StabFamily) -> dict[str, tuple[int, int]]:
    pos = {}
    for i in range(3):
        for j in range(3):
            e = fam.matrix[i][j].strip()
            if e in fam.params and e not in pos:
                pos[e] = (i, j)
    return pos


def _closure(fam: StabFamily, field: Field) -> tuple[bool, str]:
    R = fam.ring(field, ("_1", "_2"))
    A = fam.generic(R, "_1")
    B = fam.generic(R, "_2")
    prod = [[sum((A[i][k] * B[k][j] for k in range(3)), R.zero()) for j in range(3)] for i in range(3)]
    pos = _free_positions(fam)
    missing = [p for p in fam.params if p not in pos]
    if missing:
        return False, f"parameters {missing} cannot be read off a matrix entry"
    solved = {p: prod[i][j] for p, (i, j) in pos.items()}
    shape = fam.evaluate(solved, lambda n: R.const(field.from_int(n)))
    for i in range(3):
        for j in range(3):
            if shape[i][j] != prod[i][j]:
                return False, f"product entry ({i},{j}) leaves the family shape"
    one = R.one()
    for p, n in fam.nilpotent.items():
        if not (solved[p] ** n).is_zero():
            return False, f"relation {p}^{n} fails on the product"
    for p, n in fam.roots.items():
        if solved[p] ** n != one:
            return False, f"relation {p}^{n}=1 fails on the product"
    for p in fam.units:
        if not solved[p].is_unit():
            return False, f"unit parameter {p} is not a unit on the product"
    return True, ""


def check_family(cfg: BlowupConfig, fam: StabFamily) -> FamilyCheck:
    """Containment in the stabilizer, closure under products, and first-order completeness.

    Completeness compares the family's tangent dimension with h0: a family
    that fixes the configuration but misses directions (diag(1, e, i) for a
    point with a tangent direction, say) is a proper subgroup.
    """
    R = fam.ring(cfg.field)
    g = fam.generic(R)
    bad = [c for c in fixing_conditions(g, cfg, R.const) if not c.is_zero()]
    closed, why = _closure(fam, cfg.field)
    tdim, h0 = family_tangent_dim(fam, cfg.field.char), h0_vector_fields(cfg)
    if bad:
        why = f"{len(bad)} fixing conditions do not reduce to 0"
    elif closed and tdim != h0:
        why = f"family tangent dimension {tdim} differs from h0 = {h0}"
    return FamilyCheck(not bad, closed, tdim == h0, why)


def verify_family(cfg: BlowupConfig, fam: StabFamily) -> bool:
    return bool(check_family(cfg, fam))


# tangent dimension -----------------------------------------------------------------------


def family_tangent_dim(fam: StabFamily, p: int) -> int:
    """Dimension of the family's k[eps]-points over the identity, modulo scalars."""
    F = field_for(p, 1)
    R = RewriteRing(F, ("eps",), nilpotent={"eps": 2})
    eps = R.var("eps")
    ident = fam.identity_values()
    number = lambda n: R.const(F.from_int(n))  # noqa: E731
    base = {x: number(v) for x, v in ident.items()}
    rel_polys = [(x, f"{x}^{n}") for x, n in fam.nilpotent.items()] + [(x, f"{x}^{n}-1") for x, n in fam.roots.items()]
    for x, text in rel_polys:
        if not parse_expr(text, base, number).is_zero():
            raise FamilyError(f"identity values violate relation {text}")
    one_pt = fam.evaluate(base, number)
    diag = one_pt[0][0]
    if any(one_pt[i][j] != (diag if i == j else R.zero()) for i in range(3) for j in range(3)):
        raise FamilyError("identity values do not give the identity matrix")
    params = fam.params
    images, rel_rows = [], [[F.zero] * len(params) for _ in rel_polys]
    for k, x in enumerate(params):
        vals = dict(base)
        vals[x] = base[x] + eps
        g = fam.evaluate(vals, number)
        images.append([g[i][j].coeff((1,)).v for i in range(3) for j in range(3)])
        for r, (_, text) in enumerate(rel_polys):
            rel_rows[r][k] = parse_expr(text, vals, number).coeff((1,)).v
    kernel = nullspace(rel_rows, len(params), F) if rel_rows else [
        [F.one if i == j else F.zero for i in range(len(params))] for j in range(len(params))
    ]
    vectors = []
    for v in kernel:
        vec = [F.zero] * 9
        for k, c in enumerate(v):
            if c != F.zero:
                vec = [F.add(a, F.mul(c, b)) for a, b in zip(vec, images[k])]
        vectors.append(vec)
    vectors.append([F.one if e in (0, 4, 8) else F.zero for e in range(9)])
    return rank(vectors, 9, F) - 1


# F_q-points ------------------------------------------------------------------------------


class _Codes:
    """Arrays of F_q element codes with table arithmetic, for vectorized evaluation."""

    def __init__(self, t: FqTables, a):
        self.t = t
        self.a = np.asarray(a, dtype=np.int32)

    def _other(self, o):
        return o.a if isinstance(o, _Codes) else o

    def __add__(self, o):
        return _Codes(self.t, self.t.add[self.a, self._other(o)])

    def __sub__(self, o):
        return _Codes(self.t, self.t.add[self.a, self.t.neg[self._other(o)]])

    def __mul__(self, o):
        return _Codes(self.t, self.t.mul[self.a, self._other(o)])

    def __neg__(self):
        return _Codes(self.t, self.t.neg[self.a])

    def __pow__(self, n: int):
        out = _Codes(self.t, np.ones_like(self.a))
        for _ in range(n):
            out = out * self
        return out


def _value_sets(fam: StabFamily, F) -> dict[str, list[int]]:
    els = list(F.elements())
    sets = {}
    for p in fam.params:
        if p in fam.nilpotent:
            sets[p] = [F.zero]
        elif p in fam.roots:
            n = fam.roots[p]
            sets[p] = [x for x in els[1:] if F.pow(x, n) == F.one]
        elif p in fam.units:
            sets[p] = els[1:]
        else:
            sets[p] = els
    return sets


def family_point_count(fam: StabFamily, q: int) -> int:
    """Number of distinct elements of PGL_3(F_q) the family parametrizes."""
    if fam.full:
        return pgl3_order(q)
    p, k = split_prime_power(q)
    F = fq_make(p, k)
    t = FqTables.build(F)
    sets = _value_sets(fam, F)
    params = fam.params
    sizes = [len(sets[x]) for x in params]
    total = int(np.prod(sizes, dtype=np.int64)) if sizes else 1
    if total > ENUMERATION_LIMIT:
        raise ValueError(f"family has {total} parameter values over F_{q}; too many to enumerate")
    idx = np.arange(total, dtype=np.int64)
    values = {}
    for x, n in zip(params, sizes):
        values[x] = _Codes(t, np.asarray(sets[x], dtype=np.int32)[idx % n])
        idx = idx // n
    number = lambda m: _Codes(t, np.full(total, F.from_int(m), dtype=np.int32))  # noqa: E731
    g = [e if isinstance(e, _Codes) else number(0) + e for row in fam.evaluate(values, number) for e in row]
    g = np.stack([np.broadcast_to(e.a, (total,)) for e in g], axis=1)
    A, M, N = t.add, t.mul, t.neg
    det = M[g[:, 0], A[M[g[:, 4], g[:, 8]], N[M[g[:, 5], g[:, 7]]]]]
    det = A[det, N[M[g[:, 1], A[M[g[:, 3], g[:, 8]], N[M[g[:, 5], g[:, 6]]]]]]]
    det = A[det, M[g[:, 2], A[M[g[:, 3], g[:, 7]], N[M[g[:, 4], g[:, 6]]]]]]
    g = g[det != 0]
    if g.shape[0] == 0:
        return 0
    lead = g[np.arange(g.shape[0]), np.argmax(g != 0, axis=1)]
    g = M[g, t.inv[lead][:, None]]
    keys = np.zeros(g.shape[0], dtype=np.int64)
    for e in range(9):
        keys = keys * q + g[:, e]
    return int(np.unique(keys).shape[0])
