"""Sparse multivariate polynomials with exact coefficients.

Terms live in a dict ``{exponent tuple: raw coefficient}``; zero
coefficients are never stored.  Iteration follows graded lexicographic
order (higher total degree first, ties broken lexicographically).
"""

from __future__ import annotations

import ast
from typing import Callable, Iterable, Mapping, Sequence

from .fields import Field, FieldElem


def grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class MultiPoly:
    __slots__ = ("field", "names", "terms")

    def __init__(self, field: Field, names: Sequence[str], terms: Mapping | None = None):
        self.field = field
        self.names = tuple(names)
        clean = {}
        if terms:
            z = field.zero
            for e, c in terms.items():
                if c != z:
                    clean[tuple(e)] = c
        self.terms = clean

    # construction ---------------------------------------------------------
    @classmethod
    def const(cls, field: Field, names, c) -> "MultiPoly":
        raw = field.coerce(c)
        return cls(field, names, {(0,) * len(names): raw})

    @classmethod
    def const_raw(cls, field: Field, names, raw) -> "MultiPoly":
        return cls(field, names, {(0,) * len(names): raw})

    @classmethod
    def var(cls, field: Field, names, i: int) -> "MultiPoly":
        e = [0] * len(names)
        e[i] = 1
        return cls(field, names, {tuple(e): field.one})

    @classmethod
    def monomial(cls, field: Field, names, exp, c=None) -> "MultiPoly":
        return cls(field, names, {tuple(exp): field.one if c is None else c})

    def _like(self, terms) -> "MultiPoly":
        out = MultiPoly.__new__(MultiPoly)
        out.field, out.names, out.terms = self.field, self.names, terms
        return out

    def _wrap(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.names != self.names or other.field != self.field:
                raise ValueError("polynomial ring mismatch")
            return other
        return MultiPoly.const(self.field, self.names, other)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = self._wrap(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = F.add(out.get(e, F.zero), c)
            if s == F.zero:
                out.pop(e, None)
            else:
                out[e] = s
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return self._like({e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            raw = self.field.coerce(other)
            if raw == self.field.zero:
                return self._like({})
            F = self.field
            return self._like({e: F.mul(c, raw) for e, c in self.terms.items()})
        return self.mul_truncated(other, None)

    __rmul__ = __mul__

    def mul_truncated(self, other: "MultiPoly", bounds: Sequence[int] | None) -> "MultiPoly":
        """Product dropping every monomial with exponent[i] >= bounds[i]."""
        other = self._wrap(other)
        F = self.field
        add, mul, zero = F.add, F.mul, F.zero
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if bounds is not None and any(x >= b for x, b in zip(e, bounds)):
                    continue
                s = add(out.get(e, zero), mul(c1, c2))
                if s == zero:
                    out.pop(e, None)
                else:
                    out[e] = s
        return self._like(out)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(self.field, self.names, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # inspection ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.names == other.names and self.field == other.field and self.terms == other.terms
        try:
            return self == self._wrap(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def lowest_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def homogeneous_part(self, k: int) -> "MultiPoly":
        return self._like({e: c for e, c in self.terms.items() if sum(e) == k})

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coeff(self, exp) -> FieldElem:
        return FieldElem(self.field, self.terms.get(tuple(exp), self.field.zero))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def evaluate(self, values: Sequence, lift: Callable | None = None, one=None):
        """Evaluate at ``values`` (ring elements supporting + and *).

        ``lift`` turns a raw coefficient into the value ring; defaults to
        wrapping it as a FieldElem.
        """
        if lift is None:
            field = self.field
            lift = lambda c: FieldElem(field, c)  # noqa: E731
        n = len(self.names)
        powers: list[dict[int, object]] = [{} for _ in range(n)]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                if k == 1:
                    cache[k] = values[i]
                else:
                    cache[k] = pw(i, k - 1) * values[i]
            return cache[k]

        total = None
        for e, c in self.terms.items():
            term = lift(c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            total = term if total is None else total + term
        if total is None:
            return lift(self.field.zero) if one is None else one * lift(self.field.zero)
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(self.names, e) if k
            )
            cs = F.fmt(c)
            if not mon:
                parts.append(cs)
            elif cs == "1":
                parts.append(mon)
            else:
                parts.append(f"{cs}*{mon}" if "+" not in cs else f"({cs})*{mon}")
        return " + ".join(parts)


class PolyParseError(ValueError):
    pass


def parse_expr(text: str, build: Mapping[str, object], number: Callable[[int], object]):
    """Evaluate an arithmetic expression in +, -, *, ^ and integer literals.

    ``build`` maps identifiers to values; ``number`` turns an int literal
    into a value.  The result type is whatever those produce, so the same
    routine parses forms, family entries and relations.
    """
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise PolyParseError(f"cannot parse {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise PolyParseError(f"exponent must be a non-negative integer in {text!r}")
                return ev(node.left) ** node.right.value
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            raise PolyParseError(f"unsupported operator in {text!r}")
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, ast.USub):
                return -ev(node.operand)
            if isinstance(node.op, ast.UAdd):
                return ev(node.operand)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return number(node.value)
        if isinstance(node, ast.Name):
            if node.id not in build:
                raise PolyParseError(f"unknown symbol {node.id!r} in {text!r}")
            return build[node.id]
        raise PolyParseError(f"unsupported syntax in {text!r}")

    return ev(tree)


def parse_poly(text: str, field: Field, names: Sequence[str], params: Mapping[str, object] | None = None) -> MultiPoly:
    """Parse ``text`` as a polynomial in ``names`` over ``field``.

    Named parameters are substituted by field elements before expansion.
    """
    names = tuple(names)
    build: dict[str, object] = {n: MultiPoly.var(field, names, i) for i, n in enumerate(names)}
    for k, v in (params or {}).items():
        if k in build:
            raise PolyParseError(f"parameter {k!r} clashes with a variable name")
        build[k] = MultiPoly.const_raw(field, names, field.coerce(v))
    number = lambda n: MultiPoly.const(field, names, n)  # noqa: E731
    result = parse_expr(text, build, number)
    if not isinstance(result, MultiPoly):
        result = MultiPoly.const(field, names, result)
    return result


def monomials_of_degree(nvars: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree d, in descending grlex order."""
    out: list[tuple[int, ...]] = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for a in range(left, -1, -1):
            rec(prefix + (a,), left - a, slots - 1)

    rec((), d, nvars)
    return out


def iter_exponents(terms: Iterable[tuple[int, ...]]):
    return sorted(terms, key=grlex_key, reverse=True)
