"""Polynomial rings over a field reduced by monomial rewriting rules.

One mechanism covers dual numbers, truncated power series and the
parameter rings of stabilizer families:

* a *nilpotent* variable x of order n obeys x^n = 0 (dual numbers:
  eps with n = 2; series in t truncated after t^N: n = N + 1);
* a *root-of-unity* variable x of order n obeys x^n = 1;
* a *unit* variable is formally invertible (exponents range over Z).

Each rule only lowers exponents of one variable, so the reduction is
confluent and every element has a unique normal form.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .fields import Field, FieldElem
from .poly import PolyParseError, parse_expr


class NonUnitError(ArithmeticError):
    pass


class RewriteRing:
    def __init__(
        self,
        field: Field,
        names: Sequence[str],
        nilpotent: Mapping[str, int] | None = None,
        roots_of_unity: Mapping[str, int] | None = None,
        units: Sequence[str] = (),
    ):
        self.field = field
        self.names = tuple(names)
        nilpotent = dict(nilpotent or {})
        roots_of_unity = dict(roots_of_unity or {})
        for name in list(nilpotent) + list(roots_of_unity):
            if name not in self.names:
                raise ValueError(f"rule for unknown variable {name!r}")
        clash = set(nilpotent) & set(roots_of_unity)
        if clash:
            raise ValueError(f"variables {sorted(clash)} carry two relations; naive reduction is not confluent")
        for name, n in list(nilpotent.items()) + list(roots_of_unity.items()):
            if n < 1:
                raise ValueError(f"relation order for {name!r} must be positive")
        self.nil = tuple(nilpotent.get(n, 0) for n in self.names)
        self.unit = tuple(roots_of_unity.get(n, 0) for n in self.names)
        self.nilpotent = nilpotent
        self.roots_of_unity = roots_of_unity
        for name in units:
            if name not in self.names:
                raise ValueError(f"unknown unit variable {name!r}")
            if name in nilpotent:
                raise ValueError(f"{name!r} cannot be both nilpotent and a unit")
        self.laurent = tuple(n in units and n not in roots_of_unity for n in self.names)

    def __repr__(self):
        rules = [f"{n}^{k}=0" for n, k in self.nilpotent.items()]
        rules += [f"{n}^{k}=1" for n, k in self.roots_of_unity.items()]
        return f"{self.field}[{','.join(self.names)}]/({', '.join(rules)})"

    # normal form ------------------------------------------------------------
    def _reduce_exp(self, exp):
        out = []
        for i, k in enumerate(exp):
            if self.nil[i] and k >= self.nil[i]:
                return None
            if k < 0 and not (self.laurent[i] or self.unit[i]):
                raise ValueError(f"negative power of the non-unit {self.names[i]!r}")
            if self.unit[i]:
                k %= self.unit[i]
            out.append(k)
        return tuple(out)

    def elem(self, terms: Mapping) -> "RingElem":
        F = self.field
        out: dict = {}
        for e, c in terms.items():
            r = self._reduce_exp(e)
            if r is None or c == F.zero:
                continue
            s = F.add(out.get(r, F.zero), c)
            if s == F.zero:
                out.pop(r, None)
            else:
                out[r] = s
        return RingElem(self, out)

    def zero(self) -> "RingElem":
        return RingElem(self, {})

    def one(self) -> "RingElem":
        return self.const(self.field.one)

    def const(self, raw) -> "RingElem":
        if raw == self.field.zero:
            return RingElem(self, {})
        return RingElem(self, {(0,) * len(self.names): raw})

    def __call__(self, value) -> "RingElem":
        if isinstance(value, RingElem):
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.const(self.field.coerce(value))

    def var(self, name: str) -> "RingElem":
        i = self.names.index(name)
        e = [0] * len(self.names)
        e[i] = 1
        return self.elem({tuple(e): self.field.one})

    def gens(self):
        return [self.var(n) for n in self.names]

    def parse(self, text: str) -> "RingElem":
        build = {n: self.var(n) for n in self.names}
        result = parse_expr(text, build, lambda n: self.const(self.field.from_int(n)))
        if not isinstance(result, RingElem):
            raise PolyParseError(f"{text!r} did not produce a ring element")
        return result

    def lift(self, raw) -> "RingElem":
        return self.const(raw)


class RingElem:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: RewriteRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def _coerce(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            if other.ring is not self.ring:
                raise ValueError("ring mismatch")
            return other
        if isinstance(other, FieldElem):
            return self.ring.const(other.v)
        return self.ring.const(self.ring.field.coerce(other))

    def __add__(self, other):
        other = self._coerce(other)
        F = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = F.add(out.get(e, F.zero), c)
            if s == F.zero:
                out.pop(e, None)
            else:
                out[e] = s
        return RingElem(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return RingElem(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        R, F = self.ring, self.ring.field
        add, mul, zero = F.add, F.mul, F.zero
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = R._reduce_exp(tuple(a + b for a, b in zip(e1, e2)))
                if e is None:
                    continue
                s = add(out.get(e, zero), mul(c1, c2))
                if s == zero:
                    out.pop(e, None)
                else:
                    out[e] = s
        return RingElem(R, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.terms

    def constant(self):
        return self.terms.get((0,) * len(self.ring.names), self.ring.field.zero)

    def _split_unit(self):
        """(c, monomial exponent, rest) when self = c*m + nilpotent with m a unit monomial."""
        R = self.ring
        unit_part = {e: c for e, c in self.terms.items() if all(R.nil[i] == 0 or e[i] == 0 for i in range(len(e)))}
        if len(unit_part) != 1:
            return None
        (e, c), = unit_part.items()
        if any(k and not (R.unit[i] or R.laurent[i]) for i, k in enumerate(e)):
            return None
        return c, e

    def is_unit(self) -> bool:
        return self._split_unit() is not None

    def inverse(self) -> "RingElem":
        R, F = self.ring, self.ring.field
        split = self._split_unit()
        if split is None:
            raise NonUnitError(f"{self!r} is not a unit of {R}")
        c, e = split
        inv_exp = tuple((R.unit[i] - k) % R.unit[i] if R.unit[i] else -k for i, k in enumerate(e))
        head_inv = R.elem({inv_exp: F.inv(c)})
        # self * head_inv = 1 + n with n nilpotent; invert by the finite geometric series
        n = self * head_inv - R.one()
        result, power = R.one(), R.one()
        for _ in range(sum(k for k in R.nil if k) + 1):
            power = power * (-n)
            if power.is_zero():
                break
            result = result + power
        return result * head_inv

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def coeff(self, exp) -> FieldElem:
        F = self.ring.field
        return FieldElem(F, self.terms.get(tuple(exp), F.zero))

    def part(self, var: str, k: int) -> "RingElem":
        """Coefficient of var^k, as an element of the same ring."""
        i = self.ring.names.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                e2 = list(e)
                e2[i] = 0
                out[tuple(e2)] = c
        return RingElem(self.ring, out)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        R, F = self.ring, self.ring.field
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0])):
            mon = "*".join((n if k == 1 else f"{n}^{k}") for n, k in zip(R.names, e) if k)
            cs = F.fmt(c)
            parts.append(cs if not mon else (mon if cs == "1" else f"{cs}*{mon}"))
        return " + ".join(parts)


def dual_extend(field: Field, name: str = "eps") -> RewriteRing:
    """F[eps]/(eps^2)."""
    return RewriteRing(field, (name,), nilpotent={name: 2})


def series_ring(field: Field, order: int, name: str = "t") -> RewriteRing:
    """F[t]/(t^(order+1)): power series truncated after t^order."""
    return RewriteRing(field, (name,), nilpotent={name: order + 1})
