"""Exact fields: the rationals, prime fields and small extensions F_{p^k}.

Elements are carried around in a *raw* representation chosen per field
(``Fraction`` for Q, ``int`` residues for F_p, base-p digit codes for
F_{p^k}).  Hot code paths work on raw values through the field methods;
``FieldElem`` is the user-facing wrapper with operator overloading.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property

# Fixed moduli, coefficients listed from the constant term up (monic).
# Pairs not listed fall back to the lexicographically smallest monic
# irreducible polynomial, see ``_smallest_irreducible``.
MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),  # t^2 + t + 1
    (2, 3): (1, 1, 0, 1),  # t^3 + t + 1
    (2, 4): (1, 1, 0, 0, 1),  # t^4 + t + 1
    (3, 2): (1, 0, 1),  # t^2 + 1
    (3, 3): (2, 2, 0, 1),  # t^3 + 2t + 2
    (5, 2): (3, 0, 1),  # t^2 - 2
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_has_factor_of_degree(coeffs: tuple[int, ...], p: int, deg: int) -> bool:
    """True if the monic polynomial ``coeffs`` has a monic factor of degree ``deg``."""
    n = len(coeffs) - 1
    for tail in itertools.product(range(p), repeat=deg):
        div = tuple(tail) + (1,)
        rem = list(coeffs)
        for shift in range(n - deg, -1, -1):
            lead = rem[shift + deg] % p
            if lead:
                for i, c in enumerate(div):
                    rem[shift + i] = (rem[shift + i] - lead * c) % p
        if not any(r % p for r in rem[:deg]):
            return True
    return False


def is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Exhaustive factor search; fine for degree <= 4."""
    n = len(coeffs) - 1
    if n <= 0:
        return False
    return not any(_poly_has_factor_of_degree(coeffs, p, d) for d in range(1, n // 2 + 1))


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    for tail in itertools.product(range(p), repeat=k):
        cand = tuple(reversed(tail)) + (1,)
        if cand[0] and is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class Field:
    """Common interface.  Subclasses implement the raw arithmetic."""

    kind: str
    char: int
    degree: int = 1

    # raw arithmetic -----------------------------------------------------
    zero: object
    one: object

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    # user-facing ----------------------------------------------------------
    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.field is not self:
                raise ValueError("element belongs to a different field")
            return value
        return FieldElem(self, self.coerce(value))

    def elem(self, raw) -> "FieldElem":
        """Wrap a raw value (no integer interpretation)."""
        return FieldElem(self, raw)

    def coerce(self, value):
        """Raw value from an int, a Fraction, a string or a FieldElem."""
        if isinstance(value, FieldElem):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value.v
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.div(self.from_int(value.numerator), self.from_int(value.denominator))
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def parse(self, text: str):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return self.div(self.from_int(int(num)), self.from_int(int(den)))
        return self.from_int(int(text))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def embed_prime(self, v):
        return v


class RationalField(Field):
    kind = "rationals"
    char = 0
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return 1 / a

    def from_int(self, n):
        return Fraction(n)

    def key(self, a):
        return (a.numerator, a.denominator)

    def fmt(self, a) -> str:
        return str(a)

    @property
    def order(self):
        return None

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField(Field):
    kind = "finite"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.char = p
        self.p = p
        self.order = p
        self.zero = 0
        self.one = 1
        self.modulus = None

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)

    def from_int(self, n):
        return n % self.p

    def elements(self):
        return range(self.p)

    def key(self, a):
        return a

    def fmt(self, a) -> str:
        return str(a)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class ExtensionField(Field):
    """F_{p^k} = F_p[t]/(modulus); raw value = sum c_i p^i for c_0 + c_1 t + ..."""

    kind = "finite"

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.char = p
        self.p = p
        self.degree = k
        self.modulus = modulus
        self.order = p**k
        self.zero = 0
        self.one = 1

    # digit helpers
    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, ds) -> int:
        v = 0
        for c in reversed(list(ds)):
            v = v * self.p + (c % self.p)
        return v

    @cached_property
    def _tables(self):
        q, p, k = self.order, self.p, self.degree
        digits = [self.digits(a) for a in range(q)]
        add = [[self.from_digits([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q)] for a in range(q)]
        neg = [self.from_digits([(-x) % p for x in digits[a]]) for a in range(q)]

        def slow_mul(a, b):
            prod = [0] * (2 * k - 1)
            for i, x in enumerate(digits[a]):
                if x:
                    for j, y in enumerate(digits[b]):
                        prod[i + j] += x * y
            for d in range(2 * k - 2, k - 1, -1):
                c = prod[d] % p
                if c:
                    for i in range(k + 1):
                        prod[d - k + i] -= c * self.modulus[i]
            return self.from_digits(prod[:k])

        # log/antilog tables from a primitive element
        gen = None
        for g in range(2, q) if q > 2 else []:
            x, seen = 1, 0
            for e in range(1, q):
                x = slow_mul(x, g)
                if x == 1:
                    seen = e
                    break
            if seen == q - 1:
                gen = g
                break
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for e in range(q - 1):
            exp[e] = x
            log[x] = e
            x = slow_mul(x, gen)
        for e in range(q - 1, 2 * (q - 1)):
            exp[e] = exp[e - (q - 1)]
        return add, neg, exp, log

    def add(self, a, b):
        return self._tables[0][a][b]

    def neg(self, a):
        return self._tables[1][a]

    def sub(self, a, b):
        t = self._tables
        return t[0][a][t[1][b]]

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        _, _, exp, log = self._tables
        return exp[log[a] + log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        _, _, exp, log = self._tables
        return exp[(self.order - 1 - log[a]) % (self.order - 1)]

    def from_int(self, n):
        return n % self.p

    def gen(self):
        """Raw value of the class of t."""
        return self.p

    def elements(self):
        return range(self.order)

    def parse(self, text: str):
        text = text.strip().replace(" ", "")
        if text.startswith("[") and text.endswith("]"):
            ds = [int(c) for c in text[1:-1].split(",")]
            return self.from_digits(ds)
        if "t" not in text:
            return super().parse(text)
        from .poly import PolyParseError, parse_expr

        try:
            out = parse_expr(text, {"t": self.elem(self.gen())}, self)
        except PolyParseError as exc:
            raise ValueError(str(exc)) from None
        return self.coerce(out)

    def key(self, a):
        return a

    def fmt(self, a) -> str:
        ds = self.digits(a)
        terms = []
        for i, c in enumerate(ds):
            if not c:
                continue
            mon = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mon:
                terms.append(str(c))
            else:
                terms.append(mon if c == 1 else f"{c}*{mon}")
        return "+".join(reversed(terms)) if terms else "0"

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and (other.p, other.modulus) == (self.p, self.modulus)

    def __hash__(self):
        return hash(("GF", self.p, self.modulus))


QQ = RationalField()
_FIELD_CACHE: dict[tuple[int, int], Field] = {}


def fq_make(p: int, k: int = 1) -> Field:
    """The field with p^k elements, using the fixed modulus table."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= k <= 4:
        raise ValueError("extension degree must be between 1 and 4")
    key = (p, k)
    if key not in _FIELD_CACHE:
        if k == 1:
            _FIELD_CACHE[key] = PrimeField(p)
        else:
            modulus = MODULI.get(key) or _smallest_irreducible(p, k)
            _FIELD_CACHE[key] = ExtensionField(p, k, modulus)
    return _FIELD_CACHE[key]


def field_for(characteristic: int, extension: int = 1) -> Field:
    if characteristic == 0:
        if extension != 1:
            raise ValueError("extensions of Q are not supported")
        return QQ
    return fq_make(characteristic, extension)


def embedding(small: Field, big: Field) -> dict:
    """Raw-value map small -> big for finite fields sharing a characteristic.

    The image of t is the root of the small modulus in ``big`` with the
    smallest raw code, which makes the embedding deterministic.
    """
    if small == big:
        return {a: a for a in small.elements()}
    if small.char != big.char or big.degree % small.degree:
        raise ValueError(f"{small} does not embed in {big}")
    if small.degree == 1:
        return {a: big.from_int(a) for a in small.elements()}
    mod = small.modulus
    root = None
    for cand in big.elements():
        acc = big.zero
        for c in reversed(mod):
            acc = big.add(big.mul(acc, cand), big.from_int(c))
        if acc == big.zero:
            root = cand
            break
    table = {}
    for a in small.elements():
        acc = big.zero
        for c in reversed(small.digits(a)):
            acc = big.add(big.mul(acc, root), big.from_int(c))
        table[a] = acc
    return table


class FieldElem:
    __slots__ = ("field", "v")

    def __init__(self, field: Field, v):
        self.field = field
        self.v = v

    def _raw(self, other):
        if isinstance(other, FieldElem):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("field mismatch")
            return other.v
        return self.field.coerce(other)

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.v, self._raw(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.v, self._raw(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub(self._raw(other), self.v))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.v, self._raw(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field, self.field.div(self.v, self._raw(other)))

    def __rtruediv__(self, other):
        return FieldElem(self.field, self.field.div(self._raw(other), self.v))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.v))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow(self.v, e))

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.v))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.v)

    def is_unit(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.v == other.v
        try:
            return self.v == self.field.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.v))

    def __repr__(self):
        return self.field.fmt(self.v)
