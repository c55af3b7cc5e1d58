"""Points, forms and projective transformations of P^2 over exact fields."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactalg import ExtensionField, Field, FieldElem, MultiPoly, hensel_graph, parse_expr, parse_poly
from .exactalg.poly import PolyParseError
from .exactalg.series import SingularGermError

VARS = ("x", "y", "z")
# Linear systems never go beyond sextics; carriers are only germs, and one
# carrier of degree 7 is needed for the longest tower, so forms allow 8.
MAX_FORM_DEGREE = 8


class PlaneError(ValueError):
    pass


def _is_unit(c) -> bool:
    return c.is_unit()


def parse_scalar(field: Field, text, params=None) -> FieldElem:
    """A field element from an int or an expression in the named parameters.

    Over F_{p^k} (k > 1) the symbol ``t`` denotes the class of the generator.
    """
    if isinstance(text, FieldElem):
        return field(text)
    if isinstance(text, int):
        return field(text)
    build = {k: field(v) for k, v in (params or {}).items()}
    if isinstance(field, ExtensionField) and "t" not in build:
        build["t"] = field.elem(field.gen())
    try:
        out = parse_expr(str(text), build, lambda n: field(n))
    except PolyParseError:
        return field(str(text))
    return field(out)


class ProjPoint:
    """A point of P^2, normalized so the first unit coordinate is 1."""

    __slots__ = ("coords", "chart")

    def __init__(self, coords: Sequence):
        coords = tuple(coords)
        if len(coords) != 3:
            raise PlaneError("a point of P^2 needs three coordinates")
        for i, c in enumerate(coords):
            if _is_unit(c):
                inv = c.inverse()
                self.coords = tuple(x * inv for x in coords)
                self.chart = i
                return
        raise PlaneError("no coordinate is a unit")

    @classmethod
    def parse(cls, field: Field, coords: Sequence, params=None) -> "ProjPoint":
        return cls([parse_scalar(field, c, params) for c in coords])

    @property
    def field(self) -> Field:
        return self.coords[0].field

    def affine(self) -> tuple[int, int]:
        """Indices of the two affine coordinates of the chart, in order."""
        return tuple(i for i in range(3) if i != self.chart)

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "[" + ":".join(repr(c) for c in self.coords) + "]"


class HomForm:
    """Homogeneous form in x, y, z; its zero locus is a plane curve."""

    __slots__ = ("poly",)

    def __init__(self, poly: MultiPoly):
        if poly.names != VARS:
            raise PlaneError("forms live in the variables x, y, z")
        if poly.is_zero():
            raise PlaneError("the zero form defines no curve")
        if not poly.is_homogeneous():
            raise PlaneError(f"{poly} is not homogeneous")
        if poly.degree() > MAX_FORM_DEGREE:
            raise PlaneError(f"degree {poly.degree()} exceeds {MAX_FORM_DEGREE}")
        self.poly = poly

    @classmethod
    def parse(cls, text: str, field: Field, params=None) -> "HomForm":
        return cls(parse_poly(text, field, VARS, params))

    @property
    def degree(self) -> int:
        return self.poly.degree()

    @property
    def field(self) -> Field:
        return self.poly.field

    def __eq__(self, other):
        return isinstance(other, HomForm) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return repr(self.poly)


def eval_form(F: HomForm, P: ProjPoint):
    if P.field != F.field:
        raise PlaneError("form and point live over different fields")
    return F.poly.evaluate(list(P.coords))


def local_expansion(F: HomForm, P: ProjPoint) -> MultiPoly:
    """F in the affine chart of P, centred at P, in the chart's two variables."""
    field = F.field
    a, b = P.affine()
    names = (VARS[a], VARS[b])
    subs = [None, None, None]
    subs[P.chart] = MultiPoly.const(field, names, 1)
    subs[a] = MultiPoly.var(field, names, 0) + P.coords[a]
    subs[b] = MultiPoly.var(field, names, 1) + P.coords[b]
    return F.poly.evaluate(subs, lift=lambda c: MultiPoly.const_raw(field, names, c))


def mult_at(F: HomForm, P: ProjPoint) -> int:
    """Multiplicity of V(F) at P; 0 means P is not on the curve."""
    return local_expansion(F, P).lowest_degree()


def mult_at_chart(F: HomForm, P: ProjPoint, chart: int) -> int:
    """Same as ``mult_at`` but in a caller-chosen chart (for cross-checks)."""
    if not P.coords[chart].is_unit():
        raise PlaneError("chosen chart does not contain the point")
    scaled = ProjPoint.__new__(ProjPoint)
    inv = P.coords[chart].inverse()
    scaled.coords = tuple(c * inv for c in P.coords)
    scaled.chart = chart
    return local_expansion(F, scaled).lowest_degree()


@dataclass(frozen=True)
class Jet:
    """Truncated parametrization t -> (affine coordinates) of a smooth germ.

    In the chart of ``base`` the coordinate ``u_index`` equals P_u + t and
    the coordinate ``v_index`` equals P_v + psi(t).
    """

    base: ProjPoint
    u_index: int
    v_index: int
    psi: tuple  # raw coefficients psi_0 (=0), ..., psi_order

    @property
    def order(self) -> int:
        return len(self.psi) - 1

    @property
    def field(self) -> Field:
        return self.base.field

    def affine_series(self) -> dict[int, list]:
        """Affine coordinate index -> series coefficients (centred at the base)."""
        F = self.field
        u = [F.zero] * (self.order + 1)
        if self.order >= 1:
            u[1] = F.one
        return {self.u_index: u, self.v_index: list(self.psi)}

    def psi_elems(self):
        return [FieldElem(self.field, c) for c in self.psi]


def branch_at(F: HomForm, P: ProjPoint, order: int) -> Jet:
    """Parametrize the unique branch of V(F) through a smooth point P."""
    loc = local_expansion(F, P)
    if loc.lowest_degree() != 1:
        raise PlaneError(f"{F} is not smooth at {P} (multiplicity {loc.lowest_degree()})")
    a, b = P.affine()
    field = F.field
    lin_a = loc.terms.get((1, 0), field.zero)
    lin_b = loc.terms.get((0, 1), field.zero)
    if lin_b != field.zero:
        u_index, v_index, swap = a, b, False
    elif lin_a != field.zero:
        u_index, v_index, swap = b, a, True
    else:
        raise PlaneError("degenerate chart")
    if swap:
        loc = MultiPoly(field, ("u", "v"), {(e[1], e[0]): c for e, c in loc.terms.items()})
    else:
        loc = MultiPoly(field, ("u", "v"), loc.terms)
    try:
        psi = hensel_graph(loc, order)
    except SingularGermError as exc:
        raise PlaneError(str(exc)) from None
    return Jet(P, u_index, v_index, tuple(psi))


class PglElem:
    """3x3 invertible matrix up to scalars; first unit entry (row-major) is 1."""

    __slots__ = ("m",)

    def __init__(self, rows: Sequence[Sequence], normalize: bool = True):
        m = [list(r) for r in rows]
        if len(m) != 3 or any(len(r) != 3 for r in m):
            raise PlaneError("expected a 3x3 matrix")
        if not det_of(m).is_unit():
            raise PlaneError("determinant is not a unit")
        if normalize:
            for c in (x for r in m for x in r):
                if c.is_unit():
                    inv = c.inverse()
                    m = [[x * inv for x in r] for r in m]
                    break
        self.m = tuple(tuple(r) for r in m)

    @classmethod
    def parse(cls, field: Field, rows) -> "PglElem":
        return cls([[field(c) for c in r] for r in rows])

    @classmethod
    def identity(cls, field: Field) -> "PglElem":
        return cls([[field(int(i == j)) for j in range(3)] for i in range(3)])

    def det(self):
        return det_of(self.m)

    def __mul__(self, other: "PglElem") -> "PglElem":
        a, b = self.m, other.m
        return PglElem([[sum((a[i][k] * b[k][j] for k in range(1, 3)), a[i][0] * b[0][j]) for j in range(3)] for i in range(3)])

    def inverse(self) -> "PglElem":
        m = self.m
        adj = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                r = [k for k in range(3) if k != j]
                c = [k for k in range(3) if k != i]
                minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
                adj[i][j] = minor if (i + j) % 2 == 0 else -minor
        return PglElem(adj)

    def apply(self, vec):
        return [sum((self.m[i][k] * vec[k] for k in range(1, 3)), self.m[i][0] * vec[0]) for i in range(3)]

    def __eq__(self, other):
        return isinstance(other, PglElem) and self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def __repr__(self):
        return "PGL" + repr([list(r) for r in self.m])


def det_of(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def act_point(g: PglElem, P: ProjPoint) -> ProjPoint:
    return ProjPoint(g.apply(P.coords))


def act_form(g: PglElem, F: HomForm) -> HomForm:
    """F o g^-1, so that P on V(F) iff g.P on V(act_form(g, F))."""
    field = F.field
    ginv = g.inverse().m
    xs = [MultiPoly.var(field, VARS, i) for i in range(3)]
    subs = [sum((xs[j] * ginv[i][j] for j in range(1, 3)), xs[0] * ginv[i][0]) for i in range(3)]
    return HomForm(F.poly.evaluate(subs, lift=lambda c: MultiPoly.const_raw(field, VARS, c)))


def line_through(P: ProjPoint, Q: ProjPoint) -> HomForm:
    """The line joining two distinct points (cross product of coordinates)."""
    p, q = P.coords, Q.coords
    coeffs = [p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]]
    field = P.field
    poly = MultiPoly(field, VARS, {tuple(int(i == j) for j in range(3)): c.v for i, c in enumerate(coeffs)})
    return HomForm(poly)


def tangent_line(jet: Jet) -> HomForm:
    """The line through the base of ``jet`` in its tangent direction."""
    P = jet.base
    field = P.field
    direction = [field(0)] * 3
    direction[jet.u_index] = field(1)
    direction[jet.v_index] = FieldElem(field, jet.psi[1]) if jet.order >= 1 else field(0)
    Q = [P.coords[i] + direction[i] for i in range(3)]
    return line_through(P, ProjPoint(Q))
