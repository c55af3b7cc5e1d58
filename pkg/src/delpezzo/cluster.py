"""Towers of infinitely near points, blow-up configurations and linear systems.

A tower of height h is a base point P of P^2 together with the points
infinitely near to it that are picked out by a smooth carrier branch: level
k is the point of the k-th exceptional divisor where the strict transform of
the branch passes.

All local computations happen in *straightened* coordinates (u, w) at P:
the chart of P with u the branch parameter and w = v - psi(u), so the branch
is w = 0 up to terms of order u^(h+1).  After k blow-ups along the branch
the divisorial valuation at level k is monomial with weights (1, k+1), so a
degree-d form G satisfies "multiplicity >= mu_j at level j for all j <= k"
iff every monomial u^a w^b of G has a + (k+1) b >= mu_0 + ... + mu_k.  No
derivatives are taken, so this is exact in every characteristic.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Mapping, Sequence

from .exactalg import Field, FieldElem, MultiPoly, echelon, field_for, monomials_of_degree, nullspace
from .plane import (
    VARS,
    HomForm,
    Jet,
    PlaneError,
    ProjPoint,
    branch_at,
    line_through,
    mult_at,
    parse_scalar,
    tangent_line,
)

MAX_POINTS = 8
MAX_SYSTEM_DEGREE = 6


class ConfigError(ValueError):
    pass


def _default_line(P: ProjPoint) -> HomForm:
    """A line through P, used as the carrier of height-1 towers."""
    a, b = P.affine()
    field = P.field
    terms = {tuple(int(i == b) for i in range(3)): field.one}
    if not P.coords[b].is_zero():
        terms[tuple(int(i == P.chart) for i in range(3))] = field.neg(P.coords[b].v)
    return HomForm(MultiPoly(field, VARS, terms))


class Tower:
    """A base point plus h - 1 infinitely near points along a smooth carrier."""

    def __init__(self, base: ProjPoint, carrier: HomForm | None, height: int, carrier_text: str | None = None):
        if height < 1:
            raise ConfigError("tower height must be at least 1")
        if carrier is None:
            if height > 1:
                raise ConfigError("towers of height > 1 need a carrier")
            carrier = _default_line(base)
        m = mult_at(carrier, base)
        if m == 0:
            raise ConfigError(f"base point {base} is not on the carrier {carrier}")
        if m > 1:
            raise ConfigError(f"carrier {carrier} is singular at {base} (multiplicity {m})")
        self.base = base
        self.carrier = carrier
        self.height = height
        self.carrier_text = carrier_text
        self.jet: Jet = branch_at(carrier, base, height)
        self._expansions: dict[int, tuple[int, dict]] = {}

    @property
    def field(self) -> Field:
        return self.base.field

    @property
    def chart(self) -> int:
        return self.base.chart

    def __repr__(self):
        return f"Tower(base={self.base}, carrier={self.carrier}, height={self.height})"

    # straightened coordinates ------------------------------------------------
    def _substitutions(self):
        """Images of x, y, z as polynomials in (u, w)."""
        field = self.field
        names = ("u", "w")
        P, jet = self.base, self.jet
        u = MultiPoly.var(field, names, 0)
        w = MultiPoly.var(field, names, 1)
        psi = MultiPoly(field, names, {(k, 0): c for k, c in enumerate(jet.psi)})
        subs = [None, None, None]
        subs[P.chart] = MultiPoly.const(field, names, 1)
        subs[jet.u_index] = u + P.coords[jet.u_index]
        subs[jet.v_index] = w + psi + P.coords[jet.v_index]
        return subs

    def straighten(self, poly: MultiPoly, bound: int | None = None) -> MultiPoly:
        """``poly`` in straightened coordinates, dropping exponents >= bound."""
        subs = self._substitutions()
        bounds = None if bound is None else (bound, bound)
        out = MultiPoly(self.field, ("u", "w"))
        for e, c in poly.terms.items():
            term = MultiPoly.const_raw(self.field, ("u", "w"), c)
            for i, k in enumerate(e):
                for _ in range(k):
                    term = term.mul_truncated(subs[i], bounds)
            out = out + term
        return out

    def expansion_table(self, d: int, bound: int) -> dict:
        """(a, b) -> coefficient row over the degree-d monomial basis."""
        cached = self._expansions.get(d)
        if cached is not None and cached[0] >= bound:
            return cached[1]
        field = self.field
        monos = monomials_of_degree(3, d)
        subs = self._substitutions()
        bounds = (bound, bound)
        # powers of each substitution, truncated
        powers = []
        for s in subs:
            row = [MultiPoly.const(field, ("u", "w"), 1)]
            for _ in range(d):
                row.append(row[-1].mul_truncated(s, bounds))
            powers.append(row)
        table: dict = {}
        for col, e in enumerate(monos):
            term = powers[0][e[0]].mul_truncated(powers[1][e[1]], bounds).mul_truncated(powers[2][e[2]], bounds)
            for ab, c in term.terms.items():
                table.setdefault(ab, [field.zero] * len(monos))[col] = c
        self._expansions[d] = (bound, table)
        return table

    # incidence -----------------------------------------------------------------
    def valuations(self, G: HomForm) -> list[int]:
        """nu_k(G) for k < h: the order of G along the k-th exceptional divisor."""
        S = self.straighten(G.poly)
        return [min(a + (k + 1) * b for (a, b) in S.terms) for k in range(self.height)]

    def multiplicities(self, G: HomForm) -> list[int]:
        """Multiplicity of the strict transform of V(G) at each tower level."""
        nu = self.valuations(G)
        return [nu[0]] + [nu[k] - nu[k - 1] for k in range(1, self.height)]

    def truncated(self, height: int) -> "Tower":
        return Tower(self.base, self.carrier, height, self.carrier_text)


def conditions_for_profile(mu: Sequence[int]) -> list[tuple[int, int]]:
    """Monomials u^a w^b that must vanish for the multiplicities ``mu``."""
    partial = list(itertools.accumulate(mu))
    out = []
    b = 0
    while True:
        amax = max(partial[k] - (k + 1) * b for k in range(len(mu)))
        if amax <= 0:
            break
        out.extend((a, b) for a in range(amax))
        b += 1
    return out


def profile_bound(mu: Sequence[int]) -> int:
    return max([0] + list(itertools.accumulate(mu)))


@dataclass(frozen=True)
class MultProfile:
    """Multiplicities assigned to the levels of each tower."""

    levels: tuple[tuple[int, ...], ...]

    @classmethod
    def from_flat(cls, cfg: "BlowupConfig", m: Sequence[int]) -> "MultProfile":
        if len(m) != cfg.n:
            raise ConfigError(f"profile has {len(m)} entries, configuration has {cfg.n} points")
        out, i = [], 0
        for t in cfg.towers:
            out.append(tuple(m[i : i + t.height]))
            i += t.height
        return cls(tuple(out))

    def flat(self) -> tuple[int, ...]:
        return tuple(x for lv in self.levels for x in lv)

    def is_monotone(self) -> bool:
        return all(all(a >= b for a, b in zip(lv, lv[1:])) and (not lv or lv[-1] >= 0) for lv in self.levels)


@dataclass
class LinearSystem:
    """Conditions on the coefficients of degree-d forms (monomials in grlex order)."""

    field: Field
    degree: int
    rows: list
    ncols: int

    @cached_property
    def _echelon(self):
        return echelon(self.rows, self.ncols, self.field)

    @property
    def rank(self) -> int:
        return len(self._echelon[0])

    @property
    def kernel_dim(self) -> int:
        return self.ncols - self.rank

    def kernel_forms(self) -> list[HomForm]:
        monos = monomials_of_degree(3, self.degree)
        out = []
        for vec in nullspace(self.rows, self.ncols, self.field):
            out.append(HomForm(MultiPoly(self.field, VARS, {monos[j]: c for j, c in enumerate(vec)})))
        return out


class BlowupConfig:
    """A base field together with towers over pairwise distinct base points."""

    def __init__(self, field: Field, towers: Sequence[Tower], params: Mapping[str, FieldElem] | None = None, label: str | None = None):
        towers = tuple(towers)
        bases = [t.base for t in towers]
        if len(set(bases)) != len(bases):
            raise ConfigError("tower base points must be pairwise distinct")
        if sum(t.height for t in towers) > MAX_POINTS:
            raise ConfigError(f"at most {MAX_POINTS} points can be blown up")
        for t in towers:
            if t.field != field:
                raise ConfigError("tower lives over a different field")
        self.field = field
        self.towers = towers
        self.params = dict(params or {})
        self.label = label
        self._rank_cache: dict = {}

    # basic data ------------------------------------------------------------------
    @property
    def n(self) -> int:
        return sum(t.height for t in self.towers)

    @property
    def degree(self) -> int:
        return 9 - self.n

    @property
    def height(self) -> int:
        return max((t.height for t in self.towers), default=0)

    @property
    def heights(self) -> tuple[int, ...]:
        return tuple(t.height for t in self.towers)

    def point_labels(self) -> list[tuple[int, int]]:
        """(tower index, level) for each point, in flattened order."""
        return [(j, k) for j, t in enumerate(self.towers) for k in range(t.height)]

    def with_heights(self, heights: Sequence[int]) -> "BlowupConfig":
        """The sub-configuration keeping the first heights[j] levels of tower j."""
        towers = [t.truncated(h) for t, h in zip(self.towers, heights) if h > 0]
        return BlowupConfig(self.field, towers, self.params, self.label)

    def prefix(self, count: int) -> "BlowupConfig":
        """The first ``count`` points in flattened (tower-major) order."""
        heights, left = [], count
        for t in self.towers:
            take = min(left, t.height)
            heights.append(take)
            left -= take
        return self.with_heights(heights)

    def __repr__(self):
        return f"BlowupConfig({self.field}, n={self.n}, towers={list(self.towers)})"

    # JSON ----------------------------------------------------------------------
    @classmethod
    def from_json(cls, data: Mapping, label: str | None = None) -> "BlowupConfig":
        try:
            char = int(data.get("characteristic", 0))
            ext = int(data.get("extension", 1))
            field = field_for(char, ext)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad field description: {exc}") from None
        params = {}
        for name, val in (data.get("params") or {}).items():
            params[name] = parse_scalar(field, val)
        towers = []
        for i, t in enumerate(data.get("towers", [])):
            try:
                base = ProjPoint.parse(field, t["base"], params)
                height = int(t.get("height", 1))
                text = t.get("carrier")
                carrier = HomForm.parse(text, field, params) if text else None
                towers.append(Tower(base, carrier, height, text))
            except KeyError as exc:
                raise ConfigError(f"tower {i}: missing field {exc}") from None
            except (PlaneError, ValueError) as exc:
                raise ConfigError(f"tower {i}: {exc}") from None
        return cls(field, towers, params, label or data.get("id"))

    @classmethod
    def load(cls, path) -> "BlowupConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        F = self.field
        out: dict = {
            "characteristic": F.char,
            "extension": F.degree,
            "towers": [],
        }
        for t in self.towers:
            entry = {"base": [F.fmt(c.v) for c in t.base.coords], "height": t.height}
            if t.carrier_text is not None:
                entry["carrier"] = t.carrier_text
            elif t.height > 1:
                entry["carrier"] = repr(t.carrier)
            out["towers"].append(entry)
        if self.params:
            out["params"] = {k: F.fmt(v.v) for k, v in sorted(self.params.items())}
        return out

    # linear systems ------------------------------------------------------------------
    def vanishing_system(self, d: int, prof: MultProfile) -> LinearSystem:
        if d < 0:
            raise ConfigError("negative degree")
        if d > MAX_SYSTEM_DEGREE:
            raise ConfigError(f"linear systems are limited to degree {MAX_SYSTEM_DEGREE}")
        if len(prof.levels) != len(self.towers) or any(len(l) != t.height for l, t in zip(prof.levels, self.towers)):
            raise ConfigError("profile shape does not match the towers")
        ncols = (d + 1) * (d + 2) // 2
        rows = []
        for t, mu in zip(self.towers, prof.levels):
            conds = conditions_for_profile(mu)
            if not conds:
                continue
            table = t.expansion_table(d, max(profile_bound(mu), 1))
            for ab in conds:
                row = table.get(ab)
                if row is not None:
                    rows.append(row)
        return LinearSystem(self.field, d, rows, ncols)

    def h0(self, d: int, m: Sequence[int]) -> int:
        """dim H^0 of dH - sum m_i E_i, with E_i total transforms."""
        if d < 0:
            return 0
        prof = MultProfile.from_flat(self, m)
        key = (d,) + tuple(tuple(conditions_for_profile(mu)) for mu in prof.levels)
        # identical condition sets give identical ranks
        if key not in self._rank_cache:
            if d > MAX_SYSTEM_DEGREE:
                raise ConfigError(f"linear systems are limited to degree {MAX_SYSTEM_DEGREE}")
            self._rank_cache[key] = self.vanishing_system(d, prof).kernel_dim
        return self._rank_cache[key]

    def incidence(self, G: HomForm) -> list[int]:
        """Flattened multiplicities of V(G)'s strict transforms at every point."""
        return [m for t in self.towers for m in t.multiplicities(G)]


def tower_make(base: ProjPoint, carrier: HomForm, height: int) -> Tower:
    return Tower(base, carrier, height)


def vanishing_system(cfg: BlowupConfig, d: int, prof: MultProfile) -> LinearSystem:
    return cfg.vanishing_system(d, prof)


# almost general position ------------------------------------------------------------


@dataclass
class AgpReport:
    ok: bool
    violations: list = dc_field(default_factory=list)
    routes: dict = dc_field(default_factory=dict)


class AgpRouteMismatch(AssertionError):
    pass


def candidate_lines(cfg: BlowupConfig) -> list[HomForm]:
    """Lines through two base points and tangent lines of towers of height >= 2.

    Every line meeting the configuration in two or more points is among them.
    """
    seen: dict = {}
    bases = [t.base for t in cfg.towers]
    for P, Q in itertools.combinations(bases, 2):
        L = normalize_form(line_through(P, Q))
        seen[_normalized_key(L)] = L
    for t in cfg.towers:
        if t.height >= 2:
            L = normalize_form(tangent_line(t.jet))
            seen[_normalized_key(L)] = L
    return [seen[k] for k in sorted(seen, key=repr)]


def _normalized_key(F: HomForm):
    """Hashable key of F up to scalars."""
    lead_exp, lead = F.poly.sorted_terms()[0]
    field = F.field
    inv = field.inv(lead)
    return tuple(sorted((e, field.key(field.mul(c, inv))) for e, c in F.poly.terms.items()))


def normalize_form(F: HomForm) -> HomForm:
    lead = F.poly.sorted_terms()[0][1]
    field = F.field
    inv = field.inv(lead)
    return HomForm(MultiPoly(field, VARS, {e: field.mul(c, inv) for e, c in F.poly.terms.items()}))


def conic_is_irreducible(Q: HomForm) -> bool:
    """A conic is irreducible iff it has no singular point over the closure.

    The singular points are the common zeros of the three (linear) first
    partials and of Q itself.
    """
    field = Q.field
    if Q.degree != 2:
        raise ValueError("not a conic")
    rows = []
    for i in range(3):
        row = [field.zero] * 3
        for e, c in Q.poly.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            k = e2[i]
            e2[i] -= 1
            j = next(v for v in range(3) if e2[v] > 0)
            row[j] = field.add(row[j], field.mul(field.from_int(k), c))
        rows.append(row)
    kernel = nullspace(rows, 3, field)
    if len(kernel) == 0:
        return True
    if len(kernel) >= 2:
        return False
    point = [FieldElem(field, c) for c in kernel[0]]
    return not Q.poly.evaluate(point).is_zero()


def prefix_selections(cfg: BlowupConfig, total: int):
    """Per-tower prefix lengths summing to ``total``."""
    ranges = [range(t.height + 1) for t in cfg.towers]
    for combo in itertools.product(*ranges):
        if sum(combo) == total:
            yield combo


def conics_through(cfg: BlowupConfig, total: int = 5) -> list[HomForm]:
    """Irreducible conics through some prefix selection of ``total`` points."""
    found: dict = {}
    for sel in prefix_selections(cfg, total):
        prof = MultProfile(tuple(tuple([1] * s + [0] * (t.height - s)) for s, t in zip(sel, cfg.towers)))
        system = cfg.vanishing_system(2, prof)
        if system.kernel_dim != 1:
            continue
        (Q,) = system.kernel_forms()
        if conic_is_irreducible(Q):
            found.setdefault(_normalized_key(Q), normalize_form(Q))
    return [found[k] for k in sorted(found, key=repr)]


def agp_incidence(cfg: BlowupConfig) -> list[str]:
    """Violations found by counting incidences with lines and conics."""
    violations = []
    for L in candidate_lines(cfg):
        inc = sum(cfg.incidence(L))
        if inc > 3:
            violations.append(f"line {L} contains {inc} points")
    if cfg.n >= 7:
        for Q in conics_through(cfg, 5):
            inc = sum(cfg.incidence(Q))
            if inc > 6:
                violations.append(f"conic {Q} contains {inc} points")
    return violations


def agp_check(cfg: BlowupConfig, routes: Sequence[str] = ("incidence", "sequential")) -> AgpReport:
    """Almost-general-position test; when both routes run they must agree."""
    from .negcurves import agp_sequential

    results = {}
    violations: list = []
    if "incidence" in routes:
        v = agp_incidence(cfg)
        results["incidence"] = not v
        violations.extend(v)
    if "sequential" in routes:
        v = agp_sequential(cfg)
        results["sequential"] = not v
        if "incidence" not in routes:
            violations.extend(v)
        elif v and not violations:
            violations.extend(v)
    if len(set(results.values())) > 1:
        raise AgpRouteMismatch(f"AGP routes disagree on {cfg}: {results}")
    return AgpReport(all(results.values()), violations, results)
