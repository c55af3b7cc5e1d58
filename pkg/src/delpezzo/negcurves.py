"""The Picard lattice I_{1,n}, negative curve classes and their geometry.

A class is written (d; m_1, ..., m_n) for dH - sum m_i E_i, where E_i is the
total transform of the exceptional divisor over the i-th point (flattened
tower order).  The pairing is d d' - sum m_i m'_i and K = (-3; -1, ..., -1).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .cluster import BlowupConfig, MultProfile, candidate_lines, conics_through


class LatticeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class PicClass:
    d: int
    m: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.m)

    def dot(self, other: "PicClass") -> int:
        if other.n != self.n:
            raise LatticeError("classes live in different lattices")
        return self.d * other.d - sum(a * b for a, b in zip(self.m, other.m))

    def square(self) -> int:
        return self.dot(self)

    def dot_k(self) -> int:
        return -3 * self.d + sum(self.m)

    def __add__(self, other: "PicClass") -> "PicClass":
        return PicClass(self.d + other.d, tuple(a + b for a, b in zip(self.m, other.m)))

    def __sub__(self, other: "PicClass") -> "PicClass":
        return PicClass(self.d - other.d, tuple(a - b for a, b in zip(self.m, other.m)))

    def extend(self, value: int = 0) -> "PicClass":
        return PicClass(self.d, self.m + (value,))

    def to_list(self) -> list[int]:
        return [self.d, *self.m]

    def __str__(self):
        return f"({self.d}; {', '.join(str(x) for x in self.m)})"


def canonical_class(n: int) -> PicClass:
    return PicClass(-3, (-1,) * n)


def _sort_key(c: PicClass):
    return (c.d, tuple(-x for x in c.m))


def _brute_force(n: int, degrees, entries, square: int, kdot: int) -> tuple[PicClass, ...]:
    """All (d; m) with d in ``degrees``, m_i in ``entries``, C^2 and C.K prescribed."""
    if n == 0:
        grid = np.zeros((1, 0), dtype=np.int64)
    else:
        vals = np.array(entries, dtype=np.int64)
        grid = np.stack(np.meshgrid(*([vals] * n), indexing="ij"), axis=-1).reshape(-1, n)
    msum = grid.sum(axis=1)
    msq = (grid * grid).sum(axis=1)
    out = []
    for d in degrees:
        ok = (d * d - msq == square) & (-3 * d + msum == kdot)
        for row in grid[ok]:
            out.append(PicClass(int(d), tuple(int(x) for x in row)))
    return tuple(sorted(out, key=_sort_key))


def _check_n(n: int):
    if not 0 <= n <= 8:
        raise LatticeError("number of points must be between 0 and 8")


@lru_cache(maxsize=None)
def enum_roots(n: int) -> tuple[PicClass, ...]:
    """Classes with C^2 = -2 and C.K = 0: the full root system of K-perp.

    Degrees run over -3..3 and entries over -2..2, which contains every root
    for n <= 8 (negatives of the degree-0..3 roots included).
    """
    _check_n(n)
    out = _brute_force(n, range(-3, 4), range(-2, 3), -2, 0)
    for c in out:
        assert c.square() == -2 and c.dot_k() == 0
    return out


@lru_cache(maxsize=None)
def enum_exceptional(n: int) -> tuple[PicClass, ...]:
    """Classes with C^2 = -1 and C.K = -1 (degrees 0..6, entries -1..3)."""
    _check_n(n)
    out = _brute_force(n, range(0, 7), range(-1, 4), -1, -1)
    for c in out:
        assert c.square() == -1 and c.dot_k() == -1
    return out


# effectivity -------------------------------------------------------------------------


def h0_class(cfg: BlowupConfig, c: PicClass) -> int:
    if c.n != cfg.n:
        raise LatticeError("class does not match the configuration")
    if c.d < 0:
        return 0
    return cfg.h0(c.d, c.m)


def degree_zero_effective(cfg: BlowupConfig, c: PicClass) -> bool:
    """Effectivity of a degree-0 class from the tower structure alone.

    The effective degree-0 classes are the sums of strict transforms of
    exceptional curves.  Along a tower these are E_k - E_{k+1} and the last
    E_{h-1}, so (0; m) is effective iff each tower's partial sums of m are
    all <= 0.
    """
    if c.d != 0:
        raise ValueError("degree-0 class expected")
    prof = MultProfile.from_flat(cfg, c.m)
    return all(all(s <= 0 for s in itertools.accumulate(lv)) for lv in prof.levels)


def is_effective(cfg: BlowupConfig, c: PicClass, assume_nef: bool = True) -> bool:
    """Whether |c| is nonempty.  ``assume_nef`` allows the shortcut C.K <= 0,
    valid only once -K is known to be nef."""
    if c.d < 0:
        return False
    if c.d == 0:
        return degree_zero_effective(cfg, c)
    if assume_nef and c.dot_k() > 0:
        # -K is nef, so effective classes have C.K <= 0
        return False
    return h0_class(cfg, c) > 0


@dataclass
class NegCurveSet:
    roots: list[PicClass]
    exceptional: list[PicClass]
    matrix: list[list[int]] = dc_field(default_factory=list)
    nonmonotone: list[PicClass] = dc_field(default_factory=list)

    @property
    def classes(self) -> list[PicClass]:
        return self.roots + self.exceptional

    def root_matrix(self) -> list[list[int]]:
        return [[a.dot(b) for b in self.roots] for a in self.roots]

    def to_json(self) -> dict:
        return {
            "roots": [c.to_list() for c in self.roots],
            "exceptional": [c.to_list() for c in self.exceptional],
            "matrix": self.matrix,
        }


def irreducible_roots(cfg: BlowupConfig) -> list[PicClass]:
    """Classes of the (-2)-curves on the blow-up.

    Irreducible effective roots are the simple roots of the effective root
    system: a root C is reducible iff C - R is effective for a (-2)-curve R
    found earlier (every component of an effective root is a (-2)-curve, and
    degree-0 ones come first).
    """
    n = cfg.n
    if n == 0:
        return []
    labels = cfg.point_labels()
    found: list[PicClass] = []
    for c in enum_roots(n):
        if c.d == 0:
            # E_k - E_{k+1} along one tower; everything else in degree 0 splits
            neg = [i for i, x in enumerate(c.m) if x == -1]
            pos = [i for i, x in enumerate(c.m) if x == 1]
            (i,), (j,) = neg, pos
            if labels[i][0] == labels[j][0] and labels[j][1] == labels[i][1] + 1:
                found.append(c)
            continue
        if any(c.dot(r) < 0 for r in found):
            # either c is not effective or it contains r as a component
            continue
        if not is_effective(cfg, c):
            continue
        if any(r.d <= c.d and is_effective(cfg, c - r) for r in found):
            continue
        found.append(c)
    return found


def irreducible_exceptional(cfg: BlowupConfig, roots: list[PicClass]) -> list[PicClass]:
    """Classes of the (-1)-curves: always effective by Riemann-Roch, irreducible
    iff no (-2)-curve can be split off."""
    out = []
    for c in enum_exceptional(cfg.n):
        if any(c.dot(r) < 0 for r in roots):
            continue
        if any(r.d <= c.d and is_effective(cfg, c - r) for r in roots):
            continue
        out.append(c)
    return out


def effective_negative(cfg: BlowupConfig, check_agp: bool = False) -> NegCurveSet:
    if check_agp:
        from .cluster import agp_check

        rep = agp_check(cfg)
        if not rep.ok:
            raise LatticeError("configuration is not in almost general position: " + "; ".join(rep.violations))
    roots = irreducible_roots(cfg)
    exc = irreducible_exceptional(cfg, roots)
    allc = roots + exc
    matrix = [[a.dot(b) for b in allc] for a in allc]
    nonmono = [c for c in allc if c.d > 0 and not MultProfile.from_flat(cfg, c.m).is_monotone()]
    return NegCurveSet(roots, exc, matrix, nonmono)


def agp_sequential(cfg: BlowupConfig) -> list[str]:
    """Violations found by blowing up the points one at a time.

    Each new point must avoid every (-2)-curve of the surface obtained so
    far; R passes through the new point iff R - E_new is effective.
    """
    violations = []
    labels = cfg.point_labels()
    for j in range(1, cfg.n):
        before = cfg.prefix(j)
        after = cfg.prefix(j + 1)
        for r in irreducible_roots(before):
            if is_effective(after, r.extend(1), assume_nef=False):
                t, k = labels[j]
                violations.append(f"point {t},{k} lies on the (-2)-curve {r}")
    return violations


# ADE types ----------------------------------------------------------------------------


class NotADEError(ValueError):
    pass


def _components(adj: list[set[int]]) -> list[list[int]]:
    seen, comps = set(), []
    for s in range(len(adj)):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _classify(comp: list[int], adj: list[set[int]]) -> tuple[str, int]:
    k = len(comp)
    edges = sum(len(adj[v]) for v in comp) // 2
    if edges != k - 1:
        raise NotADEError("intersection graph has a cycle")
    degs = sorted(len(adj[v]) for v in comp)
    if max(degs, default=0) <= 2:
        return "A", k
    branch = [v for v in comp if len(adj[v]) >= 3]
    if len(branch) != 1 or len(adj[branch[0]]) != 3:
        raise NotADEError("intersection graph is not a Dynkin diagram")
    c = branch[0]
    arms = []
    for start in adj[c]:
        length, prev, cur = 1, c, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return "D", k
    if arms in ([1, 2, 2], [1, 2, 3], [1, 2, 4]):
        return "E", k
    raise NotADEError(f"branch arms {arms} are not of ADE shape")


def ade_type(s: NegCurveSet | list[PicClass]) -> str:
    roots = s.roots if isinstance(s, NegCurveSet) else list(s)
    if not roots:
        return "∅"
    n = len(roots)
    adj: list[set[int]] = [set() for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        x = roots[i].dot(roots[j])
        if x < 0 or x > 1:
            raise NotADEError(f"roots {roots[i]} and {roots[j]} meet with multiplicity {x}")
        if x == 1:
            adj[i].add(j)
            adj[j].add(i)
    counts = Counter(_classify(c, adj) for c in _components(adj))
    order = {"E": 0, "D": 1, "A": 2}
    parts = []
    for (letter, k), mult in sorted(counts.items(), key=lambda t: (order[t[0][0]], -t[0][1])):
        parts.append(f"{mult if mult > 1 else ''}{letter}_{k}")
    return "+".join(parts)


def dual_graph_dot(s: NegCurveSet, name: str = "negative_curves") -> str:
    lines = [f"graph {name} {{"]
    nodes = [("R", i, c) for i, c in enumerate(s.roots)] + [("L", i, c) for i, c in enumerate(s.exceptional)]
    for kind, i, c in nodes:
        style = 'style=filled, fillcolor=black, fontcolor=white' if kind == "R" else "style=solid"
        lines.append(f'  {kind}{i} [label="{c}", shape=circle, {style}];')
    for (ka, ia, a), (kb, ib, b) in itertools.combinations(nodes, 2):
        x = a.dot(b)
        if x > 0:
            label = f' [label="{x}"]' if x > 1 else ""
            lines.append(f"  {ka}{ia} -- {kb}{ib}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# geometric route in low degree ----------------------------------------------------------


def geometric_low_degree(cfg: BlowupConfig) -> dict[int, int]:
    """Numbers of (-1)-curves of degree 1 and 2 found by direct search.

    Degree 1: lines meeting the configuration in exactly two points.
    Degree 2: irreducible conics meeting it in exactly five points.
    """
    lines = sum(1 for L in candidate_lines(cfg) if sum(cfg.incidence(L)) == 2)
    conics = 0
    if cfg.n >= 5:
        conics = sum(1 for Q in conics_through(cfg, 5) if sum(cfg.incidence(Q)) == 5)
    return {1: lines, 2: conics}


def lattice_low_degree(s: NegCurveSet) -> dict[int, int]:
    return {d: sum(1 for c in s.exceptional if c.d == d) for d in (1, 2)}
