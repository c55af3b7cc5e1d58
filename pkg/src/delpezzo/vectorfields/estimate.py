"""Reduced dimension of the stabilizer from point counts, and the smoothness verdict.

A connected split group over F_q has q^u * prod_i (q^(a_i) - 1) points,
with u the unipotent part and a_i the degrees of its reductive part (1 for
each torus factor, 2 and 3 for PGL_2- and PGL_3-type pieces); its dimension
is u + sum a_i.  The stabilizer is that times c components.  The best such
model over two field sizes gives the dimension.  The plain slope
log(N2/N1) / log(q2/q1) is kept for reference: at small q the (q^a - 1)
factors bias it.

The component count c itself may depend on q: an etale mu_3 inside a torus
has 3 points over F_4 but 1 over F_8.  Over F_p^k such counts depend on k
through the Frobenius action, and in every case met here only on the parity
of k.  When the primary pair (p^2, p^3) is flagged, the verdict is taken
from the same-parity pair (p, p^3) instead; both fits are kept in the
report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..cluster import BlowupConfig
from .conditions import h0_vector_fields
from .pointcount import default_qs, split_prime_power, stabilizer_point_count

MAX_FALLBACK_Q = 125

RESIDUAL_GUARD = 0.2
MAX_DIM = 8

SMOOTH = "smooth"
NON_REDUCED = "non_reduced"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class DimFit:
    dim: int
    degrees: tuple[int, ...]
    components: float
    residual: float
    naive: int
    naive_residual: float

    @property
    def flagged(self) -> bool:
        return self.residual > RESIDUAL_GUARD


def _models():
    """(dim, reductive degrees) for every shape of dimension <= MAX_DIM."""
    out = []
    for r1 in range(MAX_DIM + 1):
        for r2 in range(3):
            for r3 in range(2):
                red = (1,) * r1 + (2,) * r2 + (3,) * r3
                for u in range(MAX_DIM + 1 - sum(red)):
                    out.append((u + sum(red), u, red))
    return out


_MODELS = _models()


def _model(q: int, u: int, degrees: Sequence[int]) -> int:
    out = q**u
    for a in degrees:
        out *= q**a - 1
    return out


def fit_counts(counts: Mapping[int, int]) -> DimFit:
    """Fit the two largest field sizes in ``counts``."""
    qs = sorted(counts)
    if len(qs) < 2:
        raise ValueError("at least two field sizes are needed")
    q1, q2 = qs[-2], qs[-1]
    n1, n2 = counts[q1], counts[q2]
    if n1 <= 0 or n2 <= 0:
        raise ValueError("point counts must be positive (the identity always stabilizes)")
    p1, _ = split_prime_power(q1)
    p2, _ = split_prime_power(q2)
    if p1 != p2:
        raise ValueError("field sizes must be powers of one prime")
    ratio = n2 / n1
    slope = math.log(ratio) / math.log(q2 / q1)
    naive = max(0, round(slope))
    naive_res = abs(ratio - (q2 / q1) ** naive) / (q2 / q1) ** naive
    best = None
    for d, u, red in _MODELS:
        c1 = n1 / _model(q1, u, red)
        c2 = n2 / _model(q2, u, red)
        res = abs(c2 - c1) / c1
        # exact fits first, then integral and few components, then smaller shapes
        key = (round(res, 9), round(abs(c1 - round(c1)), 9), round(c1), d, len(red), red)
        if best is None or key < best[0]:
            best = (key, c1, res, d, red)
    _, c1, res, d, red = best
    return DimFit(d, red, c1, res, naive, naive_res)


def reduced_dim_estimate(
    cfg: BlowupConfig,
    qs: Sequence[int] | None = None,
    counts: Mapping[int, int] | None = None,
    backend: str | None = None,
) -> DimFit:
    qs = sorted(qs or default_qs(cfg))
    if len(qs) < 2 or len(set(qs)) != len(qs):
        raise ValueError("need at least two distinct field sizes")
    counts = dict(counts or {})
    for q in qs[-2:]:
        if q not in counts:
            counts[q] = stabilizer_point_count(cfg, q, backend)
    return fit_counts({q: counts[q] for q in qs[-2:]})


def fallback_qs(cfg: BlowupConfig) -> tuple[int, int] | None:
    """Same-parity pair (p, p^3) for configurations over a prime field."""
    p = cfg.field.char
    if p == 0 or cfg.field.degree != 1 or p**3 > MAX_FALLBACK_Q:
        return None
    return (p, p**3)


@dataclass
class StabilizerReport:
    h0: int
    reduced_dim_estimate: int | None = None
    smooth: str = SMOOTH
    point_counts: dict[int, int] = field(default_factory=dict)
    fit: DimFit | None = None
    fit_qs: tuple[int, int] | None = None
    primary_fit: DimFit | None = None
    primary_qs: tuple[int, int] | None = None

    def __post_init__(self):
        if self.reduced_dim_estimate is not None and self.smooth != UNDETERMINED:
            if self.reduced_dim_estimate > self.h0:
                raise ValueError("reduced dimension exceeds the tangent space dimension")

    @property
    def used_fallback(self) -> bool:
        return self.fit_qs is not None and self.fit_qs != self.primary_qs

    def to_json(self) -> dict:
        out = {"h0": self.h0, "smooth": self.smooth}
        if self.reduced_dim_estimate is not None:
            out["reduced_dim_estimate"] = self.reduced_dim_estimate
        if self.point_counts:
            out["point_counts"] = {str(q): n for q, n in sorted(self.point_counts.items())}
        if self.fit is not None:
            out["fit"] = {
                "qs": list(self.fit_qs),
                "reductive_degrees": list(self.fit.degrees),
                "residual": round(self.fit.residual, 6),
                "naive_slope": self.fit.naive,
            }
        if self.used_fallback:
            out["primary_fit"] = {
                "qs": list(self.primary_qs),
                "dim": self.primary_fit.dim,
                "residual": round(self.primary_fit.residual, 6),
            }
        return out


def _verdict(fit: DimFit, h0: int) -> str:
    if fit.flagged or fit.dim > h0:
        return UNDETERMINED
    return SMOOTH if fit.dim == h0 else NON_REDUCED


def smoothness_verdict(
    cfg: BlowupConfig,
    qs: Sequence[int] | None = None,
    counts: Mapping[int, int] | None = None,
    backend: str | None = None,
    skip_counts: bool = False,
    fallback: bool = True,
) -> StabilizerReport:
    """h0, reduced dimension and verdict.  Char 0 is smooth without probing."""
    h0 = h0_vector_fields(cfg)
    if cfg.field.char == 0 or skip_counts:
        verdict = SMOOTH if cfg.field.char == 0 else UNDETERMINED
        return StabilizerReport(h0, None, verdict)
    qs = tuple(sorted(qs or default_qs(cfg))[-2:])
    counts = dict(counts or {})

    def fit_pair(pair):
        for q in pair:
            if q not in counts:
                counts[q] = stabilizer_point_count(cfg, q, backend)
        return fit_counts({q: counts[q] for q in pair})

    primary = fit_pair(qs)
    fit, used = primary, qs
    alt = fallback_qs(cfg) if fallback else None
    if primary.flagged and alt is not None and alt != qs:
        fit, used = fit_pair(alt), alt
    return StabilizerReport(h0, fit.dim, _verdict(fit, h0), dict(sorted(counts.items())), fit, used, primary, qs)
