"""Recompute every case's invariants and diff them against the expected table rows."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..cluster import BlowupConfig, agp_check
from ..negcurves import ade_type, effective_negative
from ..vectorfields import (
    NON_REDUCED,
    SMOOTH,
    UNDETERMINED,
    StabFamily,
    check_family,
    family_tangent_dim,
    smoothness_verdict,
)
from .records import CaseRecord, Corpus, case_order, load_corpus


@dataclass
class CaseResult:
    id: str
    p: int
    computed: dict
    expected: dict
    diffs: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.diffs

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "p": self.p,
            "ok": self.ok,
            "computed": self.computed,
            "expected": {k: self.expected[k] for k in ("ade", "lines", "h0", "smooth") if k in self.expected},
            "diffs": self.diffs,
        }


@dataclass
class RunReport:
    p: int
    results: list[CaseResult]

    @property
    def passed(self) -> int:
        return sum(r.ok for r in self.results)

    @property
    def failed(self) -> list[CaseResult]:
        return [r for r in self.results if not r.ok]

    @property
    def undetermined(self) -> list[str]:
        return [r.id for r in self.results if r.computed.get("smooth") == UNDETERMINED]

    @property
    def ok(self) -> bool:
        return not self.failed and not self.undetermined

    def __getitem__(self, cid: str) -> CaseResult:
        for r in self.results:
            if r.id == cid:
                return r
        raise KeyError(cid)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "summary": {"cases": len(self.results), "passed": self.passed, "undetermined": self.undetermined},
            "cases": [r.to_json() for r in self.results],
        }

    def to_text(self) -> str:
        head = ("case", "(-2)-curves", "#lines", "h0", "dim", "smooth?", "family", "status")
        rows = [head]
        for r in self.results:
            c = r.computed
            smooth = {SMOOTH: "yes", NON_REDUCED: "no", UNDETERMINED: "?"}.get(c.get("smooth"), "-")
            fam = {True: "ok", False: "FAIL", None: "-"}[c.get("family_ok")]
            dim = c.get("reduced_dim_estimate")
            rows.append((r.id, c.get("ade", "-"), str(c.get("lines", "-")), str(c.get("h0", "-")),
                         "-" if dim is None else str(dim), smooth, fam, "pass" if r.ok else "DIFF"))
        widths = [max(len(row[i]) for row in rows) for i in range(len(head))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
        lines.append(f"p={self.p}: {self.passed}/{len(self.results)} pass")
        for r in self.failed:
            lines.append(f"  {r.id}: " + "; ".join(r.diffs))
        return "\n".join(lines)


def _expected_verdict(exp: dict) -> str:
    return SMOOTH if exp.get("smooth", True) else NON_REDUCED


def run_case(
    rec: CaseRecord,
    p: int,
    counts: bool = True,
    families: bool = True,
    qs: Sequence[int] | None = None,
    backend: str | None = None,
    alpha: tuple[int, str] | None = None,
) -> CaseResult:
    start = time.perf_counter()
    exp = rec.expected
    cfg = rec.config(p, alpha)
    computed: dict = {"degree": cfg.degree, "height": cfg.height}
    diffs: list[str] = []
    rep = agp_check(cfg)
    computed["agp"] = rep.ok
    if not rep.ok:
        diffs.append("configuration fails almost general position (corpus encoding bug): " + "; ".join(rep.violations))
        return CaseResult(rec.id, p, computed, exp, diffs, time.perf_counter() - start)
    neg = effective_negative(cfg)
    computed["ade"] = ade_type(neg)
    computed["lines"] = len(neg.exceptional)
    if p and counts:
        verdict = smoothness_verdict(cfg, qs, backend=backend)
    else:
        verdict = smoothness_verdict(cfg, skip_counts=True) if p else smoothness_verdict(cfg)
    computed["h0"] = verdict.h0
    if verdict.reduced_dim_estimate is not None or p == 0:
        computed["smooth"] = verdict.smooth
    if verdict.reduced_dim_estimate is not None:
        computed["reduced_dim_estimate"] = verdict.reduced_dim_estimate
        computed["point_counts"] = {str(q): n for q, n in sorted(verdict.point_counts.items())}
        computed["fit_qs"] = list(verdict.fit_qs)
        computed["fit_residual"] = round(verdict.fit.residual, 6)
        computed["primary_qs"] = list(verdict.primary_qs)
        computed["primary_dim"] = verdict.primary_fit.dim
        computed["primary_residual"] = round(verdict.primary_fit.residual, 6)
    for key in ("ade", "lines", "h0"):
        if computed[key] != exp[key]:
            diffs.append(f"{key}: computed {computed[key]}, expected {exp[key]}")
    if "smooth" in computed and computed["smooth"] != _expected_verdict(exp):
        diffs.append(f"smooth: computed {computed['smooth']}, expected {_expected_verdict(exp)}")
    if families and "family" in exp:
        fam = StabFamily.from_json(exp["family"])
        chk = check_family(cfg, fam)
        computed["family_ok"] = bool(chk)
        computed["family_tangent_dim"] = family_tangent_dim(fam, p)
        if not chk:
            diffs.append(f"family: {chk.reason}")
        if computed["family_tangent_dim"] != exp["h0"]:
            diffs.append(f"family tangent dim {computed['family_tangent_dim']} != h0 {exp['h0']}")
    return CaseResult(rec.id, p, computed, exp, diffs, time.perf_counter() - start)


def _run_one(args):
    rec, p, counts, families, qs, backend = args
    return run_case(rec, p, counts, families, qs, backend)


def run_all(
    p: int,
    counts: bool = True,
    families: bool = True,
    qs: Sequence[int] | None = None,
    backend: str | None = None,
    workers: int = 1,
    ids: Iterable[str] | None = None,
) -> RunReport:
    corpus = load_corpus(p)
    recs = [r for r in corpus if ids is None or r.id in set(ids)]
    jobs = [(r, p, counts, families, qs, backend) for r in recs]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    results.sort(key=lambda r: case_order(r.id))
    return RunReport(p, results)


@dataclass
class CorollaryResult:
    ok: bool
    p: int
    non_reduced: list[str]
    degrees: list[int]

    @property
    def boundary_degree(self) -> int | None:
        """Largest degree carrying a non-reduced case."""
        return max(self.degrees) if self.degrees else None


# degrees that must carry a non-reduced surface, by characteristic
COROLLARY_DEGREES = {2: {1, 2, 3, 4}, 3: {1, 2, 3}}


def corollary_check(p: int, report: RunReport | None = None, **kwargs) -> CorollaryResult:
    """Non-reduced verdicts appear in exactly the degrees the characteristic allows."""
    if p == 0:
        raise ValueError("corollary check needs a positive characteristic")
    report = report or run_all(p, **kwargs)
    bad = [r for r in report.results if r.computed.get("smooth") == NON_REDUCED]
    degrees = sorted({r.computed["degree"] for r in bad})
    want = COROLLARY_DEGREES.get(p, set())
    ok = set(degrees) == want and not report.undetermined
    return CorollaryResult(ok, p, [r.id for r in bad], degrees)


def _tower_key(t) -> tuple:
    if t.height == 1:
        return (t.base, 1)
    return (t.base, t.height, t.jet.u_index, tuple(t.jet.psi[1 : t.height]))


def _config_key(cfg: BlowupConfig) -> frozenset:
    return frozenset(_tower_key(t) for t in cfg.towers)


def lineage_pairs(corpus: Corpus, p: int) -> list[tuple[str, str]]:
    """(parent, child) pairs where the child adds one point to the parent's configuration."""
    configs = {r.id: r.config(p) for r in corpus}
    keys = {cid: _config_key(c) for cid, c in configs.items()}
    by_key: dict = {}
    for cid, k in keys.items():
        by_key.setdefault(k, []).append(cid)
    pairs = []
    for cid, cfg in configs.items():
        for i, t in enumerate(cfg.towers):
            rest = [u for j, u in enumerate(cfg.towers) if j != i]
            if t.height > 1:
                rest.append(t.truncated(t.height - 1))
            k = frozenset(_tower_key(u) for u in rest)
            for parent in by_key.get(k, []):
                if (parent, cid) not in pairs:
                    pairs.append((parent, cid))
    return sorted(pairs, key=lambda pc: (case_order(pc[0]), case_order(pc[1])))
