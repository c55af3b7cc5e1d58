"""Command-line entry point: ``delpezzo analyze|tables|classes|dot``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .cluster import BlowupConfig, ConfigError, agp_check
from .corpus import corollary_check, load_corpus, run_all
from .corpus.records import SUPPORTED_CHARS
from .exactalg import PolyParseError
from .negcurves import ade_type, dual_graph_dot, effective_negative, enum_exceptional, enum_roots
from .vectorfields import NON_REDUCED, SMOOTH, FamilyError, StabFamily, check_family, smoothness_verdict
from .vectorfields.pointcount import split_prime_power

EXIT_OK, EXIT_DIFF, EXIT_INPUT = 0, 1, 2

COMMANDS = ("analyze", "tables", "classes", "dot")
FORMATS = ("text", "json", "dot")


class InputError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    input: str | None = None
    char: int | None = None
    qs: tuple[int, ...] | None = None
    fmt: str = "text"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise InputError(f"unknown format {self.fmt!r}")

    def check_qs(self, p: int) -> None:
        """Every q must be a power of the active characteristic."""
        if not self.qs:
            return
        if p == 0:
            raise InputError("--q needs a positive characteristic")
        for q in self.qs:
            try:
                base, _ = split_prime_power(q)
            except ValueError:
                base = None
            if base != p:
                raise InputError(f"q={q} is not a power of the characteristic {p}")


def _parse_qs(text: str | None) -> tuple[int, ...] | None:
    if not text:
        return None
    try:
        qs = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InputError(f"--q expects a comma separated list of integers, got {text!r}") from None
    if len(qs) < 2 or len(set(qs)) != len(qs):
        raise InputError("--q needs at least two distinct field sizes")
    return qs


def _json_dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load_config(conf: CliConfig, case: str | None) -> BlowupConfig:
    if case:
        p = 0 if conf.char is None else conf.char
        try:
            data = load_corpus(p)[case].config_json(p)
        except KeyError:
            raise InputError(f"no corpus case {case!r} in characteristic {p}") from None
        except ValueError as exc:
            raise InputError(str(exc)) from None
    elif conf.input:
        data = _read_json(conf.input)
        if not isinstance(data, dict):
            raise InputError(f"{conf.input}: top level must be an object")
    else:
        raise InputError("give a configuration file or --case")
    if conf.char is not None:
        data = dict(data, characteristic=conf.char)
    try:
        return BlowupConfig.from_json(data)
    except (ConfigError, PolyParseError, ValueError) as exc:
        raise InputError(f"{conf.input or case}: {exc}") from None


def _verdict_word(smooth: str) -> str:
    return {SMOOTH: "smooth", NON_REDUCED: "NON-REDUCED"}.get(smooth, "undetermined")


def cmd_analyze(conf: CliConfig, case: str | None = None, families: str | None = None,
                skip_counts: bool = False) -> tuple[int, str]:
    cfg = _load_config(conf, case)
    conf.check_qs(cfg.field.char)
    out: dict = {"degree": cfg.degree, "height": cfg.height, "characteristic": cfg.field.char}
    agp = agp_check(cfg)
    out["agp"] = {"ok": agp.ok, "violations": list(agp.violations)}
    status = EXIT_OK
    if agp.ok:
        neg = effective_negative(cfg)
        out["ade"] = ade_type(neg)
        out["lines"] = len(neg.exceptional)
        rep = smoothness_verdict(cfg, conf.qs, skip_counts=skip_counts)
        out.update(rep.to_json())
        if rep.smooth not in (SMOOTH, NON_REDUCED):
            status = EXIT_DIFF
        if families:
            fams = _read_json(families)
            fams = fams if isinstance(fams, list) else [fams]
            res = []
            for i, entry in enumerate(fams):
                try:
                    chk = check_family(cfg, StabFamily.from_json(entry))
                except (FamilyError, PolyParseError, ValueError) as exc:
                    raise InputError(f"{families}: family {i}: {exc}") from None
                res.append({"fixes": chk.fixes, "closed": chk.closed, "complete": chk.complete,
                            "ok": bool(chk), "reason": chk.reason})
                if not chk:
                    status = EXIT_DIFF
            out["families"] = res
    else:
        status = EXIT_DIFF
    if conf.fmt == "json":
        return status, _json_dump(out)
    lines = [f"degree {cfg.degree}, height {cfg.height}, char {cfg.field.char}"]
    if not agp.ok:
        lines.append("AGP violated:")
        lines.extend(f"  {v}" for v in agp.violations)
        return status, "\n".join(lines) + "\n"
    lines.append("AGP ok")
    summary = f"deg {cfg.degree}, {out['ade']}, {out['lines']} lines, h0={out['h0']}"
    if "reduced_dim_estimate" in out:
        summary += f", dim={out['reduced_dim_estimate']}"
    lines.append(summary + ", " + _verdict_word(out["smooth"]))
    if out.get("point_counts"):
        lines.append("point counts: " + ", ".join(f"q={q}: {n}" for q, n in out["point_counts"].items()))
    for i, r in enumerate(out.get("families", [])):
        lines.append(f"family {i}: " + ("verified" if r["ok"] else f"FAILED ({r['reason']})"))
    return status, "\n".join(lines) + "\n"


def cmd_tables(conf: CliConfig, skip_counts: bool = False, families: bool = True) -> tuple[int, str]:
    p = 0 if conf.char is None else conf.char
    if p not in SUPPORTED_CHARS:
        raise InputError(f"--char must be one of {SUPPORTED_CHARS}")
    conf.check_qs(p)
    report = run_all(p, counts=not skip_counts, families=families, qs=conf.qs)
    status = EXIT_OK if report.ok else EXIT_DIFF
    cor = None
    if p and not skip_counts:
        cor = corollary_check(p, report)
        if not cor.ok:
            status = EXIT_DIFF
    if conf.fmt == "json":
        data = report.to_json()
        if cor is not None:
            data["corollary"] = {"ok": cor.ok, "non_reduced": cor.non_reduced, "degrees": cor.degrees,
                                 "boundary_degree": cor.boundary_degree}
        return status, _json_dump(data)
    text = report.to_text()
    if cor is not None:
        where = ", ".join(map(str, cor.degrees)) or "none"
        text += f"\ncorollary {'ok' if cor.ok else 'FAILED'}: non-reduced cases in degrees {where}"
    return status, text + "\n"


def cmd_classes(n: int) -> tuple[int, str]:
    if not 0 <= n <= 8:
        raise InputError("--n must lie in 0..8")
    roots, exc = enum_roots(n), enum_exceptional(n)
    data = {
        "n": n,
        "roots": [c.to_list() for c in roots],
        "exceptional": [c.to_list() for c in exc],
        "counts": {"roots": len(roots), "exceptional": len(exc)},
    }
    return EXIT_OK, _json_dump(data)


def cmd_dot(conf: CliConfig, case: str | None = None) -> tuple[int, str]:
    cfg = _load_config(conf, case)
    name = "case_" + (case or cfg.label or "config")
    name = "".join(ch if ch.isalnum() or ch == "_" else "_" for ch in name)
    return EXIT_OK, dual_graph_dot(effective_negative(cfg), name)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="delpezzo", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_q=True):
        p.add_argument("--char", type=int, help="characteristic (overrides the file)")
        if with_q:
            p.add_argument("--q", help="comma separated field sizes for point counting")
        p.add_argument("--out", help="write output here instead of stdout")

    a = sub.add_parser("analyze", help="invariants of one configuration")
    a.add_argument("path", nargs="?")
    a.add_argument("--case", help="use a corpus case instead of a file")
    a.add_argument("--families", help="JSON file with one family or a list of them")
    a.add_argument("--skip-counts", action="store_true")
    a.add_argument("--format", choices=("text", "json"), default="text")
    common(a)

    t = sub.add_parser("tables", help="recompute the classification corpus")
    t.add_argument("--skip-counts", action="store_true")
    t.add_argument("--no-families", action="store_true")
    t.add_argument("--format", choices=("text", "json"), default="text")
    common(t)

    c = sub.add_parser("classes", help="roots and exceptional classes of I_{1,n}")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--out")

    d = sub.add_parser("dot", help="dual graph of the negative curves as DOT")
    d.add_argument("path", nargs="?")
    d.add_argument("--case")
    common(d, with_q=False)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "classes":
            status, text = cmd_classes(args.n)
        else:
            fmt = "dot" if args.command == "dot" else args.format
            conf = CliConfig(args.command, getattr(args, "path", None), args.char,
                             _parse_qs(getattr(args, "q", None)), fmt)
            if args.command == "analyze":
                status, text = cmd_analyze(conf, args.case, args.families, args.skip_counts)
            elif args.command == "tables":
                status, text = cmd_tables(conf, args.skip_counts, not args.no_families)
            else:
                status, text = cmd_dot(conf, args.case)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(text, args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
