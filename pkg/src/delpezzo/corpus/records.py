"""Case records of the classification and their instantiation in a given characteristic."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterator

from ..cluster import BlowupConfig
from ..exactalg import field_for

TABLE_FILES = ("table1", "table3", "table4", "table5", "table6")
STATIC_FILE = "table2_static"
SUPPORTED_CHARS = (0, 2, 3, 5)


def admits(constraint: str, p: int) -> bool:
    """Whether a characteristic constraint (any, =2, !=2, !=2,3, ...) allows p."""
    c = constraint.replace(" ", "")
    if c == "any":
        return True
    if c.startswith("!="):
        return p not in {int(x) for x in c[2:].split(",")}
    if c.startswith("="):
        return p == int(c[1:])
    raise ValueError(f"unknown characteristic constraint {constraint!r}")


@dataclass(frozen=True)
class CaseRecord:
    id: str
    char_constraint: str
    towers: tuple
    expected: dict
    table: str
    alpha_excluded: tuple | None = None

    @property
    def degree(self) -> int:
        return 9 - sum(int(t.get("height", 1)) for t in self.towers)

    @property
    def height(self) -> int:
        return max((int(t.get("height", 1)) for t in self.towers), default=0)

    @property
    def has_alpha(self) -> bool:
        return self.alpha_excluded is not None

    @classmethod
    def from_json(cls, data: dict, table: str) -> "CaseRecord":
        excl = data.get("alpha_excluded")
        return cls(
            data["id"],
            data["char"],
            tuple(data["towers"]),
            dict(data["expected"]),
            table,
            tuple(excl) if excl is not None else None,
        )

    def to_json(self) -> dict:
        out = {"id": self.id, "char": self.char_constraint, "towers": list(self.towers)}
        if self.alpha_excluded is not None:
            out["alpha_excluded"] = list(self.alpha_excluded)
        out["expected"] = self.expected
        return out

    def admits(self, p: int) -> bool:
        return admits(self.char_constraint, p)

    def alpha_choices(self, p: int, count: int = 2) -> list[tuple[int, str]]:
        """Admissible (extension degree, alpha) pairs, smallest first.

        The prime field is searched before its quadratic extension; over Q
        the candidates are 0, 1, 2, ...
        """
        if not self.has_alpha:
            return []
        out: list[tuple[int, str]] = []
        seen = set()
        for ext in (1, 2) if p else (1,):
            F = field_for(p, ext)
            bad = {F.parse(x) for x in self.alpha_excluded}
            pool = F.elements() if p else (F.from_int(k) for k in range(len(bad) + count + 1))
            for a in pool:
                key = F.fmt(a)
                if a in bad or (ext > 1 and F.degree > 1 and _in_prime_field(F, a)):
                    continue
                if key not in seen:
                    seen.add(key)
                    out.append((ext, key))
                if len(out) == count:
                    return out
        return out

    def config_json(self, p: int, alpha: tuple[int, str] | None = None) -> dict:
        data: dict = {"id": self.id, "characteristic": p, "extension": 1, "towers": [dict(t) for t in self.towers]}
        if self.has_alpha:
            choice = alpha or self.alpha_choices(p, 1)[0]
            data["extension"] = choice[0]
            data["params"] = {"alpha": choice[1]}
        return data

    def config(self, p: int, alpha: tuple[int, str] | None = None) -> BlowupConfig:
        if not self.admits(p):
            raise ValueError(f"case {self.id} does not exist in characteristic {p}")
        return BlowupConfig.from_json(self.config_json(p, alpha), label=self.id)


def _in_prime_field(F, a) -> bool:
    return any(F.from_int(k) == a for k in range(F.char))


@dataclass
class Corpus:
    records: list[CaseRecord] = field(default_factory=list)

    def __iter__(self) -> Iterator[CaseRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, cid: str) -> CaseRecord:
        for r in self.records:
            if r.id == cid:
                return r
        raise KeyError(cid)


def _read(name: str) -> dict:
    text = resources.files("delpezzo.corpus").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def all_records() -> list[CaseRecord]:
    out = []
    for name in TABLE_FILES:
        out.extend(CaseRecord.from_json(c, name) for c in _read(name)["cases"])
    return out


def static_rows() -> list[dict]:
    return list(_read(STATIC_FILE)["cases"])


def case_order(cid: str):
    """Tables run from degree 9 down; letters within a degree."""
    return (-int(cid[:-1]), cid[-1])


def load_corpus(p: int) -> Corpus:
    if p not in SUPPORTED_CHARS:
        raise ValueError(f"characteristic {p} not supported; use one of {SUPPORTED_CHARS}")
    recs = [r for r in all_records() if r.admits(p)]
    recs.sort(key=lambda r: case_order(r.id))
    return Corpus(recs)
