"""The classification cases as data, and a regression runner against the expected tables."""

from .records import CaseRecord, Corpus, admits, all_records, case_order, load_corpus, static_rows
from .runner import (
    CaseResult,
    CorollaryResult,
    RunReport,
    corollary_check,
    lineage_pairs,
    run_all,
    run_case,
)

__all__ = [
    "CaseRecord",
    "CaseResult",
    "CorollaryResult",
    "Corpus",
    "RunReport",
    "admits",
    "all_records",
    "case_order",
    "corollary_check",
    "lineage_pairs",
    "load_corpus",
    "run_all",
    "run_case",
    "static_rows",
]
