import functools

import pytest
from hypothesis import HealthCheck, settings

from delpezzo.corpus import load_corpus, run_all

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@functools.lru_cache(maxsize=None)
def corpus_report(p: int, counts: bool = True):
    """One corpus run per (p, counts), shared by every test module."""
    return run_all(p, counts=counts, families=True, workers=1)


@functools.lru_cache(maxsize=None)
def corpus(p: int):
    return load_corpus(p)


@functools.lru_cache(maxsize=None)
def case_config(p: int, cid: str):
    return corpus(p)[cid].config(p)


@pytest.fixture
def cfg_of():
    return case_config


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
