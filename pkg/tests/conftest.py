"""Shared fixtures and the acceptance summary printed after the run."""

from __future__ import annotations

import itertools
import math
from collections import Counter

import numpy as np
import pytest

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record_criterion():
    """Record one pass/fail line per acceptance criterion."""

    def record(number: int, passed: bool, detail: str) -> None:
        ACCEPTANCE[number] = (bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


def _perm_sign(p) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inv % 2 else 1


def wick_det_squared(n: int) -> int:
    """E[(det X)^2] for X with iid N(0,1) entries, by expanding both
    determinants and taking Gaussian moments entry by entry."""
    perms = list(itertools.permutations(range(n)))
    total = 0
    for s in perms:
        for t in perms:
            counts = Counter([(i, s[i]) for i in range(n)] + [(i, t[i]) for i in range(n)])
            moment = 1
            for c in counts.values():
                moment *= 0 if c % 2 else math.prod(range(c - 1, 0, -2))
            total += _perm_sign(s) * _perm_sign(t) * moment
    return total


def wick_abs_det_squared(n: int) -> int:
    """E[|det Z|^2] for Z = X + iY with X, Y iid N(0,1), using
    E[z^a conj(z)^b] = delta_ab a! 2^a."""
    perms = list(itertools.permutations(range(n)))
    total = 0
    for s in perms:
        for t in perms:
            a = Counter((i, s[i]) for i in range(n))
            b = Counter((i, t[i]) for i in range(n))
            if a != b:
                continue
            moment = math.prod(math.factorial(k) * 2**k for k in a.values())
            total += _perm_sign(s) * _perm_sign(t) * moment
    return total
