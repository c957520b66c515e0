"""Verification batteries behind ``ginibre verify``.

Each check runs a seeded random battery, records the largest residual and,
on failure, the first offending instance in a JSON-serializable form so it
can be replayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from .antisym import (
    AntisymmetricMatrix,
    laplace_det,
    pfaffian_combinatorial,
    pfaffian_elimination,
    pfaffian_sum_expansion,
    sign_matrix_pf,
    sign_product,
)
from .averages import average_ginoe, average_ginue
from .combinat import enumerate_increasing
from .inner import real_gram, complex_gram, ginue_gram, skew_complex, skew_real, skew_real_direct
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .weights import CompleteFamily, MonicPolynomial, PsiSpec, abs_delta_factorization_check

SUITES = ("pfaffian", "identities", "inner", "end2end")


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    max_residual: float
    tolerance: float
    cases: int
    failing_instance: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "check": self.name,
            "status": "pass" if self.passed else "fail",
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "cases": self.cases,
            "failing_instance": self.failing_instance,
        }


@dataclass
class _Battery:
    suite: str
    name: str
    tolerance: float
    worst: float = 0.0
    cases: int = 0
    failing: dict[str, Any] | None = field(default=None)

    def record(self, residual: float, instance: Callable[[], dict[str, Any]]) -> None:
        self.cases += 1
        residual = float(residual)
        if not residual <= self.tolerance and self.failing is None:
            self.failing = instance()
        if not residual <= self.worst:
            self.worst = residual

    def result(self) -> CheckResult:
        return CheckResult(self.suite, self.name, self.failing is None, self.worst, self.tolerance, self.cases, self.failing)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def random_antisymmetric(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.standard_normal((dim, dim))
    return a - a.T


def random_spectrum(rng: np.random.Generator, n: int, pairs: int, min_gap: float = 0.05):
    """Real points and pair representatives with all 2M+L points min_gap apart.

    Near-coincident points make the Vandermonde minors ill-conditioned, which
    would measure floating-point cancellation rather than the identity.
    """
    while True:
        alpha = 2.0 * rng.standard_normal(n - 2 * pairs)
        beta = 2.0 * (rng.standard_normal(pairs) + 1j * rng.standard_normal(pairs))
        pts = np.concatenate([alpha, beta, np.conj(beta)])
        gaps = np.abs(pts[:, None] - pts[None, :])
        np.fill_diagonal(gaps, np.inf)
        if pts.size < 2 or gaps.min() >= min_gap:
            return alpha, beta


def _matrix_payload(a: np.ndarray) -> dict[str, Any]:
    return {"matrix": np.asarray(a).tolist()}


def check_pfaffian(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    squared = _Battery("pfaffian", "pf_squared_equals_det", 1e-8)
    agree = _Battery("pfaffian", "elimination_matches_combinatorial", 1e-10)
    perm = _Battery("pfaffian", "permutation_congruence", 1e-10)
    for dim in range(2, 13, 2):
        for _ in range(5):
            a = random_antisymmetric(rng, dim)
            pe = pfaffian_elimination(a).value
            squared.record(_rel(pe**2, np.linalg.det(a)), lambda: _matrix_payload(a))
            agree.record(_rel(pe, pfaffian_combinatorial(a).value), lambda: _matrix_payload(a))
    for dim in range(2, 9, 2):
        for _ in range(5):
            a = random_antisymmetric(rng, dim)
            b = np.eye(dim)[rng.permutation(dim)]
            lhs = pfaffian_elimination(b @ a @ b.T).value
            rhs = np.linalg.det(b) * pfaffian_elimination(a).value
            perm.record(_rel(lhs, rhs), lambda: {**_matrix_payload(a), "permutation": b.tolist()})
    return [squared.result(), agree.result(), perm.result()]


def check_identities(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    laplace = _Battery("identities", "laplace_expansion", 1e-10)
    for dim in range(1, 7):
        for k in range(dim + 1):
            w = rng.standard_normal((dim, dim))
            maps = list(enumerate_increasing(k, dim))
            u = maps[int(rng.integers(len(maps)))]
            laplace.record(_rel(laplace_det(w, u), np.linalg.det(w)), lambda: {"matrix": w.tolist(), "rows": list(u.image)})

    signs = _Battery("identities", "sign_matrix_pfaffian", 0.0)
    for _ in range(200):
        size = int(rng.integers(0, 8))
        alpha = rng.standard_normal(size).tolist()
        signs.record(abs(sign_matrix_pf(alpha) - sign_product(alpha)), lambda: {"alpha": alpha})

    expansion = _Battery("identities", "pfaffian_sum_expansion", 1e-9)
    for dim in (2, 4, 6, 8):
        for _ in range(5):
            r, c = random_antisymmetric(rng, dim), random_antisymmetric(rng, dim)
            direct = pfaffian_elimination(r + c).value
            expansion.record(
                _rel(pfaffian_sum_expansion(r, c), direct), lambda: {"r": r.tolist(), "c": c.tolist()}
            )

    factor = _Battery("identities", "abs_vandermonde_factorization", 1e-9)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(0, n // 2 + 1))
        alpha, beta = random_spectrum(rng, n, m)
        family = CompleteFamily.random(n, rng)
        direct, expanded = abs_delta_factorization_check(alpha, beta, family)
        factor.record(
            _rel(expanded, direct),
            lambda: {"alpha": alpha.tolist(), "beta": [[b.real, b.imag] for b in beta]},
        )
    return [laplace.result(), signs.result(), expansion.result(), factor.result()]


def check_inner(seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    one = PsiSpec()
    p0, p1 = MonicPolynomial.monomial(0), MonicPolynomial.monomial(1)
    closed = _Battery("inner", "closed_forms", 1e-7)
    closed.record(_rel(skew_real(p0, p1, one, cfg).value, 2 * math.sqrt(math.pi)), lambda: {"product": "real"})
    closed.record(
        _rel(skew_complex(p0, p1, one, cfg).value, 2 * math.sqrt(math.pi) * (math.sqrt(2) - 1)),
        lambda: {"product": "complex"},
    )

    antisym = _Battery("inner", "antisymmetry", 0.0)
    for psi in (one, PsiSpec("pow", power=2), PsiSpec("shift", shift=0.5)):
        family = CompleteFamily.random(5, rng)
        for gram in (real_gram, complex_gram):
            g = gram(family, psi, cfg)
            antisym.record(np.max(np.abs(g + g.T)), lambda: {"psi": str(psi)})

    direct = _Battery("inner", "reduced_matches_double_integral", 1e-7)
    for psi in (one, PsiSpec("pow", power=2)):
        for _ in range(3):
            dp, dq = (int(d) for d in rng.integers(0, 7, size=2))
            p = MonicPolynomial(tuple(rng.uniform(-2, 2, dp)))
            q = MonicPolynomial(tuple(rng.uniform(-2, 2, dq)))
            reduced = real_gram([p, q], psi, cfg)[0, 1]
            ref = skew_real_direct(p, q, psi, cfg)
            scale = max(abs(ref), 1.0)
            direct.record(abs(reduced - ref) / scale, lambda: {"psi": str(psi), "p": list(p.coefficients), "q": list(q.coefficients)})

    positive = _Battery("inner", "ginue_positive", 0.0)
    for n in range(1, 5):
        family = CompleteFamily.random(n, rng)
        diag = np.diag(ginue_gram(family, one, cfg))
        positive.record(float(np.sum(diag.real <= 0)), lambda: {"n": n})
    return [closed.result(), antisym.result(), direct.result(), positive.result()]


def check_end2end(cfg: QuadratureConfig = DEFAULT_CONFIG) -> list[CheckResult]:
    one = PsiSpec()
    ginoe = _Battery("end2end", "ginoe_normalization", 1e-6)
    for n in range(1, 9):
        ginoe.record(abs(average_ginoe(n, one, cfg=cfg).value - 1.0), lambda: {"ensemble": "ginoe", "n": n})
    ginue = _Battery("end2end", "ginue_normalization", 1e-6)
    for n in range(1, 7):
        ginue.record(abs(average_ginue(n, one, cfg=cfg).value - 1.0), lambda: {"ensemble": "ginue", "n": n})
    return [ginoe.result(), ginue.result()]


def run_suites(suites: Iterable[str], seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> list[CheckResult]:
    out: list[CheckResult] = []
    for suite in suites:
        if suite == "pfaffian":
            out += check_pfaffian(seed)
        elif suite == "identities":
            out += check_identities(seed)
        elif suite == "inner":
            out += check_inner(seed, cfg)
        elif suite == "end2end":
            out += check_end2end(cfg)
        else:
            raise ValueError(f"unknown suite {suite!r}")
    return out
