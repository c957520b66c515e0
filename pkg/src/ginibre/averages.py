"""Ensemble averages of multiplicative class functions.

GinOE averages are Pfaffians of the Gram-like matrix U built from the two
skew products (plus a column of one-sided moments when N is odd), divided
by C_N.  Two alternative routes, skew-orthogonal normalizations and the
parity determinant, must reproduce the same number.  GinUE averages are
determinants of the Hermitian Gram matrix divided by D_N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antisym import AntisymmetricMatrix, pfaffian_elimination
from .errors import PreconditionError, SingularNormalizationError, SingularPivotError, UsageError
from .inner import complex_gram, ginue_gram, one_sided_moments, real_gram
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .weights import CompleteFamily, PsiSpec

METHODS = ("pfaffian", "skew_orth", "parity_det", "ginue_det", "ginue_orth", "monte_carlo")

_LOG_OVERFLOW = 709.0


@dataclass(frozen=True)
class EnsembleAverage:
    """A deterministic ensemble average.

    ``est_error`` is the change under halving the quadrature panels; it does
    not see truncation of the integration domain, which the default cutoffs
    keep below 1e-12 relative up to n of about 20.
    """

    value: float
    method: str
    n: int
    psi: PsiSpec
    est_error: float
    sign: float = 1.0
    log_abs: float = 0.0

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "n": self.n,
            "psi": str(self.psi),
            "est_error": self.est_error,
            "sign": self.sign,
            "log_abs": self.log_abs,
        }


@dataclass(frozen=True)
class SkewOrthFamily:
    polys: CompleteFamily
    normalizations: tuple[float, ...]


def log_constant_c(n: int) -> float:
    if n < 1:
        raise UsageError("n must be at least 1")
    return n * (n + 1) / 4 * math.log(2.0) + sum(math.lgamma(k / 2) for k in range(1, n + 1))


def constant_c(n: int) -> float:
    """C_N = 2^{N(N+1)/4} prod_{k=1}^N Gamma(k/2)."""
    return _exp(log_constant_c(n))


def log_constant_d(n: int) -> float:
    if n < 1:
        raise UsageError("n must be at least 1")
    return n * math.log(2 * math.pi) + sum(k * math.log(2.0) + math.lgamma(k + 1) for k in range(n))


def constant_d(n: int) -> float:
    """Normalizer of the GinUE determinant formula.

    D_N = (2 pi)^N prod_{k=0}^{N-1} 2^k k!, the product of the monomial norms
    <z^k | z^k> = 2 pi 2^k k! for the weight exp(-|z|^2/2).
    """
    return _exp(log_constant_d(n))


def log_ginue_jpdf_constant(n: int) -> float:
    """Normalizer of |Delta|^2 prod exp(-|z|^2/2) over C^N, i.e. N! D_N."""
    return log_constant_d(n) + math.lgamma(n + 1)


def _exp(log_value: float) -> float:
    return math.exp(log_value) if log_value < _LOG_OVERFLOW else math.inf


def _ratio(sign, log_num: float, log_den: float) -> float:
    diff = log_num - log_den
    if sign == 0 or diff == -math.inf:
        return 0.0
    return float(np.real(sign)) * _exp(diff)


def _default_family(n: int, family: CompleteFamily | None) -> CompleteFamily:
    if family is None:
        return CompleteFamily.monomials(n)
    if family.size != n:
        raise UsageError(f"family has {family.size} polynomials, expected {n}")
    return family


def build_u_matrix(
    family: CompleteFamily, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> AntisymmetricMatrix:
    """The 2J x 2J antisymmetric matrix whose Pfaffian is C_N times the average.

    For odd N the extra last row/column holds the one-sided moments
    int phi P_j, with sign sgn(k - j).
    """
    n = family.size
    dim = 2 * ((n + 1) // 2)
    core = real_gram(family, psi, cfg) + complex_gram(family, psi, cfg)
    moments = one_sided_moments(family, psi, cfg) if dim > n else np.zeros(0)
    u = np.zeros((dim, dim), dtype=np.result_type(core, moments, float))
    u[:n, :n] = core
    if dim > n:
        u[:n, n] = moments
        u[n, :n] = -moments
    return AntisymmetricMatrix(u, exact=True)


def _pfaffian_average(n, psi, family, cfg) -> tuple[float, float, float]:
    pf = pfaffian_elimination(build_u_matrix(family, psi, cfg))
    return _ratio(pf.sign, pf.log_abs, log_constant_c(n)), float(np.real(pf.sign)), pf.log_abs


def average_ginoe(
    n: int,
    psi: PsiSpec,
    family: CompleteFamily | None = None,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> EnsembleAverage:
    """<Psi> over GinOE as Pf(U_P) / C_N, for any complete family P."""
    family = _default_family(n, family)
    value, sign, log_abs = _pfaffian_average(n, psi, family, cfg)
    coarse, _, _ = _pfaffian_average(n, psi, family, cfg.coarsened())
    return EnsembleAverage(value, "pfaffian", n, psi, abs(value - coarse), sign, log_abs - log_constant_c(n))


def skew_orthogonalize(n: int, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> SkewOrthFamily:
    """Skew-orthogonal monic family for even n by skew Gram-Schmidt.

    Works on monomial coefficients against the moment matrix G; each new
    pair is cleared against earlier pairs, then Q_{2j} has its degree
    2j-2 coefficient removed by subtracting a multiple of Q_{2j-1} (the one
    free direction of the construction).
    """
    if n % 2 or n < 2:
        raise UsageError("skew orthogonalization needs an even n >= 2")
    g = build_u_matrix(CompleteFamily.monomials(n), psi, cfg).entries
    return _skew_orthogonalize_from_gram(g)


def _skew_orthogonalize_from_gram(g: np.ndarray) -> SkewOrthFamily:
    n = g.shape[0]
    dtype = np.result_type(g, float)
    q = np.zeros((n, n), dtype=dtype)  # column k: coefficients of Q_{k+1}
    norms: list = []

    def form(a, b):
        return a @ g @ b

    for j in range(n // 2):
        odd = np.zeros(n, dtype=dtype)
        even = np.zeros(n, dtype=dtype)
        odd[2 * j] = 1.0
        even[2 * j + 1] = 1.0
        for i in range(j):
            qa, qb, m = q[:, 2 * i], q[:, 2 * i + 1], norms[i]
            odd = odd - form(odd, qb) / m * qa + form(odd, qa) / m * qb
            even = even - form(even, qb) / m * qa + form(even, qa) / m * qb
        even = even - even[2 * j] * odd
        m = form(odd, even)
        scale = np.max(np.abs(g[: 2 * j + 2, : 2 * j + 2]))
        if not abs(m) > 1e-10 * scale:
            raise SingularNormalizationError(
                f"normalization {j + 1} vanishes ({abs(m):.3g} against scale {scale:.3g})"
            )
        q[:, 2 * j], q[:, 2 * j + 1] = odd, even
        norms.append(m)
    family = CompleteFamily.from_coefficient_matrix(q)
    return SkewOrthFamily(family, tuple(norms))


def _skew_average(n, psi, cfg):
    so = skew_orthogonalize(n, psi, cfg)
    norms = np.asarray(so.normalizations)
    log_abs = float(np.sum(np.log(np.abs(norms))))
    sign = np.prod(norms / np.abs(norms))
    return _ratio(sign, log_abs, log_constant_c(n)), float(np.real(sign)), log_abs


def average_ginoe_skew(n: int, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EnsembleAverage:
    """<Psi> = prod of skew-orthogonal normalizations / C_N (even n)."""
    value, sign, log_abs = _skew_average(n, psi, cfg)
    coarse, _, _ = _skew_average(n, psi, cfg.coarsened())
    return EnsembleAverage(value, "skew_orth", n, psi, abs(value - coarse), sign, log_abs - log_constant_c(n))


def _parity_average(n, psi, cfg):
    u = build_u_matrix(CompleteFamily.monomials(n), psi, cfg).entries
    a = u[0::2, 1::2]
    sign, log_abs = np.linalg.slogdet(a)
    return _ratio(sign, float(log_abs), log_constant_c(n)), float(np.real(sign)), float(log_abs)


def average_ginoe_parity(n: int, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EnsembleAverage:
    """<Psi> = det(A) / C_N with A[j, k] = U[2j-1, 2k], for even psi.

    With psi even and monomials alternating in parity, U vanishes on entries
    of equal index parity and its Pfaffian reduces to this J x J determinant.
    """
    if psi.parity != "even":
        raise PreconditionError(f"parity route needs an even psi, got {psi} ({psi.parity})")
    value, sign, log_abs = _parity_average(n, psi, cfg)
    coarse, _, _ = _parity_average(n, psi, cfg.coarsened())
    return EnsembleAverage(value, "parity_det", n, psi, abs(value - coarse), sign, log_abs - log_constant_c(n))


def _ginue_det_average(n, psi, family, cfg):
    sign, log_abs = np.linalg.slogdet(ginue_gram(family, psi, cfg))
    return _ratio(sign, float(log_abs), log_constant_d(n)), float(np.real(sign)), float(log_abs)


def average_ginue(
    n: int,
    psi: PsiSpec,
    family: CompleteFamily | None = None,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> EnsembleAverage:
    """{Psi} over GinUE as det(W_P) / D_N for any complete family P."""
    family = _default_family(n, family)
    value, sign, log_abs = _ginue_det_average(n, psi, family, cfg)
    coarse, _, _ = _ginue_det_average(n, psi, family, cfg.coarsened())
    return EnsembleAverage(value, "ginue_det", n, psi, abs(value - coarse), sign, log_abs - log_constant_d(n))


def ginue_orthogonalize(n: int, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[CompleteFamily, np.ndarray]:
    """Monic family orthogonal for <.|.> and the norms <Q_n|Q_n>."""
    g = ginue_gram(CompleteFamily.monomials(n), psi, cfg)
    q = np.zeros((n, n), dtype=complex)
    norms = np.zeros(n, dtype=complex)
    scale = np.max(np.abs(g))
    for k in range(n):
        v = np.zeros(n, dtype=complex)
        v[k] = 1.0
        for m in range(k):
            v = v - (np.conj(q[:, m]) @ g @ v) / norms[m] * q[:, m]
        norms[k] = np.conj(v) @ g @ v
        if not abs(norms[k]) > 1e-12 * scale:
            raise SingularPivotError(f"norm of Q_{k + 1} vanishes for psi={psi}")
        q[:, k] = v
    return CompleteFamily.from_coefficient_matrix(q), norms


def _ginue_orth_average(n, psi, cfg):
    _, norms = ginue_orthogonalize(n, psi, cfg)
    log_abs = float(np.sum(np.log(np.abs(norms))))
    sign = np.prod(norms / np.abs(norms))
    return _ratio(sign, log_abs, log_constant_d(n)), float(np.real(sign)), log_abs


def average_ginue_orth(n: int, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EnsembleAverage:
    value, sign, log_abs = _ginue_orth_average(n, psi, cfg)
    coarse, _, _ = _ginue_orth_average(n, psi, cfg.coarsened())
    return EnsembleAverage(value, "ginue_orth", n, psi, abs(value - coarse), sign, log_abs - log_constant_d(n))


def compute_average(
    ensemble: str,
    n: int,
    psi: PsiSpec,
    method: str,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    family: CompleteFamily | None = None,
) -> EnsembleAverage:
    """Dispatch on (ensemble, method) for the deterministic routes."""
    if n < 1:
        raise UsageError("n must be at least 1")
    routes = {
        ("ginoe", "pfaffian"): lambda: average_ginoe(n, psi, family, cfg),
        ("ginoe", "skew_orth"): lambda: average_ginoe_skew(n, psi, cfg),
        ("ginoe", "parity_det"): lambda: average_ginoe_parity(n, psi, cfg),
        ("ginue", "ginue_det"): lambda: average_ginue(n, psi, family, cfg),
        ("ginue", "ginue_orth"): lambda: average_ginue_orth(n, psi, cfg),
    }
    try:
        route = routes[(ensemble, method)]
    except KeyError:
        raise UsageError(f"method {method!r} is not available for ensemble {ensemble!r}") from None
    if method == "skew_orth" and n % 2:
        raise PreconditionError("skew_orth route needs an even n")
    return route()
