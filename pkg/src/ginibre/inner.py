"""Skew-symmetric inner products for GinOE and the Hermitian one for GinUE.

Matrix builders evaluate every polynomial of a family at the quadrature
nodes once and form all entries with a few matrix products.  Skew matrices
are assembled as ``X - X.T`` so antisymmetry is exact in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import quadrature as quad
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .weights import CompleteFamily, MonicPolynomial, PsiSpec, WeightPhi, pair_weight


@dataclass(frozen=True)
class InnerProductValue:
    value: float | complex
    est_error: float


def _as_family(polys: Sequence[MonicPolynomial]) -> list[MonicPolynomial]:
    return list(polys.polys) if isinstance(polys, CompleteFamily) else list(polys)


def _is_real(polys: Sequence[MonicPolynomial]) -> bool:
    return all(p.is_real for p in polys)


def _values(polys: Sequence[MonicPolynomial], z: np.ndarray) -> np.ndarray:
    return np.stack([p(z) for p in polys]) if polys else np.zeros((0,) + np.shape(z))


def real_gram(polys, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Matrix of the real-line skew products <P_j, P_k>_R.

    The sign kernel is removed with the running integral F_j of phi P_j:
    the inner integral of phi P_j sgn(a2 - a1) over a1 is 2 F_j(a2) - F_j(inf).
    """
    polys = _as_family(polys)
    x, w = quad.line_rule(cfg)
    phi = WeightPhi(psi).on_real(x)
    fp = phi * _values(polys, x)
    running, totals = quad.cumulative_at_nodes(fp, cfg)
    kernel = 2.0 * running - totals[:, None]
    half = kernel @ (fp * w).T  # half[j, k] = int phi P_k (2 F_j - F_j(inf))
    return 0.5 * (half - half.T)


def complex_gram(polys, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Matrix of the conjugate-pair skew products <P_j, P_k>_C.

    Folding the lower half plane onto the upper one turns the sgn(Im) kernel
    into -2i times the integral over y > 0 of w(beta) times
    P_j(conj b) P_k(b) - P_j(b) P_k(conj b).
    """
    polys = _as_family(polys)
    x, y, w = quad.halfplane_rule(cfg)
    beta = x + 1j * y
    weight = quad._checked(pair_weight(psi, beta)) * w
    at_beta = _values(polys, beta)
    at_conj = _values(polys, np.conj(beta))
    half = (at_conj * weight) @ at_beta.T
    out = -2j * (half - half.T)
    if _is_real(polys):
        return out.real
    return out


def one_sided_moments(polys, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    polys = _as_family(polys)
    x, w = quad.line_rule(cfg)
    phi = WeightPhi(psi).on_real(x)
    return quad._checked(_values(polys, x) * phi) @ w


def ginue_gram(polys, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Matrix of <P_j | P_k> = int exp(-|z|^2/2) psi(z) conj(P_j(z)) P_k(z)."""
    polys = _as_family(polys)
    x, y, w = quad.plane_rule(cfg)
    z = x + 1j * y
    weight = quad._checked(np.exp(-0.5 * (x * x + y * y)) * psi(z)) * w
    vals = _values(polys, z)
    return (np.conj(vals) * weight) @ vals.T


def _with_error(fn, cfg: QuadratureConfig):
    fine = fn(cfg)
    coarse = fn(cfg.coarsened())
    return InnerProductValue(fine, float(abs(fine - coarse)))


def skew_real(p: MonicPolynomial, q: MonicPolynomial, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> InnerProductValue:
    return _with_error(lambda c: real_gram([p, q], psi, c)[0, 1], cfg)


def skew_complex(p: MonicPolynomial, q: MonicPolynomial, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> InnerProductValue:
    return _with_error(lambda c: complex_gram([p, q], psi, c)[0, 1], cfg)


def skew_total(p: MonicPolynomial, q: MonicPolynomial, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> InnerProductValue:
    a, b = skew_real(p, q, psi, cfg), skew_complex(p, q, psi, cfg)
    return InnerProductValue(a.value + b.value, a.est_error + b.est_error)


def one_sided_moment(p: MonicPolynomial, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG):
    return one_sided_moments([p], psi, cfg)[0]


def ginue_inner(p: MonicPolynomial, q: MonicPolynomial, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    return complex(ginue_gram([p, q], psi, cfg)[0, 1])


# Direct evaluations of the defining double integrals, kept independent of
# the reductions above; they serve as oracles in tests and `verify inner`.


def skew_real_direct(p: MonicPolynomial, q: MonicPolynomial, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Double integral with the sgn kernel, split exactly along the diagonal."""
    r = cfg.real_cutoff
    phi = WeightPhi(psi).on_real
    outer, w_outer = quad.line_rule(cfg)
    total = 0.0
    for a2, wa in zip(outer, w_outer):
        lo, wlo = quad.panel_rule(-r, float(a2), cfg.nodes_1d, cfg.panel_order)
        hi, whi = quad.panel_rule(float(a2), r, cfg.nodes_1d, cfg.panel_order)
        inner = (phi(hi) * p(hi)) @ whi - (phi(lo) * p(lo)) @ wlo
        total += wa * phi(a2) * q(a2) * inner
    return -float(total)


def skew_complex_direct(p: MonicPolynomial, q: MonicPolynomial, psi: PsiSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """Full-plane form with the textbook weight exp(-(b^2 + conj b^2)/2) erfc."""
    from scipy.special import erfc

    xmax, ymax = cfg.halfplane_cutoff
    x, wx = quad.panel_rule(-xmax, xmax, cfg.nodes_2d[0], cfg.panel_order)
    y_up, wy = quad.panel_rule(0.0, ymax, cfg.nodes_2d[1], cfg.panel_order)
    y = np.concatenate([-y_up[::-1], y_up])
    wy = np.concatenate([wy[::-1], wy])
    xx, yy = np.meshgrid(x, y, indexing="ij")
    b = xx + 1j * yy
    weight = np.exp(-0.5 * (b * b + np.conj(b) ** 2)) * erfc(np.sqrt(2) * np.abs(yy))
    weight = weight * psi(b) * psi(np.conj(b))
    integrand = weight * p(np.conj(b)) * q(b) * np.sign(yy)
    return complex(-2j * (wx @ integrand @ wy))
