"""Class-function seeds, the eigenvalue weight, polynomial families, Vandermonde."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import erfc, erfcx

from .antisym import general_minor
from .combinat import IncreasingMap, complement, enumerate_increasing, sign_of_map
from .errors import ClassificationError, UsageError

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class MonicPolynomial:
    """Monic polynomial; ``coefficients[i]`` multiplies gamma**i, i < degree."""

    coefficients: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) if np.iscomplexobj(c) else float(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    @classmethod
    def monomial(cls, degree: int) -> "MonicPolynomial":
        return cls((0.0,) * degree)

    @property
    def is_real(self) -> bool:
        return all(not isinstance(c, complex) or c.imag == 0 for c in self.coefficients)

    def full_coefficients(self) -> np.ndarray:
        """Coefficients for powers 0..degree, leading 1 included."""
        c = np.array([*self.coefficients, 1.0])
        return np.real(c).astype(float) if self.is_real else c.astype(complex)

    def __call__(self, z):
        z = np.asarray(z)
        out = np.ones_like(z, dtype=np.result_type(z, float))
        for c in reversed(self.coefficients):
            out = out * z + c
        return out


@dataclass(frozen=True)
class CompleteFamily:
    """N monic polynomials with deg P_n = n - 1."""

    polys: tuple[MonicPolynomial, ...]

    def __post_init__(self) -> None:
        polys = tuple(self.polys)
        object.__setattr__(self, "polys", polys)
        for n, p in enumerate(polys):
            if p.degree != n:
                raise UsageError(f"polynomial {n + 1} has degree {p.degree}, expected {n}")

    @property
    def size(self) -> int:
        return len(self.polys)

    @property
    def is_real(self) -> bool:
        return all(p.is_real for p in self.polys)

    @classmethod
    def monomials(cls, n: int) -> "CompleteFamily":
        return cls(tuple(MonicPolynomial.monomial(d) for d in range(n)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, low: float = -2.0, high: float = 2.0) -> "CompleteFamily":
        return cls(tuple(MonicPolynomial(tuple(rng.uniform(low, high, d))) for d in range(n)))

    @classmethod
    def from_coefficient_matrix(cls, coeffs: np.ndarray) -> "CompleteFamily":
        """Column ``n`` holds the coefficients of P_{n+1} (upper unitriangular)."""
        coeffs = np.asarray(coeffs)
        return cls(tuple(MonicPolynomial(tuple(coeffs[:d, d])) for d in range(coeffs.shape[1])))

    def coefficient_matrix(self) -> np.ndarray:
        n = self.size
        dtype = float if self.is_real else complex
        c = np.zeros((n, n), dtype=dtype)
        for d, p in enumerate(self.polys):
            c[: d + 1, d] = p.full_coefficients()
        return c

    def values(self, z) -> np.ndarray:
        """Array of shape (N, *z.shape) with P_n evaluated at z."""
        z = np.asarray(z)
        return np.stack([p(z) for p in self.polys]) if self.polys else np.zeros((0,) + z.shape)


_KINDS = ("one", "pow", "shift", "poly", "modsq")


@dataclass(frozen=True)
class PsiSpec:
    """The scalar seed psi of a multiplicative class function.

    Every kind has real coefficients, so psi(conj z) == conj(psi(z)):

    ``one``      psi = 1
    ``pow:n``    psi = z**n
    ``shift:s``  psi = s - z
    ``poly:c0,c1,...``  psi = c0 + c1 z + ...
    ``modsq``    psi = |z|**2 (not holomorphic; for |det|**2 averages)
    """

    kind: str = "one"
    power: int = 0
    shift: float = 0.0
    coeffs: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise UsageError(f"unknown psi kind {self.kind!r}")
        if self.kind == "pow" and self.power < 0:
            raise UsageError("pow exponent must be non-negative")
        if self.kind == "poly" and not self.coeffs:
            raise UsageError("poly needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @classmethod
    def parse(cls, text: str) -> "PsiSpec":
        text = text.strip()
        head, _, arg = text.partition(":")
        try:
            if head == "one" and not arg:
                return cls("one")
            if head == "modsq" and not arg:
                return cls("modsq")
            if head == "pow":
                return cls("pow", power=int(arg))
            if head == "shift":
                return cls("shift", shift=float(arg))
            if head == "poly":
                return cls("poly", coeffs=tuple(float(c) for c in arg.split(",")))
        except ValueError:
            pass
        raise UsageError(f"cannot parse psi {text!r}; expected one, pow:n, shift:z, poly:c0,c1,... or modsq")

    def __str__(self) -> str:
        if self.kind == "pow":
            return f"pow:{self.power}"
        if self.kind == "shift":
            return f"shift:{self.shift!r}"
        if self.kind == "poly":
            return "poly:" + ",".join(repr(c) for c in self.coeffs)
        return self.kind

    def polynomial_coefficients(self) -> np.ndarray | None:
        """Low-to-high coefficients, or None for the non-holomorphic kind."""
        if self.kind == "one":
            return np.array([1.0])
        if self.kind == "pow":
            c = np.zeros(self.power + 1)
            c[-1] = 1.0
            return c
        if self.kind == "shift":
            return np.array([self.shift, -1.0])
        if self.kind == "poly":
            return np.array(self.coeffs)
        return None

    @property
    def parity(self) -> str:
        """'even', 'odd' or 'none' according to psi(-z) = +-psi(z)."""
        c = self.polynomial_coefficients()
        if c is None:
            return "even"
        if not np.any(c[1::2]):
            return "even"
        if not np.any(c[0::2]):
            return "odd"
        return "none"

    def __call__(self, z):
        z = np.asarray(z)
        if self.kind == "modsq":
            return (z.real**2 + z.imag**2) if np.iscomplexobj(z) else z * z
        c = self.polynomial_coefficients()
        out = np.full_like(z, c[-1], dtype=np.result_type(z, float))
        for a in c[-2::-1]:
            out = out * z + a
        return out

    def pair_product(self, beta):
        """psi(beta) * psi(conj beta), which is |psi(beta)|**2 for every kind."""
        v = self(np.asarray(beta, dtype=complex))
        return (v * np.conj(v)).real


@dataclass(frozen=True)
class WeightPhi:
    """phi(z) = exp(-z^2/2) * sqrt(erfc(sqrt2 |Im z|)) * psi(z)."""

    psi: PsiSpec = PsiSpec()

    def __call__(self, gamma):
        return eval_phi(self, gamma)

    def on_real(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-0.5 * x * x) * self.psi(x)

    def pair(self, beta):
        return pair_weight(self.psi, beta)


def eval_phi(w: WeightPhi | PsiSpec, gamma):
    """Weight phi at complex points.

    Uses exp(-z^2/2) sqrt(erfc(t)) = exp(-|z|^2/2 - i x y) sqrt(erfcx(t)) with
    t = sqrt2 |y|, which stays bounded where exp(y^2/2) alone would overflow.
    """
    psi = w.psi if isinstance(w, WeightPhi) else w
    g = np.asarray(gamma, dtype=complex)
    x, y = g.real, g.imag
    base = np.exp(-0.5 * (x * x + y * y) - 1j * x * y) * np.sqrt(erfcx(SQRT2 * np.abs(y)))
    return base * psi(g)


def eval_phi_naive(psi: PsiSpec, gamma):
    """Textbook form; overflows for large |Im z|.  Used only as a test oracle."""
    g = np.asarray(gamma, dtype=complex)
    return np.exp(-0.5 * g * g) * np.sqrt(erfc(SQRT2 * np.abs(g.imag))) * psi(g)


def pair_weight(psi: PsiSpec, beta):
    """phi(beta) phi(conj beta) = exp(-x^2-y^2) erfcx(sqrt2 |y|) |psi(beta)|^2."""
    b = np.asarray(beta, dtype=complex)
    x, y = b.real, b.imag
    return np.exp(-(x * x + y * y)) * erfcx(SQRT2 * np.abs(y)) * psi.pair_product(b)


def vandermonde_delta(gamma: Sequence[complex]):
    """prod_{m<n} (gamma_n - gamma_m)."""
    g = np.asarray(gamma)
    out = np.ones((), dtype=np.result_type(g, float))
    for n in range(len(g)):
        for m in range(n):
            out = out * (g[n] - g[m])
    return out[()]


def vandermonde_matrix(gamma: Sequence[complex], family: CompleteFamily | None = None) -> np.ndarray:
    """Matrix with entry [j, k] = P_k(gamma_j); monomials by default."""
    g = np.asarray(gamma)
    if family is None:
        family = CompleteFamily.monomials(len(g))
    if family.size != len(g):
        raise UsageError("family size must equal the number of points")
    return family.values(g).T if len(g) else np.zeros((0, 0))


def vandermonde_det(gamma: Sequence[complex], family: CompleteFamily | None = None):
    v = vandermonde_matrix(gamma, family)
    return np.linalg.det(v) if v.size else 1.0


def ordered_spectrum(alpha: Sequence[float], beta: Sequence[complex]) -> np.ndarray:
    """(conj b1, b1, ..., conj bM, bM, a1, ..., aL)."""
    beta = np.asarray(beta, dtype=complex).ravel()
    if np.any(beta.imag == 0):
        raise ClassificationError("complex-pair representatives must have nonzero imaginary part")
    out = np.empty(2 * beta.size + len(alpha), dtype=complex)
    out[0 : 2 * beta.size : 2] = np.conj(beta)
    out[1 : 2 * beta.size : 2] = beta
    out[2 * beta.size :] = np.asarray(alpha, dtype=float)
    return out


def abs_delta_factorization_check(
    alpha: Sequence[float], beta: Sequence[complex], family: CompleteFamily | None = None
) -> tuple[float, complex]:
    """Return |Delta(alpha, beta)| and its split minor expansion.

    The expansion runs over increasing maps t of size 2M: the beta rows
    against the columns of t, times the alpha rows against the complementary
    columns, with the phase (-i)^M prod sgn Im(beta) and the sign product of
    the real points.  Both numbers agree when the identity holds.
    """
    gamma = ordered_spectrum(alpha, beta)
    n = gamma.size
    m = len(beta)
    w = vandermonde_matrix(gamma, family)
    direct = float(abs(vandermonde_delta(gamma)))
    rows_b = IncreasingMap.identity(2 * m, n)
    rows_a = complement(rows_b)
    beta_phase = (-1j) ** m * np.prod(np.sign(np.imag(beta)))
    alpha_sign = 1
    for j in range(len(alpha)):
        for k in range(j + 1, len(alpha)):
            alpha_sign *= int(np.sign(alpha[k] - alpha[j]))
    total = 0j
    for t in enumerate_increasing(2 * m, n):
        wb = general_minor(w, rows_b, t)
        wa = general_minor(w, rows_a, complement(t))
        db = np.linalg.det(wb) if wb.size else 1.0
        da = np.linalg.det(wa) if wa.size else 1.0
        total += sign_of_map(t) * (db * beta_phase) * (da * alpha_sign)
    return direct, complex(total)
