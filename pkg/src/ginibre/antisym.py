"""Antisymmetric matrices, Pfaffians and Pfaffian identities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .combinat import IncreasingMap, complement, enumerate_increasing, enumerate_pi, sign_of_map
from .errors import ParityError, SizeError, UsageError

COMBINATORIAL_MAX_DIM = 12


class AntisymmetricMatrix:
    """Dense square matrix with ``A == -A.T``.

    With ``exact=True`` antisymmetry must hold to the last bit (integer or
    hand-entered input); otherwise a residual of ``1e-12 * max|A|`` is
    accepted and the stored entries are re-antisymmetrized.
    """

    __slots__ = ("entries",)

    def __init__(self, entries, exact: bool = False):
        a = np.array(entries)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise SizeError(f"expected a square matrix, got shape {a.shape}")
        if a.dtype == object or a.dtype.kind in "biu":
            exact = True
        if exact:
            if not np.array_equal(a, -a.T):
                raise UsageError("matrix is not antisymmetric")
        else:
            a = a.astype(np.result_type(a.dtype, float))
            scale = float(np.max(np.abs(a))) if a.size else 0.0
            if np.max(np.abs(a + a.T), initial=0.0) > 1e-12 * scale:
                raise UsageError("matrix is not antisymmetric within 1e-12 relative")
            a = 0.5 * (a - a.T)
        a.setflags(write=False)
        self.entries = a

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __add__(self, other: "AntisymmetricMatrix") -> "AntisymmetricMatrix":
        return AntisymmetricMatrix(self.entries + _entries(other))

    def __repr__(self) -> str:
        return f"AntisymmetricMatrix(dim={self.dim})"


MatrixLike = Union[AntisymmetricMatrix, np.ndarray, Sequence[Sequence[float]]]


def _entries(a: MatrixLike) -> np.ndarray:
    if isinstance(a, AntisymmetricMatrix):
        return a.entries
    return AntisymmetricMatrix(a).entries


@dataclass(frozen=True)
class PfaffianResult:
    """Pfaffian value together with an overflow-safe polar form.

    ``value == sign * exp(log_abs)`` whenever the value is representable;
    ``sign`` is a unit-modulus phase (+-1 for real input) and ``log_abs`` is
    ``-inf`` for a vanishing Pfaffian.
    """

    value: complex | float
    sign: complex | float
    log_abs: float
    method: str


def _require_even(n: int) -> None:
    if n % 2:
        raise ParityError(f"Pfaffian undefined for odd dimension {n}")


def _from_value(value, method: str) -> PfaffianResult:
    if value == 0:
        return PfaffianResult(value, 0, -math.inf, method)
    mag = abs(value)
    return PfaffianResult(value, value / mag, math.log(mag), method)


def pfaffian_combinatorial(a: MatrixLike) -> PfaffianResult:
    """Pfaffian as a signed sum over the pairings of {1..2J}.

    The sum over the constrained permutation set with its 1/J! prefactor
    collapses onto unordered pairings: the J! orderings of the pairs of one
    pairing contribute identical terms with identical (even) sign.  Exact for
    integer and object input.
    """
    m = _entries(a)
    n = m.shape[0]
    _require_even(n)
    if n > COMBINATORIAL_MAX_DIM:
        raise SizeError(f"combinatorial Pfaffian capped at dim {COMBINATORIAL_MAX_DIM}, got {n}")
    rows = m.tolist()

    def expand(idx: tuple[int, ...]):
        if not idx:
            return 1
        first, rest = idx[0], idx[1:]
        total = 0
        for pos, other in enumerate(rest):
            entry = rows[first][other]
            if entry == 0:
                continue
            sub = rest[:pos] + rest[pos + 1 :]
            term = entry * expand(sub)
            total = total - term if pos % 2 else total + term
        return total

    return _from_value(expand(tuple(range(n))), "combinatorial")


def pfaffian_permutation_sum(a: MatrixLike) -> PfaffianResult:
    """Literal (1/J!) sum over the constrained permutation set; for small dims."""
    m = _entries(a)
    n = m.shape[0]
    _require_even(n)
    if n > 8:
        raise SizeError("literal permutation sum is capped at dim 8")
    j = n // 2
    rows = m.tolist()
    total = 0
    for sigma in enumerate_pi(j):
        term = sigma.sign
        for i in range(1, j + 1):
            term = term * rows[sigma(2 * i - 1) - 1][sigma(2 * i) - 1]
        total += term
    if isinstance(total, int):
        value = total // math.factorial(j)
    else:
        value = total / math.factorial(j)
    return _from_value(value, "permutation_sum")


def pfaffian_elimination(a: MatrixLike) -> PfaffianResult:
    """Pfaffian by skew-symmetric Gaussian elimination with pivoting.

    At step k the largest-magnitude entry below the diagonal in column k is
    swapped into position k+1 (symmetric row/column swap, one sign flip),
    then the 2x2 pivot block is used to clear row and column k beyond k+1.
    The Pfaffian is the product of the pivots; it is accumulated as a phase
    and a log-magnitude so large matrices do not overflow.
    """
    m = np.array(_entries(a), dtype=np.result_type(_entries(a).dtype, float))
    n = m.shape[0]
    _require_even(n)
    is_complex = np.iscomplexobj(m)
    phase: complex | float = 1.0
    log_abs = 0.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(m[k + 1 :, k])))
        if kp != k + 1:
            m[[k + 1, kp], :] = m[[kp, k + 1], :]
            m[:, [k + 1, kp]] = m[:, [kp, k + 1]]
            phase = -phase
        pivot = m[k, k + 1]
        if pivot == 0:
            zero = 0j if is_complex else 0.0
            return PfaffianResult(zero, 0, -math.inf, "elimination")
        log_abs += math.log(abs(pivot))
        phase = phase * (pivot / abs(pivot))
        if k + 2 < n:
            tau = m[k, k + 2 :] / pivot
            col = m[k + 2 :, k + 1].copy()
            m[k + 2 :, k + 2 :] += np.outer(tau, col) - np.outer(col, tau)
    if not is_complex:
        phase = float(np.real(phase))
    with np.errstate(over="ignore"):
        value = phase * math.exp(log_abs) if log_abs < 709.0 else phase * math.inf
    return PfaffianResult(value, phase, log_abs, "elimination")


def pfaffian(a: MatrixLike, method: str = "elimination") -> PfaffianResult:
    if method == "elimination":
        return pfaffian_elimination(a)
    if method == "combinatorial":
        return pfaffian_combinatorial(a)
    raise UsageError(f"unknown Pfaffian method {method!r}")


def minor(a: MatrixLike, u: IncreasingMap) -> AntisymmetricMatrix:
    """Principal minor on the rows and columns in the image of ``u``."""
    m = _entries(a)
    if u.image and u.image[-1] > m.shape[0]:
        raise SizeError(f"index {u.image[-1]} out of range for dim {m.shape[0]}")
    idx = u.to_zero_based()
    return AntisymmetricMatrix(m[np.ix_(idx, idx)], exact=True)


def general_minor(w: np.ndarray, rows: IncreasingMap, cols: IncreasingMap) -> np.ndarray:
    return np.asarray(w)[np.ix_(rows.to_zero_based(), cols.to_zero_based())]


def laplace_det(w: np.ndarray, u: IncreasingMap) -> complex | float:
    """Determinant by generalized Laplace expansion along the rows in ``u``."""
    w = np.asarray(w)
    n = w.shape[0]
    if w.shape != (n, n) or u.n != n:
        raise SizeError("Laplace expansion needs a square matrix matching the map")
    uc = complement(u)
    total = 0
    for t in enumerate_increasing(u.k, n):
        tc = complement(t)
        total += (
            sign_of_map(t)
            * _det(general_minor(w, u, t))
            * _det(general_minor(w, uc, tc))
        )
    return sign_of_map(u) * total


def _det(m: np.ndarray):
    return np.linalg.det(m) if m.size else 1.0


def pfaffian_sum_expansion(r: MatrixLike, c: MatrixLike):
    """Pf(R + C) expanded over complementary pairs of principal minors."""
    rm, cm = _entries(r), _entries(c)
    if rm.shape != cm.shape:
        raise SizeError(f"shape mismatch {rm.shape} vs {cm.shape}")
    n = rm.shape[0]
    _require_even(n)
    total = 0
    for half in range(n // 2 + 1):
        for u in enumerate_increasing(2 * half, n):
            pr = pfaffian_elimination(minor(rm, complement(u))).value
            pc = pfaffian_elimination(minor(cm, u)).value
            total += sign_of_map(u) * pr * pc
    return total


def sign_matrix(alpha: Sequence[float]) -> np.ndarray:
    """Integer antisymmetric sign matrix of a real point set, padded to even size.

    Entries are sgn(alpha_k - alpha_j) among the points; an odd count gets one
    extra row and column filled with sgn(k - j).
    """
    alpha = [float(x) for x in alpha]
    size = len(alpha)
    dim = 2 * ((size + 1) // 2)
    t = np.zeros((dim, dim), dtype=np.int64)
    for j in range(dim):
        for k in range(dim):
            if j < size and k < size:
                t[j, k] = int(np.sign(alpha[k] - alpha[j]))
            else:
                t[j, k] = int(np.sign(k - j))
    return t


def sign_matrix_pf(alpha: Sequence[float], padded_dim: int | None = None) -> int:
    t = sign_matrix(alpha)
    if padded_dim is not None and padded_dim != t.shape[0]:
        raise SizeError(f"padded dimension must be {t.shape[0]}, got {padded_dim}")
    return int(pfaffian_combinatorial(AntisymmetricMatrix(t, exact=True)).value)


def sign_product(alpha: Sequence[float]) -> int:
    out = 1
    for j in range(len(alpha)):
        for k in range(j + 1, len(alpha)):
            out *= int(np.sign(alpha[k] - alpha[j]))
    return out


def read_matrix(path: str | Path) -> np.ndarray:
    """Read the plain-text dense format: size on the first line, then rows.

    Entries may be real or complex (Python literal syntax, e.g. ``1+2j``).
    """
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise UsageError(f"{path}: empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise UsageError(f"{path}: first line must be the matrix size") from None
    if len(lines) - 1 != n:
        raise UsageError(f"{path}: expected {n} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        tokens = ln.replace(",", " ").split()
        if len(tokens) != n:
            raise UsageError(f"{path}: row {ln!r} does not have {n} entries")
        try:
            rows.append([complex(tok) for tok in tokens])
        except ValueError as exc:
            raise UsageError(f"{path}: {exc}") from None
    m = np.array(rows, dtype=complex).reshape(n, n)
    if not np.any(m.imag):
        m = m.real.copy()
    return m


def write_matrix(path: str | Path, a: MatrixLike) -> None:
    m = np.asarray(a)
    out = [str(m.shape[0])]
    for row in m:
        out.append(" ".join(_fmt(x) for x in row))
    Path(path).write_text("\n".join(out) + "\n")


def _fmt(x) -> str:
    if np.iscomplexobj(x) and np.imag(x) != 0:
        return f"{complex(x)!r}".strip("()")
    return format(float(np.real(x)), ".17g")
