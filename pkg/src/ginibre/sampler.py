"""Monte Carlo oracle: Ginibre sampling, spectrum classification, JPDF.

Randomness comes from Philox streams keyed by (seed, chunk index).  Chunks
have a fixed size, so an estimate depends only on (seed, samples) and not
on the number of worker threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import erfcx

from . import quadrature as quad
from .averages import log_constant_c
from .errors import ClassificationError, NumericalError, UsageError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .weights import PsiSpec, SQRT2

CHUNK_SIZE = 1 << 16
DEFAULT_THRESHOLD = 1e-8
MAX_SKIP_RATE = 1e-3
THREADS_ENV = "GINIBRE_THREADS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _generator(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream])))


def sample_ginoe(n: int, seed: int) -> np.ndarray:
    """n x n matrix of i.i.d. standard normals."""
    return _generator(seed).standard_normal((n, n))


def sample_ginue(n: int, seed: int) -> np.ndarray:
    """n x n complex matrix, real and imaginary parts i.i.d. N(0, 1)."""
    g = _generator(seed).standard_normal((2, n, n))
    return g[0] + 1j * g[1]


@dataclass(frozen=True)
class Spectrum:
    reals: tuple[float, ...]
    pairs: tuple[complex, ...]

    @property
    def n(self) -> int:
        return len(self.reals) + 2 * len(self.pairs)

    @property
    def L(self) -> int:
        return len(self.reals)

    @property
    def M(self) -> int:
        return len(self.pairs)


def classify_spectrum(eigenvalues: Sequence[complex], threshold: float = DEFAULT_THRESHOLD) -> Spectrum:
    """Split a real matrix's eigenvalues into reals and conjugate pairs."""
    ev = np.asarray(eigenvalues, dtype=complex).ravel()
    real_mask = np.abs(ev.imag) <= threshold * (1.0 + np.abs(ev))
    upper = sorted(ev[~real_mask & (ev.imag > 0)], key=lambda z: (z.real, z.imag))
    lower = list(ev[~real_mask & (ev.imag < 0)])
    if len(upper) != len(lower):
        raise ClassificationError(
            f"{len(upper)} upper vs {len(lower)} lower eigenvalues; threshold {threshold} too small?"
        )
    for z in upper:
        k = int(np.argmin([abs(np.conj(w) - z) for w in lower]))
        w = lower.pop(k)
        if abs(np.conj(w) - z) > math.sqrt(threshold) * (1.0 + abs(z)):
            raise ClassificationError(f"no conjugate partner for eigenvalue {z}")
    reals = tuple(sorted(float(z.real) for z in ev[real_mask]))
    return Spectrum(reals, tuple(complex(z) for z in upper))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    skipped: int = 0
    products: np.ndarray | None = field(default=None, repr=False, compare=False)
    real_counts: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
            "skipped": self.skipped,
        }


def _chunk_eigenvalues(ensemble: str, n: int, size: int, seed: int, chunk: int):
    rng = _generator(seed, chunk)
    if ensemble == "ginoe":
        x = rng.standard_normal((size, n, n))
    else:
        g = rng.standard_normal((2, size, n, n))
        x = g[0] + 1j * g[1]
    try:
        return np.linalg.eigvals(x), np.ones(size, dtype=bool)
    except np.linalg.LinAlgError:
        ev = np.zeros((size, n), dtype=complex)
        ok = np.ones(size, dtype=bool)
        for i in range(size):
            try:
                ev[i] = np.linalg.eigvals(x[i])
            except np.linalg.LinAlgError:
                ok[i] = False
        return ev, ok


def _ginoe_products(ev: np.ndarray, psi: PsiSpec, threshold: float):
    """Per-sample products over classified spectra, real counts and validity."""
    ev = np.asarray(ev, dtype=complex)
    real_mask = np.abs(ev.imag) <= threshold * (1.0 + np.abs(ev))
    upper = ~real_mask & (ev.imag > 0)
    lower = ~real_mask & (ev.imag < 0)
    paired = upper.sum(axis=1) == lower.sum(axis=1)
    vals = psi(ev)
    prod = np.prod(np.where(real_mask, vals.real, 1.0), axis=1) * np.prod(
        np.where(upper, (vals * np.conj(vals)).real, 1.0), axis=1
    )
    raw = np.prod(vals, axis=1)
    scale = np.prod(np.abs(vals), axis=1)
    if np.any(np.abs(raw.imag) > 1e-8 * scale + 1e-300):
        raise NumericalError("product over a real spectrum has a non-negligible imaginary part")
    return prod, real_mask.sum(axis=1), paired


def _run_chunks(ensemble, n, psi, samples, seed, threshold, workers):
    if ensemble not in ("ginoe", "ginue"):
        raise UsageError(f"unknown ensemble {ensemble!r}")
    if samples < 1:
        raise UsageError("samples must be positive")
    sizes = [min(CHUNK_SIZE, samples - start) for start in range(0, samples, CHUNK_SIZE)]

    def work(chunk: int):
        ev, ok = _chunk_eigenvalues(ensemble, n, sizes[chunk], seed, chunk)
        if ensemble == "ginoe":
            prod, real_count, paired = _ginoe_products(ev, psi, threshold)
            ok = ok & paired
        else:
            prod = np.prod(psi(ev), axis=1).real
            real_count = np.zeros(len(prod), dtype=int)
        return prod, real_count, ok

    workers = workers or default_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    else:
        parts = [work(c) for c in range(len(sizes))]
    prod = np.concatenate([p[0] for p in parts])
    counts = np.concatenate([p[1] for p in parts])
    ok = np.concatenate([p[2] for p in parts])
    skipped = int((~ok).sum())
    if skipped > MAX_SKIP_RATE * samples:
        raise NumericalError(f"{skipped} of {samples} samples failed (limit {MAX_SKIP_RATE:.1%})")
    return prod, counts, ok, skipped


def mc_average(
    ensemble: str,
    n: int,
    psi: PsiSpec,
    samples: int,
    seed: int,
    threshold: float = DEFAULT_THRESHOLD,
    workers: int | None = None,
    keep_samples: bool = False,
) -> McEstimate:
    """Sample mean of prod psi(lambda_i) over eigenvalues of random matrices.

    GinOE products pair each complex eigenvalue with its conjugate so that
    the product is real by construction.  GinUE products are complex per
    sample; the real part is averaged (its expectation is the average).
    """
    prod, counts, ok, skipped = _run_chunks(ensemble, n, psi, samples, seed, threshold, workers)
    used = prod[ok]
    mean = float(np.mean(used))
    std = float(np.std(used, ddof=1)) if used.size > 1 else 0.0
    return McEstimate(
        mean,
        std / math.sqrt(used.size),
        samples,
        seed,
        skipped,
        products=np.where(ok, prod, np.nan) if keep_samples else None,
        real_counts=np.where(ok, counts, -1) if keep_samples and ensemble == "ginoe" else None,
    )


@dataclass(frozen=True)
class RealCountHistogram:
    n: int
    samples: int
    seed: int
    counts: dict[int, int]

    @property
    def used(self) -> int:
        return sum(self.counts.values())

    def probability(self, real_count: int) -> float:
        return self.counts.get(real_count, 0) / self.used

    def std_error(self, real_count: int) -> float:
        p = self.probability(real_count)
        return math.sqrt(p * (1.0 - p) / self.used)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "probabilities": {str(k): self.probability(k) for k in sorted(self.counts)},
            "std_errors": {str(k): self.std_error(k) for k in sorted(self.counts)},
        }


def real_count_distribution(
    n: int, samples: int, seed: int, threshold: float = DEFAULT_THRESHOLD, workers: int | None = None
) -> RealCountHistogram:
    _, counts, ok, _ = _run_chunks("ginoe", n, PsiSpec(), samples, seed, threshold, workers)
    values, freq = np.unique(counts[ok], return_counts=True)
    return RealCountHistogram(n, samples, seed, {int(v): int(f) for v, f in zip(values, freq)})


def jpdf_partial(alpha, beta, n: int | None = None):
    """Partial joint density of L real eigenvalues and M conjugate pairs.

    ``alpha`` has shape (..., L) and ``beta`` shape (..., M) with beta the
    representatives (any half plane).  Returns an array of shape (...).
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=complex)
    if alpha.ndim == 0:
        alpha = alpha[None]
    if beta.ndim == 0:
        beta = beta[None]
    big_l, big_m = alpha.shape[-1], beta.shape[-1]
    if n is None:
        n = big_l + 2 * big_m
    if big_l + 2 * big_m != n:
        raise UsageError(f"L + 2M = {big_l + 2 * big_m} does not match n = {n}")
    if np.any(beta.imag == 0):
        raise UsageError("complex-pair representatives must be off the real axis")
    batch = np.broadcast_shapes(alpha.shape[:-1], beta.shape[:-1])
    b = np.broadcast_to(beta, batch + (big_m,))
    gamma = np.concatenate(
        [
            np.stack([np.conj(b), b], axis=-1).reshape(batch + (2 * big_m,)),
            np.broadcast_to(alpha, batch + (big_l,)).astype(complex),
        ],
        axis=-1,
    )
    abs_delta = np.ones(batch)
    for j in range(n):
        for k in range(j):
            abs_delta = abs_delta * np.abs(gamma[..., j] - gamma[..., k])
    x, y = beta.real, beta.imag
    log_weight = (
        -0.5 * np.sum(alpha**2, axis=-1)
        + np.sum(-(x * x + y * y) + np.log(erfcx(SQRT2 * np.abs(y))), axis=-1)
        - log_constant_c(n)
        - math.lgamma(big_l + 1)
        - math.lgamma(big_m + 1)
    )
    return abs_delta * np.exp(log_weight)


def sector_probability(n: int, real_count: int, pair_count: int, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Integral of the partial density over its sector, by direct quadrature (n <= 2)."""
    if real_count + 2 * pair_count != n or min(real_count, pair_count) < 0:
        raise UsageError(f"sector ({real_count},{pair_count}) is invalid for n={n}")
    if n > 2:
        raise UsageError("sector quadrature is implemented for n <= 2 only")
    if (real_count, pair_count) == (1, 0):
        return float(quad.integrate_line(lambda a: jpdf_partial(a[:, None], np.zeros((1, 0)), 1), cfg))
    if (real_count, pair_count) == (0, 1):
        # Both half planes belong to the sector; the density is even in Im.
        return 2.0 * float(
            quad.integrate_halfplane(lambda x, y: jpdf_partial(np.zeros((1, 0)), (x + 1j * y)[:, None], 2), cfg)
        )
    # (2, 0): |a2 - a1| has a kink on the diagonal, so split there.
    r = cfg.real_cutoff
    outer, w_outer = quad.line_rule(cfg)
    total = 0.0
    empty = np.zeros((1, 0))
    for a1, wa in zip(outer, w_outer):
        for lo, hi in ((-r, float(a1)), (float(a1), r)):
            a2, w2 = quad.panel_rule(lo, hi, cfg.nodes_1d, cfg.panel_order)
            pts = np.stack([np.full_like(a2, a1), a2], axis=-1)
            total += wa * (jpdf_partial(pts, empty, 2) @ w2)
    return float(total)
