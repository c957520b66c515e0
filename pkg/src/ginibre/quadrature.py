"""Composite Gauss-Legendre rules on truncated lines, half planes and planes.

All rules are built from panels of ``panel_order`` Gauss-Legendre nodes.
Sums are plain numpy reductions over a fixed node order, so results do not
depend on how the caller batches its integrands.
"""

from __future__ import annotations

import functools
from dataclasses import asdict, dataclass, replace
from typing import Callable

import numpy as np
from numpy.polynomial import legendre

from .errors import QuadratureError, UsageError


@dataclass(frozen=True)
class QuadratureConfig:
    real_cutoff: float = 12.0
    nodes_1d: int = 512
    halfplane_cutoff: tuple[float, float] = (12.0, 8.0)
    nodes_2d: tuple[int, int] = (256, 192)
    target_rel_tol: float = 1e-8
    panel_order: int = 16

    def __post_init__(self) -> None:
        object.__setattr__(self, "halfplane_cutoff", tuple(float(v) for v in self.halfplane_cutoff))
        object.__setattr__(self, "nodes_2d", tuple(int(v) for v in self.nodes_2d))
        if self.real_cutoff < 8:
            raise UsageError("real_cutoff must be at least 8")
        if min(self.halfplane_cutoff) <= 0:
            raise UsageError("halfplane cutoffs must be positive")
        counts = (self.nodes_1d, *self.nodes_2d)
        if min(counts) < 64:
            raise UsageError("node counts must be at least 64")
        if any(c % self.panel_order for c in counts):
            raise UsageError(f"node counts must be multiples of panel_order={self.panel_order}")
        if not 0 < self.target_rel_tol <= 1e-3:
            raise UsageError("target_rel_tol must lie in (0, 1e-3]")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["halfplane_cutoff"] = list(self.halfplane_cutoff)
        d["nodes_2d"] = list(self.nodes_2d)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "QuadratureConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise UsageError(f"unknown quadrature keys: {sorted(unknown)}")
        return cls(**d)

    def coarsened(self) -> "QuadratureConfig":
        """Half the panels in every direction (used for error estimates)."""

        def half(c: int) -> int:
            return max(self.panel_order * 4, (c // self.panel_order // 2) * self.panel_order)

        return replace(
            self,
            nodes_1d=half(self.nodes_1d),
            nodes_2d=(half(self.nodes_2d[0]), half(self.nodes_2d[1])),
        )

    def refined(self) -> "QuadratureConfig":
        return replace(
            self,
            nodes_1d=2 * self.nodes_1d,
            nodes_2d=(2 * self.nodes_2d[0], 2 * self.nodes_2d[1]),
        )


DEFAULT_CONFIG = QuadratureConfig()


@functools.lru_cache(maxsize=None)
def _reference_rule(order: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """GL nodes/weights on [-1, 1] and the cumulative integration matrix.

    ``S[i, j]`` integrates the j-th Lagrange basis polynomial from -1 to
    node i, so ``S @ f`` is the running integral of the interpolant of f.
    """
    t, w = legendre.leggauss(order)
    # Lagrange basis in Legendre form via discrete orthogonality of the rule.
    m = np.arange(order)
    p = legendre.legvander(t, order)  # p[i, m] = P_m(t_i), m = 0..order
    coef = (w[:, None] * p[:, :order] * (2 * m + 1) / 2.0).T  # coef[m, j]
    running = np.empty((order, order))
    running[:, 0] = t + 1.0
    for k in range(1, order):
        running[:, k] = (p[:, k + 1] - p[:, k - 1]) / (2 * k + 1)
    s = running @ coef
    return t, w, s


@functools.lru_cache(maxsize=64)
def panel_rule(a: float, b: float, nodes: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite GL nodes and weights on [a, b]."""
    panels = nodes // order
    t, w, _ = _reference_rule(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wx = (half[:, None] * w[None, :]).ravel()
    x.setflags(write=False)
    wx.setflags(write=False)
    return x, wx


def line_rule(cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, np.ndarray]:
    r = cfg.real_cutoff
    return panel_rule(-r, r, cfg.nodes_1d, cfg.panel_order)


def halfplane_rule(cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flattened tensor rule on [-X, X] x [0, Y]."""
    xmax, ymax = cfg.halfplane_cutoff
    x, wx = panel_rule(-xmax, xmax, cfg.nodes_2d[0], cfg.panel_order)
    y, wy = panel_rule(0.0, ymax, cfg.nodes_2d[1], cfg.panel_order)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    return xx.ravel(), yy.ravel(), np.outer(wx, wy).ravel()


def plane_rule(cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flattened tensor rule on the square [-R, R]^2 (R = real_cutoff)."""
    r = cfg.real_cutoff
    x, wx = panel_rule(-r, r, cfg.nodes_2d[0], cfg.panel_order)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    return xx.ravel(), yy.ravel(), np.outer(wx, wx).ravel()


def _checked(values) -> np.ndarray:
    values = np.asarray(values)
    if not np.all(np.isfinite(values)):
        raise QuadratureError("integrand produced non-finite samples")
    return values


def integrate_line(f: Callable[[np.ndarray], np.ndarray], cfg: QuadratureConfig = DEFAULT_CONFIG):
    x, w = line_rule(cfg)
    return _checked(f(x)) @ w


def cumulative_at_nodes(values: np.ndarray, cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, np.ndarray]:
    """Running integrals from -R to each line node, plus the totals.

    ``values`` has the node axis last; leading axes are batched.
    """
    values = _checked(values)
    order = cfg.panel_order
    panels = cfg.nodes_1d // order
    _, w, s = _reference_rule(order)
    half = cfg.real_cutoff / panels
    v = values.reshape(values.shape[:-1] + (panels, order))
    inside = half * np.einsum("ij,...pj->...pi", s, v)
    totals = half * (v @ w)
    starts = np.cumsum(totals, axis=-1) - totals
    running = (inside + starts[..., None]).reshape(values.shape)
    return running, totals.sum(axis=-1)


def cumulative_line(f: Callable[[np.ndarray], np.ndarray], cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Return F with F(x) = integral of f over [-R, x] (0 below -R).

    F evaluates full panels from a cached table and the last partial panel
    with a fresh Gauss-Legendre rule.
    """
    order = cfg.panel_order
    panels = cfg.nodes_1d // order
    r = cfg.real_cutoff
    edges = np.linspace(-r, r, panels + 1)
    t, w, _ = _reference_rule(order)
    x, _ = line_rule(cfg)
    fx = _checked(f(x)).reshape(panels, order)
    totals = (0.5 * np.diff(edges)) * (fx @ w)
    left_values = np.concatenate([[0.0], np.cumsum(totals)])

    def big_f(xq):
        xq = np.asarray(xq, dtype=float)
        flat = np.clip(xq.ravel(), -r, r)
        p = np.clip(np.searchsorted(edges, flat, side="right") - 1, 0, panels - 1)
        a = edges[p]
        half = 0.5 * (flat - a)
        nodes = (a + half)[:, None] + half[:, None] * t[None, :]
        partial = half * (_checked(f(nodes)) @ w)
        out = left_values[p] + partial
        return out.reshape(xq.shape) if xq.shape else out[0]

    big_f.total = left_values[-1]
    return big_f


def integrate_halfplane(g: Callable[[np.ndarray, np.ndarray], np.ndarray], cfg: QuadratureConfig = DEFAULT_CONFIG):
    x, y, w = halfplane_rule(cfg)
    return _checked(g(x, y)) @ w


def integrate_plane(g: Callable[[np.ndarray, np.ndarray], np.ndarray], cfg: QuadratureConfig = DEFAULT_CONFIG):
    x, y, w = plane_rule(cfg)
    return _checked(g(x, y)) @ w
