import math

import numpy as np
import pytest
from scipy import integrate

from ginibre.errors import QuadratureError, UsageError
from ginibre.quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    cumulative_at_nodes,
    cumulative_line,
    halfplane_rule,
    integrate_halfplane,
    integrate_line,
    integrate_plane,
    line_rule,
    panel_rule,
)


def test_panel_rule_integrates_polynomials():
    x, w = panel_rule(-1.0, 2.0, 64, 16)
    assert w.sum() == pytest.approx(3.0, rel=1e-14)
    assert w @ x**5 == pytest.approx((2**6 - 1) / 6, rel=1e-13)


def test_gaussian_moments():
    for k in range(0, 9, 2):
        exact = math.sqrt(2 * math.pi) * math.prod(range(k - 1, 0, -2))
        assert integrate_line(lambda x: np.exp(-x * x / 2) * x**k) == pytest.approx(exact, rel=1e-13)


def test_cumulative_matches_erf():
    f = cumulative_line(lambda x: np.exp(-x * x / 2))
    xs = np.array([-3.0, -0.5, 0.0, 1.25, 4.0])
    expected = np.sqrt(np.pi / 2) * (1 + np.array([math.erf(v / math.sqrt(2)) for v in xs]))
    np.testing.assert_allclose(f(xs), expected, rtol=1e-12)
    assert f.total == pytest.approx(math.sqrt(2 * math.pi), rel=1e-14)


def test_cumulative_at_nodes():
    x, w = line_rule()
    running, total = cumulative_at_nodes(np.exp(-x * x / 2))
    expected = np.sqrt(np.pi / 2) * (1 + np.array([math.erf(v / math.sqrt(2)) for v in x]))
    np.testing.assert_allclose(running, expected, atol=1e-13)
    assert total == pytest.approx(math.sqrt(2 * math.pi), rel=1e-14)


def test_halfplane_against_scipy():
    def g(x, y):
        return np.exp(-x * x - 2 * y * y) * (1 + x * y)

    ref, _ = integrate.dblquad(lambda y, x: g(x, y), -12, 12, 0, 8, epsabs=1e-13, epsrel=1e-12)
    assert integrate_halfplane(g) == pytest.approx(ref, rel=1e-10)
    x, y, w = halfplane_rule()
    assert np.all(y > 0) and x.shape == y.shape == w.shape


def test_plane_gaussian():
    assert integrate_plane(lambda x, y: np.exp(-(x * x + y * y) / 2)) == pytest.approx(2 * math.pi, rel=1e-13)


def test_non_finite_integrand_raises():
    with pytest.raises(QuadratureError):
        integrate_line(lambda x: np.where(x > 0, np.nan, 0.0))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"real_cutoff": 5.0},
        {"nodes_1d": 32},
        {"nodes_1d": 520},
        {"target_rel_tol": 0.1},
        {"halfplane_cutoff": (12.0, 0.0)},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(UsageError):
        QuadratureConfig(**kwargs)


def test_config_round_trip_and_refinement():
    cfg = QuadratureConfig(nodes_1d=256)
    assert QuadratureConfig.from_dict(cfg.to_dict()) == cfg
    assert cfg.coarsened().nodes_1d == 128
    assert cfg.refined().nodes_2d == (512, 384)
    assert DEFAULT_CONFIG.coarsened().coarsened().coarsened().coarsened().nodes_1d >= 64
    with pytest.raises(UsageError):
        QuadratureConfig.from_dict({"bogus": 1})
