import math

import numpy as np
import pytest

from ginibre.inner import (
    complex_gram,
    ginue_gram,
    ginue_inner,
    one_sided_moment,
    one_sided_moments,
    real_gram,
    skew_complex,
    skew_complex_direct,
    skew_real,
    skew_real_direct,
    skew_total,
)
from ginibre.weights import CompleteFamily, MonicPolynomial, PsiSpec

ONE = PsiSpec()
P = [MonicPolynomial.monomial(k) for k in range(6)]


def test_closed_forms():
    assert skew_real(P[0], P[1], ONE).value == pytest.approx(2 * math.sqrt(math.pi), rel=1e-12)
    assert skew_complex(P[0], P[1], ONE).value == pytest.approx(2 * math.sqrt(math.pi) * (math.sqrt(2) - 1), rel=1e-12)
    total = skew_total(P[0], P[1], ONE)
    assert total.value == pytest.approx(2 * math.sqrt(2 * math.pi), rel=1e-12)
    assert total.est_error < 1e-10


def test_one_sided_moments():
    # int exp(-x^2/2) x^k dx over the line.
    assert one_sided_moment(P[0], ONE) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-13)
    assert one_sided_moment(P[1], ONE) == pytest.approx(0.0, abs=1e-13)
    assert one_sided_moment(P[2], ONE) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-13)
    np.testing.assert_allclose(one_sided_moments(P[:3], ONE), [math.sqrt(2 * math.pi), 0, math.sqrt(2 * math.pi)], atol=1e-13)


@pytest.mark.parametrize("psi", [ONE, PsiSpec("pow", power=2), PsiSpec("shift", shift=0.5)])
def test_grams_are_exactly_antisymmetric(psi):
    fam = CompleteFamily.random(5, np.random.default_rng(0))
    for gram in (real_gram, complex_gram):
        g = gram(fam, psi)
        np.testing.assert_array_equal(g, -g.T)


def test_parity_zeros_for_even_psi():
    g = real_gram(P[:6], PsiSpec("pow", power=2)) + complex_gram(P[:6], PsiSpec("pow", power=2))
    for j in range(6):
        for k in range(6):
            if (j + k) % 2 == 0:
                assert abs(g[j, k]) < 1e-12 * np.max(np.abs(g))


@pytest.mark.parametrize("j,k", [(0, 1), (1, 2), (0, 3), (2, 5), (3, 4)])
def test_reduced_real_matches_double_integral(j, k):
    for psi in (ONE, PsiSpec("shift", shift=-0.3)):
        ref = skew_real_direct(P[j], P[k], psi)
        assert real_gram([P[j], P[k]], psi)[0, 1] == pytest.approx(ref, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("j,k", [(0, 1), (1, 2), (0, 3)])
def test_complex_product_matches_full_plane(j, k):
    for psi in (ONE, PsiSpec("pow", power=1)):
        ref = skew_complex_direct(P[j], P[k], psi)
        assert abs(ref.imag) < 1e-10 * max(1.0, abs(ref))
        assert complex_gram([P[j], P[k]], psi)[0, 1] == pytest.approx(ref.real, rel=1e-9, abs=1e-12)


def test_bilinearity():
    rng = np.random.default_rng(4)
    a, b = rng.uniform(-1, 1, 2)
    # Q = P3 + a P1 + b P0 is still monic of degree 3.
    q = MonicPolynomial((b, a, 0.0))
    lhs = skew_total(P[2], q, ONE).value
    rhs = skew_total(P[2], P[3], ONE).value + a * skew_total(P[2], P[1], ONE).value + b * skew_total(P[2], P[0], ONE).value
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_ginue_gram_monomials():
    # int |z|^{2k} exp(-|z|^2/2) dA = 2 pi 2^k k!, off-diagonals vanish.
    g = ginue_gram(P[:4], ONE)
    expected = [2 * math.pi * 2**k * math.factorial(k) for k in range(4)]
    np.testing.assert_allclose(np.diag(g).real, expected, rtol=1e-12)
    assert np.max(np.abs(g - np.diag(np.diag(g)))) < 1e-10
    assert ginue_inner(P[1], P[1], ONE) == pytest.approx(4 * math.pi, rel=1e-12)
