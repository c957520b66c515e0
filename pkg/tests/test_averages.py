import math

import numpy as np
import pytest

from conftest import wick_det_squared
from ginibre.averages import (
    _skew_orthogonalize_from_gram,
    average_ginoe,
    average_ginoe_parity,
    average_ginoe_skew,
    average_ginue,
    average_ginue_orth,
    build_u_matrix,
    compute_average,
    constant_c,
    constant_d,
    log_ginue_jpdf_constant,
    skew_orthogonalize,
)
from ginibre.errors import PreconditionError, SingularNormalizationError, SingularPivotError, UsageError
from ginibre.inner import skew_total
from ginibre.quadrature import QuadratureConfig
from ginibre.weights import CompleteFamily, PsiSpec

ONE = PsiSpec()


def test_constant_c_closed_forms():
    assert constant_c(1) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-15)
    assert constant_c(2) == pytest.approx(2**1.5 * math.sqrt(math.pi), rel=1e-15)
    assert constant_c(3) == pytest.approx(2**3 * math.sqrt(math.pi) * 1.0 * math.sqrt(math.pi) / 2, rel=1e-15)


def test_constant_d_values():
    # Product of the monomial norms 2 pi 2^k k!.
    assert constant_d(1) == pytest.approx(2 * math.pi, rel=1e-15)
    assert constant_d(2) == pytest.approx((2 * math.pi) ** 2 * 2, rel=1e-15)
    assert constant_d(3) == pytest.approx(3968.803, rel=1e-6)
    assert math.exp(log_ginue_jpdf_constant(3)) == pytest.approx(6 * constant_d(3), rel=1e-14)


def test_constant_overflow_is_inf():
    assert constant_c(60) == math.inf
    assert average_ginoe(20, ONE).value == pytest.approx(1.0, rel=1e-11)


def test_large_n_needs_wider_cutoffs():
    wide = QuadratureConfig(real_cutoff=20, halfplane_cutoff=(20, 14), nodes_1d=1024, nodes_2d=(512, 384))
    assert average_ginoe(40, ONE, cfg=wide).value == pytest.approx(1.0, rel=1e-10)


def test_u_matrix_structure():
    u = build_u_matrix(CompleteFamily.monomials(3), ONE)
    assert u.dim == 4
    np.testing.assert_array_equal(u.entries, -u.entries.T)
    assert u.entries[0, 3] == pytest.approx(math.sqrt(2 * math.pi), rel=1e-13)
    assert u.entries[0, 1] == pytest.approx(skew_total(*CompleteFamily.monomials(2).polys, ONE).value, rel=1e-14)


@pytest.mark.parametrize("n", range(1, 7))
def test_det_squared_is_factorial(n):
    assert wick_det_squared(n) == math.factorial(n)
    assert average_ginoe(n, PsiSpec("pow", power=2)).value == pytest.approx(math.factorial(n), rel=1e-10)


@pytest.mark.parametrize("n", range(1, 6))
def test_characteristic_polynomial_means(n):
    # E det(s - X) = s^N for both ensembles: only the diagonal term survives.
    s = 0.7
    psi = PsiSpec("shift", shift=s)
    assert average_ginoe(n, psi).value == pytest.approx(s**n, rel=1e-10)
    assert average_ginue(n, psi).value == pytest.approx(s**n, rel=1e-10)


@pytest.mark.parametrize("n", range(1, 6))
def test_characteristic_polynomial_second_moment(n):
    # E det(s - X)^2 = N! sum_k s^{2k} / k! over GinOE.
    s = 0.7
    psi = PsiSpec("poly", coeffs=(s * s, -2 * s, 1.0))
    expected = math.factorial(n) * sum(s ** (2 * k) / math.factorial(k) for k in range(n + 1))
    assert average_ginoe(n, psi).value == pytest.approx(expected, rel=1e-10)


def test_routes_agree_for_even_n():
    for n in (2, 4, 6):
        for psi in (ONE, PsiSpec("pow", power=2), PsiSpec("shift", shift=-1.2)):
            ref = average_ginoe(n, psi).value
            assert average_ginoe_skew(n, psi).value == pytest.approx(ref, rel=1e-10)


def test_skew_orthogonality():
    so = skew_orthogonalize(4, ONE)
    g = build_u_matrix(so.polys, ONE).entries
    blocks = np.zeros((4, 4))
    blocks[0, 1], blocks[2, 3] = so.normalizations
    blocks = blocks - blocks.T
    np.testing.assert_allclose(g, blocks, atol=1e-10 * np.max(np.abs(g)))
    # The canonical choice removes the degree 2j-2 coefficient of Q_{2j}.
    c = so.polys.coefficient_matrix()
    assert abs(c[2, 3]) < 1e-14


def test_skew_breakdown_raises():
    with pytest.raises(SingularNormalizationError):
        _skew_orthogonalize_from_gram(np.zeros((4, 4)))


def test_parity_route_preconditions():
    with pytest.raises(PreconditionError):
        average_ginoe_parity(3, PsiSpec("pow", power=1))
    with pytest.raises(PreconditionError):
        average_ginoe_parity(3, PsiSpec("shift", shift=1.0))
    assert average_ginoe_parity(5, PsiSpec("modsq")).value == pytest.approx(average_ginoe(5, PsiSpec("modsq")).value, rel=1e-10)


@pytest.mark.parametrize("n", range(1, 6))
def test_ginue_routes(n):
    for psi in (ONE, PsiSpec("modsq"), PsiSpec("shift", shift=0.4)):
        ref = average_ginue(n, psi).value
        assert average_ginue_orth(n, psi).value == pytest.approx(ref, rel=1e-10)
    assert average_ginue(n, PsiSpec("modsq")).value == pytest.approx(2**n * math.factorial(n), rel=1e-10)


def test_ginue_odd_moment_vanishes_and_orth_breaks_down():
    assert abs(average_ginue(3, PsiSpec("pow", power=1)).value) < 1e-12
    with pytest.raises(SingularPivotError):
        average_ginue_orth(3, PsiSpec("pow", power=1))


def test_family_independence_ginue():
    rng = np.random.default_rng(5)
    psi = PsiSpec("modsq")
    vals = [average_ginue(4, psi, CompleteFamily.random(4, rng)).value for _ in range(5)]
    assert np.ptp(vals) < 1e-9 * np.mean(vals)


def test_error_estimate_and_polar_form():
    avg = average_ginoe(4, PsiSpec("pow", power=2))
    assert 0 <= avg.est_error < 1e-8
    assert avg.sign * math.exp(avg.log_abs) == pytest.approx(avg.value, rel=1e-12)
    d = avg.to_dict()
    assert d["method"] == "pfaffian" and d["psi"] == "pow:2"


def test_dispatcher_errors():
    with pytest.raises(UsageError):
        compute_average("ginue", 3, ONE, "pfaffian")
    with pytest.raises(PreconditionError):
        compute_average("ginoe", 3, ONE, "skew_orth")
    with pytest.raises(UsageError):
        compute_average("ginoe", 0, ONE, "pfaffian")
    with pytest.raises(UsageError):
        average_ginoe(3, ONE, CompleteFamily.monomials(4))
    assert compute_average("ginoe", 2, ONE, "parity_det").value == pytest.approx(1.0)
