import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hlbs.constants import INV_E
from hlbs.errors import DomainError, RangeError
from hlbs.specfun import (
    SigmaKind, airy_ai, airy_ai_prime, airy_asymptotic, airy_maclaurin,
    extremum_upper_bound, lambert_w0, sigma, zero_bounds,
)


@given(st.floats(min_value=-INV_E, max_value=50.0))
def test_lambert_w0_inverts(u):
    w = lambert_w0(u)
    assert w >= -1.0
    assert w * np.exp(w) == pytest.approx(u, rel=1e-10, abs=1e-12)


@given(st.floats(min_value=-INV_E + 1e-6, max_value=1e6))
def test_lambert_w0_residual_over_range(u):
    w = lambert_w0(u)
    assert abs(w * np.exp(w) - u) <= 1e-14 * max(abs(u), 1e-290)


def test_lambert_w0_branch_point():
    assert lambert_w0(-INV_E) == pytest.approx(-1.0, abs=1e-12)
    u = -INV_E + 1e-10
    w = lambert_w0(u)
    assert w * np.exp(w) == pytest.approx(u, rel=1e-9)
    assert lambert_w0(0.0) == 0.0


def test_lambert_w0_vectorised():
    u = np.array([-0.2, 0.0, 1.0, np.e])
    w = lambert_w0(u)
    assert isinstance(w, np.ndarray) and w.shape == u.shape
    assert w[-1] == pytest.approx(1.0)


def test_lambert_w0_domain():
    with pytest.raises(DomainError):
        lambert_w0(-0.5)
    with pytest.raises(DomainError):
        lambert_w0(np.nan)


@pytest.mark.parametrize('x', [-6.0, -2.5, -0.3, 0.0, 0.7, 1.5, 3.0])
def test_airy_maclaurin_matches_library(x):
    ai, aip = airy_maclaurin(x)
    assert ai == pytest.approx(airy_ai(x), rel=1e-10, abs=1e-14)
    assert aip == pytest.approx(airy_ai_prime(x), rel=1e-10, abs=1e-14)


@pytest.mark.parametrize('x', [-12.0, -10.5, -9.0, 9.0, 10.5, 12.0])
def test_airy_asymptotic_agrees_in_crossover_band(x):
    ai, aip = airy_asymptotic(x)
    assert ai == pytest.approx(airy_ai(x), rel=1e-8, abs=1e-10)
    assert aip == pytest.approx(airy_ai_prime(x), rel=1e-8, abs=1e-10)


def test_airy_asymptotic_rejects_origin():
    with pytest.raises(DomainError):
        airy_asymptotic(0.0)


def test_sigma_known_values():
    assert sigma(0).value == pytest.approx(-1.018792971647471, abs=1e-12)
    assert sigma(1).value == pytest.approx(-2.338107410459767, abs=1e-12)
    assert sigma(2).value == pytest.approx(-3.248197582179837, abs=1e-12)
    assert sigma(3).value == pytest.approx(-4.087949444130971, abs=1e-12)
    assert sigma(0).kind is SigmaKind.EXTREMUM
    assert sigma(1).kind is SigmaKind.ZERO
    assert abs(sigma(1)) == pytest.approx(2.338107410459767)


def test_sigma_interlace_and_solve():
    values = [sigma(k).value for k in range(31)]
    assert np.all(np.diff(values) < 0.0)
    for k, value in enumerate(values):
        residual = airy_ai(value) if k % 2 else airy_ai_prime(value)
        assert abs(residual) < 1e-12


@pytest.mark.parametrize('n', range(0, 15))
def test_sigma_within_brackets(n):
    lower, upper = zero_bounds(n)
    assert lower <= sigma(2*n + 1).value <= upper
    if n >= 1:
        assert sigma(2*n).value <= extremum_upper_bound(n)


@pytest.mark.parametrize('k', [-1, 51, 2.5])
def test_sigma_range(k):
    with pytest.raises(RangeError):
        sigma(k)
