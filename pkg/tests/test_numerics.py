import logging

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hlbs import numerics
from hlbs.config import BS_GRID_CONFIG
from hlbs.errors import BracketError, ConvergenceError, DomainError, SizeError
from hlbs.numerics import (
    Grid1D, SymMatrix, composite_gauss_legendre, loglog_slope, observed_order,
    quad_adaptive, richardson2, root_bisect, sturm_count, sym_lowest_eigs,
    tridiag_lowest_eigs,
)


def test_grid_validation():
    with pytest.raises(DomainError):
        Grid1D([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(DomainError):
        Grid1D([0.0, 1.0], [1.0, -1.0])
    with pytest.raises(DomainError):
        Grid1D([0.0], [1.0])


def test_composite_gauss_legendre_polynomial():
    grid = composite_gauss_legendre(np.linspace(0.0, 2.0, 5), 8)
    assert len(grid) == 32
    assert grid.integrate(grid.nodes**5) == pytest.approx(2.0**6 / 6.0, rel=1e-13)


def test_sym_matrix_storage():
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    m = SymMatrix.from_dense(a)
    assert np.array_equal(m.as_array(), a)
    assert np.array_equal((m + m).as_array(), 2.0 * a)
    assert np.array_equal((m - m).as_array(), np.zeros((2, 2)))
    assert np.array_equal(m.diagonal(), [2.0, 3.0])


def test_quad_adaptive_gaussian():
    value = quad_adaptive(lambda y: np.exp(-y * y), -np.inf, np.inf)
    assert value == pytest.approx(np.sqrt(np.pi), rel=1e-10)


def test_quad_adaptive_kinks():
    value = quad_adaptive(lambda y: np.exp(-abs(y - 1.0)), -np.inf, np.inf, breakpoints=(1.0,))
    assert value == pytest.approx(2.0, rel=1e-10)


def test_quad_adaptive_reports_quad_warnings(monkeypatch, caplog):
    def rough_quad(f, a, b, **kwargs):
        return 1.5, 1e-3, {'last': 7}, 'roundoff error is detected'

    monkeypatch.setattr(numerics.integrate, 'quad', rough_quad)
    with caplog.at_level(logging.WARNING, logger='hlbs.numerics'):
        assert quad_adaptive(np.cos, 0.0, 1.0) == 1.5
    assert 'roundoff error' in caplog.text


def test_quad_adaptive_subdivision_limit(monkeypatch):
    def stuck_quad(f, a, b, **kwargs):
        return 1.5, 1e-3, {'last': kwargs['limit']}, 'maximum number of subdivisions'

    monkeypatch.setattr(numerics.integrate, 'quad', stuck_quad)
    with pytest.raises(ConvergenceError):
        quad_adaptive(np.cos, 0.0, 1.0)


def test_quad_adaptive_interval():
    with pytest.raises(DomainError):
        quad_adaptive(np.sin, 1.0, 0.0)


def _laplacian(n):
    return 2.0 * np.ones(n), -np.ones(n - 1)


def test_tridiag_against_exact():
    n = 50
    diag, offdiag = _laplacian(n)
    eigs = tridiag_lowest_eigs(diag, offdiag, 4)
    exact = 2.0 - 2.0 * np.cos(np.pi * np.arange(1, 5) / (n + 1))
    assert np.allclose(eigs, exact, atol=1e-12)


@given(st.floats(min_value=0.01, max_value=3.99))
def test_sturm_count_matches_spectrum(shift):
    n = 20
    diag, offdiag = _laplacian(n)
    exact = 2.0 - 2.0 * np.cos(np.pi * np.arange(1, n + 1) / (n + 1))
    if np.min(np.abs(exact - shift)) < 1e-9:
        return
    assert sturm_count(diag, offdiag, shift) == int(np.sum(exact < shift))


def test_tridiag_rejects_bad_shapes():
    with pytest.raises(DomainError):
        tridiag_lowest_eigs([1.0, 2.0], [0.1, 0.2], 1)
    with pytest.raises(DomainError):
        tridiag_lowest_eigs([1.0, 2.0], [0.1], 3)


def test_sym_lowest_eigs(monkeypatch):
    a = np.diag([3.0, 1.0, 2.0])
    assert np.allclose(sym_lowest_eigs(SymMatrix.from_dense(a), 2), [1.0, 2.0])
    monkeypatch.setitem(BS_GRID_CONFIG, 'max_dense_order', 2)
    with pytest.raises(SizeError):
        sym_lowest_eigs(a, 1)


@pytest.mark.parametrize('method', ['bisect', 'brentq'])
def test_root_bisect(method):
    root = root_bisect(lambda x: x * x - 2.0, 0.0, 2.0, 1e-12, method=method)
    assert root == pytest.approx(np.sqrt(2.0), abs=1e-11)


def test_root_bisect_bracket_errors():
    with pytest.raises(BracketError):
        root_bisect(lambda x: x * x + 1.0, -1.0, 1.0, 1e-8)
    assert root_bisect(lambda x: x, 0.0, 1.0, 1e-8) == 0.0
    with pytest.raises(DomainError):
        root_bisect(lambda x: x, -1.0, 1.0, 1e-8, method='newton')


def test_extrapolation_helpers():
    # v(h) = 1 + h^2
    assert richardson2(1.0 + 0.01, 1.0 + 0.0025) == pytest.approx(1.0)
    assert observed_order(1.0 + 0.01, 1.0 + 0.0025, 1.0 + 0.000625) == pytest.approx(2.0)
    xs = np.array([0.2, 0.1, 0.05])
    assert loglog_slope(xs, 3.0 * xs ** (4.0 / 3.0)) == pytest.approx(4.0 / 3.0)
