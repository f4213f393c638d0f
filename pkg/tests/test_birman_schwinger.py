import numpy as np
import pytest

from hlbs.errors import DomainError
from hlbs.numerics import sym_lowest_eigs
from hlbs.spectrum.birman_schwinger import (
    BsGrid, assemble, assemble_parity, bs_bound_states, curve_mu, curve_values, default_nodes,
    ess_symbol, ess_threshold, hs_bound, hs_norm, make_bs_grid, md_symbol, mod_kernel,
    null_vector, panel_edges,
)
from hlbs.spectrum.parameters import PhysParams, Sector


def test_symbols_reject_nonpositive_lambda():
    with pytest.raises(DomainError):
        md_symbol(0.1, 0.0, 1.0)
    with pytest.raises(DomainError):
        mod_kernel(0.1, -1.0, 1.0, 2.0)


def test_kernel_symmetries():
    eps, lam = 0.3, 0.7
    assert mod_kernel(eps, lam, 1.2, -0.4) == pytest.approx(mod_kernel(eps, lam, -0.4, 1.2))
    assert mod_kernel(eps, lam, 1.2, -0.4) == pytest.approx(mod_kernel(eps, lam, -1.2, 0.4))
    assert mod_kernel(eps, lam, 1.0, 1.0) < mod_kernel(eps, lam, 1.0, -1.0)


def test_threshold_symbol_vanishes():
    alpha, eps = -1.5, 0.2
    lam = -ess_threshold(alpha, eps)
    assert lam == pytest.approx(alpha**2 / (4.0 + eps**2))
    assert abs(ess_symbol(alpha, eps, lam, 0.0)) < 1e-15
    assert ess_symbol(alpha, eps, lam, 3.0) > 0.0


def test_panel_edges():
    edges = panel_edges(20.0, 12, 0.25, 1.05)
    assert len(edges) == 13
    assert edges[0] == 0.0 and edges[-1] == pytest.approx(20.0)
    assert np.all(np.diff(edges) > 0.0)
    uniform = panel_edges(1.0, 8, 0.25, 1.05)
    assert np.allclose(np.diff(uniform), 0.125)


def test_bs_grid_is_symmetric():
    grid = BsGrid(10.0, 5, order=4)
    assert len(grid) == 40
    assert np.allclose(grid.nodes, -grid.nodes[::-1])
    assert np.allclose(grid.weights, grid.weights[::-1])
    assert np.sum(grid.weights) == pytest.approx(20.0)
    refined = grid.refined()
    assert len(refined) > len(grid) and refined.nu_max > grid.nu_max
    assert grid.as_dict()['panels_per_side'] == 5


def test_default_grid_sizes():
    assert default_nodes(0.2) == 1600
    assert default_nodes(0.05) == 3200
    assert default_nodes(0.001) == 4800
    grid = make_bs_grid(PhysParams(-2.0, 0.1), nodes=64, nu_max=20.0)
    assert len(grid) == 64 and grid.nu_max == 20.0


@pytest.mark.parametrize('sector', [Sector.BOSONIC, Sector.FERMIONIC])
def test_parity_blocks_split_the_spectrum(sector):
    params = PhysParams(-1.0, 0.3, sector)
    grid = make_bs_grid(params, nodes=96, nu_max=30.0)
    lam = 0.6
    full = np.linalg.eigvalsh(assemble(params, lam, grid).as_array())
    blocks = np.concatenate([
        np.linalg.eigvalsh(assemble_parity(params, lam, grid, parity).as_array())
        for parity in (1, -1)
    ])
    assert np.allclose(np.sort(blocks), full, atol=1e-12)
    assert np.allclose(curve_values(params, lam, grid, 3), full[:3], atol=1e-12)


def test_operator_increases_with_lambda():
    params = PhysParams(-1.0, 0.2, Sector.BOSONIC)
    grid = make_bs_grid(params, nodes=128, nu_max=40.0)
    diff = assemble(params, 0.8, grid) - assemble(params, 0.5, grid)
    assert sym_lowest_eigs(diff, 1)[0] >= -1e-10


@pytest.mark.parametrize('epsilon', [0.1, 0.5, 1.0])
def test_hilbert_schmidt_bound(epsilon):
    grid = make_bs_grid(PhysParams(-1.0, epsilon), nodes=256)
    for lam in (0.3, 1.0):
        assert hs_norm(epsilon, lam, grid) <= hs_bound(epsilon, lam) + 1e-3


def test_null_vector_shape():
    params = PhysParams(-1.0, 0.3, Sector.BOSONIC)
    grid = make_bs_grid(params, nodes=64, nu_max=20.0)
    mu, trace = null_vector(params, 0.5, grid)
    assert trace.shape == (64,)
    assert np.max(trace) == pytest.approx(np.max(np.abs(trace)))
    assert np.isfinite(mu)


def test_no_bound_states_without_attraction():
    assert bs_bound_states(PhysParams(0.5, 0.1)) == []


@pytest.mark.slow
def test_bound_states_lie_in_window():
    results = {}
    for sector in (Sector.BOSONIC, Sector.FERMIONIC):
        params = PhysParams(-1.0, 0.1, sector)
        states = bs_bound_states(params, levels=1)
        assert len(states) == 1 and states[0].converged
        assert -1.0 < states[0].E < ess_threshold(-1.0, 0.1)
        assert 'refined_nodes' in states[0].grid_metadata
        results[sector] = states[0].E
    assert results[Sector.BOSONIC] < results[Sector.FERMIONIC]


def test_curve_mu_picks_kth_value():
    params = PhysParams(-1.0, 0.3, Sector.FERMIONIC)
    grid = make_bs_grid(params, nodes=64, nu_max=20.0)
    values = curve_values(params, 0.5, grid, 3)
    assert curve_mu(params, 0.5, grid, 2) == values[2]


def test_bosonic_curve_lies_below_fermionic():
    alpha, epsilon = -1.0, 0.2
    grid = make_bs_grid(PhysParams(alpha, epsilon), nodes=400)
    for lam in alpha**2 * np.array([0.3, 0.5, 0.8, 1.1]):
        bosonic = curve_mu(PhysParams(alpha, epsilon, Sector.BOSONIC), lam, grid, 0)
        fermionic = curve_mu(PhysParams(alpha, epsilon, Sector.FERMIONIC), lam, grid, 0)
        assert bosonic <= fermionic
