import numpy as np
import pytest

from hlbs.errors import ConfigError, DiscretizationError, DomainError
from hlbs.numerics import observed_order
from hlbs.specfun import sigma
from hlbs.spectrum.bo_effective import (
    EffectiveProblem, RProfile, airy_eigenfunction, airy_level, airy_prediction,
    correction_R, delta_constant, delta_maximizer, domain_length, effective_eigs,
    half_line_fd_eigs, k1_half_line_eigs, k1_oracle_eigs, potential_V,
)
from hlbs.spectrum.parameters import PhysParams, Sector


def test_potential_limits():
    assert potential_V(-1.0, 0.0) == 0.0
    assert potential_V(-2.0, 40.0) == pytest.approx(3.0, rel=1e-12)
    xs = np.linspace(0.0, 10.0, 51)
    assert np.all(np.diff(potential_V(-1.0, xs)) > 0.0)
    # linear near the origin with slope |alpha|^3
    assert potential_V(-2.0, 1e-6) == pytest.approx(8e-6, rel=1e-5)


def test_r_profile_interpolates_quadrature():
    profile = RProfile(-1.0, 6.0, knots=40)
    assert len(profile.knots) == 40
    assert profile.origin_value == pytest.approx(1.0 / 16.0, rel=1e-3)
    assert profile(profile.knots[7]) == pytest.approx(profile.values[7], rel=1e-12)
    assert profile(2.345) == pytest.approx(correction_R(-1.0, 2.345), rel=1e-3)
    assert profile(-2.345) == profile(2.345)
    assert profile(0.0) == pytest.approx(profile.origin_value)
    assert profile(100.0) == pytest.approx(profile.values[-1])


def test_correction_rejects_origin():
    with pytest.raises(DomainError):
        correction_R(-1.0, 0.0)


def test_delta_maximizer_scaling():
    x1, r1 = delta_maximizer(-1.0, samples=80)
    x2, r2 = delta_maximizer(-2.0, samples=80)
    assert r1 >= 1.0 / 16.0 - 1e-9
    assert r2 == pytest.approx(4.0 * r1, rel=1e-6)
    assert x2 == pytest.approx(0.5 * x1, rel=1e-3, abs=1e-6)
    assert delta_constant(-1.0, samples=80) == pytest.approx(2.0 * np.sqrt(r1))
    assert 2.0 * np.sqrt(r1) <= 4.0


def test_airy_levels():
    s0 = abs(sigma(0))
    assert airy_level(-1.0, 0.0, Sector.BOSONIC, 0) == -1.0
    assert airy_level(-2.0, 0.1, 'b', 0) == pytest.approx(-4.0 + 4.0 * s0 * 0.1 ** (2.0 / 3.0))
    params = PhysParams(-1.0, 0.05, Sector.FERMIONIC)
    assert airy_prediction(params, 1) == airy_level(-1.0, 0.05, Sector.FERMIONIC, 1)
    assert airy_prediction(params, 0) > airy_level(-1.0, 0.05, Sector.BOSONIC, 0)
    with pytest.raises(DomainError):
        airy_level(-1.0, -0.1, Sector.BOSONIC, 0)


def test_airy_eigenfunction_parity():
    xs = np.array([-1.3, 0.0, 1.3])
    even = airy_eigenfunction(-1.0, Sector.BOSONIC, 1, xs)
    odd = airy_eigenfunction(-1.0, Sector.FERMIONIC, 1, xs)
    assert even[0] == even[2]
    assert odd[0] == -odd[2]
    assert odd[1] == 0.0


def test_half_line_fd_against_box():
    # -u'' on [0, pi] with u(pi) = 0: Neumann levels (k + 1/2)^2, Dirichlet k^2
    n = 4001
    grid = np.linspace(0.0, np.pi, n)
    h = grid[1] - grid[0]
    zero = np.zeros(n)
    neumann = half_line_fd_eigs(zero, h, 1.0, Sector.BOSONIC, 3)
    dirichlet = half_line_fd_eigs(zero, h, 1.0, Sector.FERMIONIC, 3)
    assert np.allclose(neumann, [0.25, 2.25, 6.25], rtol=1e-5)
    assert np.allclose(dirichlet, [1.0, 4.0, 9.0], rtol=1e-5)


def test_k1_oracle_matches_airy_constants():
    eigs = k1_oracle_eigs(-1.0, 4, nodes=4001)
    exact = [abs(sigma(k)) for k in range(4)]
    assert np.allclose(eigs, exact, atol=1e-5)
    scaled = k1_oracle_eigs(-2.0, 2, nodes=4001)
    assert np.allclose(scaled, 4.0 * np.array(exact[:2]), rtol=1e-5)


@pytest.mark.parametrize('sector', [Sector.BOSONIC, Sector.FERMIONIC])
def test_k1_half_line_selects_parity(sector):
    eigs = k1_half_line_eigs(-1.0, 2, sector, nodes=4001)
    exact = [abs(sigma(sector.sigma_index(k))) for k in range(2)]
    assert np.allclose(eigs, exact, atol=1e-5)


def test_domain_length_grows_with_levels():
    params = PhysParams(-1.0, 0.05, Sector.BOSONIC)
    assert domain_length(params, 3) >= domain_length(params, 1) > 0.0


def test_effective_problem_validation():
    params = PhysParams(-1.0, 0.1)
    profile = RProfile(-1.0, 4.0, knots=20)
    with pytest.raises(ConfigError):
        EffectiveProblem(params, 4.0, 2, profile)
    problem = EffectiveProblem(params, 4.0, 101, profile)
    assert problem.step == pytest.approx(0.04)
    assert problem.potential[0] == pytest.approx(0.01 * profile.origin_value)


def test_effective_eigs_detects_coarse_grid():
    params = PhysParams(-1.0, 0.1)
    profile = RProfile(-1.0, 5.0, knots=20)
    with pytest.raises(DiscretizationError):
        effective_eigs(params, 2, nodes=7, auto_domain=False, length=5.0, r_profile=profile)


def test_effective_eigs_validation():
    with pytest.raises(DomainError):
        effective_eigs(PhysParams(-1.0, 2.0))
    with pytest.raises(DomainError):
        effective_eigs(PhysParams(1.0, 0.1))
    with pytest.raises(ConfigError):
        effective_eigs(PhysParams(-1.0, 0.1), auto_domain=False)


@pytest.mark.slow
@pytest.mark.parametrize('sector', [Sector.BOSONIC, Sector.FERMIONIC])
def test_effective_levels_approach_airy(sector):
    errors = []
    for epsilon in (0.1, 0.05, 0.025):
        eigs = effective_eigs(PhysParams(-1.0, epsilon, sector), levels=1, nodes=4001)
        assert eigs.count == 1
        assert -1.0 < eigs.unshifted[0] < -0.25
        assert eigs.metadata['refined_nodes'] == 8001
        s_0 = abs(sigma(sector.sigma_index(0)))
        errors.append(abs(eigs.shifted[0] / epsilon ** (2.0 / 3.0) - s_0))
    assert errors[0] > errors[1] > errors[2]


@pytest.mark.parametrize('sector', [Sector.BOSONIC, Sector.FERMIONIC])
def test_effective_fd_is_second_order(sector):
    params = PhysParams(-1.0, 0.1, sector)
    length = domain_length(params, 1)
    profile = RProfile(-1.0, length, knots=80)
    ground = [
        EffectiveProblem(params, length, nodes, profile).eigenvalues(1)[0]
        for nodes in (501, 1001, 2001)
    ]
    assert 1.5 <= observed_order(*ground) <= 2.3


@pytest.mark.parametrize('alpha', [-1.0, -2.0])
@pytest.mark.parametrize('sector, k', [
    (Sector.BOSONIC, 0), (Sector.BOSONIC, 2), (Sector.FERMIONIC, 0), (Sector.FERMIONIC, 1),
])
def test_airy_eigenfunction_solves_ode(alpha, sector, k):
    # -u'' + |alpha|^3 |x| u = alpha^2 |sigma| u
    h = 1e-3
    level = alpha**2 * abs(sigma(sector.sigma_index(k)))
    for x in (0.3, 1.1, 2.5):
        u = airy_eigenfunction(alpha, sector, k, np.array([x - h, x, x + h]))
        second = (u[0] - 2.0 * u[1] + u[2]) / h**2
        residual = -second + abs(alpha)**3 * x * u[1] - level * u[1]
        assert abs(residual) <= 2e-5 * alpha**4


def test_correction_at_delta_maximizer():
    # delta/|alpha| = 0.62447740 at |alpha| x* = 0.380511
    assert correction_R(-1.0, 0.380511) == pytest.approx(0.25 * 0.62447740**2, rel=1e-7)
    assert correction_R(-2.0, 0.1902555) == pytest.approx(0.62447740**2, rel=1e-7)
