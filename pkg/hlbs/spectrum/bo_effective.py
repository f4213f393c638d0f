'''
Born-Oppenheimer problem for the heavy pair: the potential V = alpha^2 - lambda0,
the correction R = int |d_x psi_bo|^2 dy and the half-line finite-difference
solver for -eps^2 d^2/dx^2 + V + eps^2 R in the bosonic (Neumann at 0) and
fermionic (Dirichlet at 0) sectors.
'''
import logging
import math
from typing import Callable, Tuple, Union

import numpy as np
from scipy import optimize
from scipy.interpolate import make_interp_spline

from hlbs.config import DELTA_CONFIG, EFFECTIVE_CONFIG, K1_CONFIG
from hlbs.errors import ConfigError, DiscretizationError, DomainError
from hlbs.numerics import quad_adaptive, richardson2, root_bisect, tridiag_lowest_eigs
from hlbs.specfun import airy_ai, sigma
from hlbs.spectrum.light_particle import GroundDerivatives, lambda0
from hlbs.spectrum.parameters import PhysParams, Sector, require_attractive
from hlbs.utils.config import resolve
from hlbs.utils.misc import is_none, restore_shape


logger = logging.getLogger(__name__)

Real = Union[float, np.ndarray]


def potential_V(alpha: float, x: Real) -> Real:
    return restore_shape(alpha**2 - np.asarray(lambda0(alpha, x)), x)


def _dx_integrand(alpha: float, x: float) -> Callable[[float], float]:
    d = GroundDerivatives(alpha, x)
    k, dk, norm, dlog_norm = (float(v[0]) for v in (d.k, d.dk, d.norm, d.dlog_norm))
    half = 0.5 * x

    def integrand(y: float) -> float:
        a = half - y
        b = half + y
        e1 = math.exp(-k * abs(a))
        e2 = math.exp(-k * abs(b))
        value = norm * (
            dlog_norm * (e1 + e2)
            - dk * (abs(a) * e1 + abs(b) * e2)
            - 0.5 * k * (math.copysign(e1, a) + math.copysign(e2, b))
        )
        return value * value
    return integrand


def correction_R(alpha: float, x: float, rel_tol: float = None) -> float:
    require_attractive(alpha)
    x = float(x)
    if x == 0.0:
        raise DomainError('R is evaluated off the origin; use a one-sided sample')
    half = 0.5 * abs(x)
    return quad_adaptive(
        _dx_integrand(alpha, x), -np.inf, np.inf,
        breakpoints=(-half, half), rel_tol=rel_tol,
    )


class RProfile():
    '''R sampled by quadrature on knots graded towards 0 and splined.'''
    def __init__(
        self,
        alpha: float,
        length: float,
        knots: int = None,
        origin_offset: float = None,
    ) -> None:
        require_attractive(alpha)
        knots = resolve(knots, EFFECTIVE_CONFIG, 'r_knots')
        origin_offset = resolve(origin_offset, EFFECTIVE_CONFIG, 'r_origin_offset')
        x0 = origin_offset / abs(alpha)
        assert length > x0
        self._alpha = alpha
        self._length = length
        self._knots = np.linspace(np.sqrt(x0), np.sqrt(length), knots) ** 2
        self._values = np.array([correction_R(alpha, x) for x in self._knots])
        self._spline = make_interp_spline(self._knots, self._values, k=3)
        logger.debug(
            'R profile on [%.3g, %.3g] with %d knots, range [%.6g, %.6g]',
            x0, length, knots, self._values.min(), self._values.max(),
        )

    @property
    def knots(self) -> np.ndarray:
        return self._knots

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def origin_value(self) -> float:
        return float(self._values[0])

    def __call__(self, x: Real) -> Real:
        a = np.clip(np.abs(np.asarray(x, dtype=float)), self._knots[0], self._knots[-1])
        return restore_shape(self._spline(a), x)


def delta_maximizer(alpha: float, samples: int = None) -> Tuple[float, float]:
    '''(x*, R(x*)) for the largest R over (0, 40/|alpha|].'''
    require_attractive(alpha)
    samples = resolve(samples, DELTA_CONFIG, 'samples')
    x_max = DELTA_CONFIG['x_max_factor'] / abs(alpha)
    xs = np.linspace(0.0, x_max, samples + 1)[1:]
    values = np.array([correction_R(alpha, x) for x in xs])
    i = int(np.argmax(values))
    x_best, r_best = float(xs[i]), float(values[i])

    if 0 < i < len(xs) - 1:
        result = optimize.minimize_scalar(
            lambda x: -correction_R(alpha, x),
            bracket=(xs[i - 1], xs[i], xs[i + 1]),
            method='golden',
            tol=1e-10,
        )
        if -result.fun >= r_best:
            x_best, r_best = float(result.x), float(-result.fun)
    elif i == 0:
        x_edge = EFFECTIVE_CONFIG['r_origin_offset'] / abs(alpha)
        r_edge = correction_R(alpha, x_edge)
        if r_edge > r_best:
            x_best, r_best = x_edge, r_edge
    logger.debug('sup R = %.12g at x = %.6g (alpha=%g)', r_best, x_best, alpha)
    return x_best, r_best


def delta_constant(alpha: float, samples: int = None) -> float:
    _, r_best = delta_maximizer(alpha, samples)
    return 2.0 * np.sqrt(r_best)


def airy_level(alpha: float, epsilon: float, sector: Sector, k: int) -> float:
    require_attractive(alpha)
    if epsilon < 0.0:
        raise DomainError(f'epsilon must be nonnegative, got {epsilon}')
    s_k = abs(sigma(Sector.parse(sector).sigma_index(k)))
    return -alpha**2 + s_k * alpha**2 * epsilon ** (2.0 / 3.0)


def airy_prediction(params: PhysParams, k: int) -> float:
    return airy_level(params.alpha, params.epsilon, params.sector, k)


def airy_eigenfunction(alpha: float, sector: Sector, k: int, x: Real) -> Real:
    '''Unnormalised eigenfunction of -d^2/dx^2 + |alpha|^3 |x| for level k of a sector.'''
    require_attractive(alpha)
    sector = Sector.parse(sector)
    shift = sigma(sector.sigma_index(k)).value
    x_arr = np.asarray(x, dtype=float)
    value = np.asarray(airy_ai(abs(alpha) * np.abs(x_arr) + shift))
    if sector is Sector.FERMIONIC:
        value = np.sign(x_arr) * value
    return restore_shape(value, x)


def half_line_fd_eigs(
    potential: np.ndarray,
    h: float,
    kinetic: float,
    sector: Sector,
    levels: int,
) -> np.ndarray:
    '''
    Lowest eigenvalues of -kinetic u'' + potential u on nodes x_i = i h,
    Dirichlet at the last node; Neumann (ghost reflection) at x = 0 for the
    bosonic sector and Dirichlet for the fermionic one.
    '''
    coupling = kinetic / h**2
    if Sector.parse(sector) is Sector.BOSONIC:
        diag = 2.0 * coupling + potential[:-1]
        offdiag = -coupling * np.ones(len(diag) - 1)
        # symmetrised ghost row
        offdiag[0] *= np.sqrt(2.0)
    else:
        diag = 2.0 * coupling + potential[1:-1]
        offdiag = -coupling * np.ones(len(diag) - 1)
    return tridiag_lowest_eigs(diag, offdiag, min(levels, len(diag)))


def full_line_fd_eigs(
    potential: np.ndarray,
    h: float,
    kinetic: float,
    levels: int,
) -> np.ndarray:
    coupling = kinetic / h**2
    diag = 2.0 * coupling + potential[1:-1]
    offdiag = -coupling * np.ones(len(diag) - 1)
    return tridiag_lowest_eigs(diag, offdiag, min(levels, len(diag)))


def _potential_crossing(alpha: float, level: float) -> float:
    x_far = 60.0 / abs(alpha)
    return root_bisect(
        lambda x: potential_V(alpha, x) - level, 0.0, x_far,
        tol=1e-10 / abs(alpha),
    )


def domain_length(params: PhysParams, levels: int) -> float:
    '''Half-domain length past the classical turning point of the highest level.'''
    params.require_attractive()
    alpha2 = params.alpha**2
    s_top = abs(sigma(params.sector.sigma_index(levels - 1)))
    e_max = s_top * alpha2 * params.epsilon ** (2.0 / 3.0)
    ceiling = (0.75 - 0.01) * alpha2
    target = min(e_max + EFFECTIVE_CONFIG['turning_point_shift'] * alpha2, ceiling)
    x_turn = _potential_crossing(params.alpha, target)
    length = x_turn + (
        EFFECTIVE_CONFIG['decay_lengths'] * params.epsilon ** (2.0 / 3.0)
        * max(1.0, s_top) / abs(params.alpha)
    )
    x_floor = _potential_crossing(
        params.alpha, EFFECTIVE_CONFIG['min_potential_fraction'] * 0.75 * alpha2,
    )
    return max(length, x_floor)


class EffectiveProblem():
    def __init__(
        self,
        params: PhysParams,
        length: float,
        nodes: int,
        r_profile: RProfile = None,
    ) -> None:
        params.require_attractive()
        if nodes < 3:
            raise ConfigError(f'need at least 3 nodes, got {nodes}')
        if not length > 0.0:
            raise ConfigError(f'domain length must be positive, got {length}')
        if is_none(r_profile):
            r_profile = RProfile(params.alpha, length)
        self._params = params
        self._length = length
        self._nodes = nodes
        self._grid = np.linspace(0.0, length, nodes)
        self._potential = (
            np.asarray(potential_V(params.alpha, self._grid))
            + params.epsilon**2 * np.asarray(r_profile(self._grid))
        )
        assert np.all(np.isfinite(self._potential))

    @property
    def params(self) -> PhysParams:
        return self._params

    @property
    def length(self) -> float:
        return self._length

    @property
    def nodes(self) -> int:
        return self._nodes

    @property
    def grid(self) -> np.ndarray:
        return self._grid

    @property
    def step(self) -> float:
        return self._length / (self._nodes - 1)

    @property
    def potential(self) -> np.ndarray:
        return self._potential

    def eigenvalues(self, levels: int) -> np.ndarray:
        return half_line_fd_eigs(
            self._potential, self.step, self._params.epsilon**2,
            self._params.sector, levels,
        )


class EffectiveEigs():
    def __init__(
        self,
        params: PhysParams,
        shifted: np.ndarray,
        requested: int,
        metadata: dict = None,
    ) -> None:
        self._params = params
        self._shifted = np.asarray(shifted, dtype=float)
        self._requested = requested
        self._metadata = {} if is_none(metadata) else metadata
        assert np.all(np.diff(self._shifted) > 0.0)

    @property
    def sector(self) -> Sector:
        return self._params.sector

    @property
    def epsilon(self) -> float:
        return self._params.epsilon

    @property
    def alpha(self) -> float:
        return self._params.alpha

    @property
    def shifted(self) -> np.ndarray:
        return self._shifted

    @property
    def unshifted(self) -> np.ndarray:
        return self._shifted - self._params.alpha**2

    @property
    def count(self) -> int:
        return len(self._shifted)

    @property
    def requested(self) -> int:
        return self._requested

    @property
    def metadata(self) -> dict:
        return self._metadata


def effective_eigs(
    params: PhysParams,
    levels: int = 3,
    nodes: int = None,
    auto_domain: bool = True,
    length: float = None,
    tol: float = None,
    r_profile: RProfile = None,
) -> EffectiveEigs:
    params.require_attractive()
    if not params.epsilon <= EFFECTIVE_CONFIG['max_epsilon']:
        raise DomainError(f'effective solver needs epsilon in (0, 1], got {params.epsilon}')
    if levels < 1:
        raise ConfigError(f'levels must be at least 1, got {levels}')
    nodes = resolve(nodes, EFFECTIVE_CONFIG, 'nodes')
    tol = resolve(tol, EFFECTIVE_CONFIG, 'tol')
    if auto_domain:
        length = domain_length(params, levels)
    elif is_none(length):
        raise ConfigError('a domain length is required when auto_domain is off')

    if is_none(r_profile):
        r_profile = RProfile(params.alpha, length)
    coarse = EffectiveProblem(params, length, nodes, r_profile).eigenvalues(levels)
    fine = EffectiveProblem(params, length, 2*nodes - 1, r_profile).eigenvalues(levels)
    gap = float(np.max(np.abs(coarse - fine)))
    alpha2 = params.alpha**2
    if gap > 10.0 * tol * alpha2:
        raise DiscretizationError(
            f'grids with {nodes} and {2*nodes - 1} nodes differ by {gap:.3e} '
            f'(allowed {10.0 * tol * alpha2:.3e})'
        )
    extrapolated = richardson2(coarse, fine)

    ceiling = (0.75 - EFFECTIVE_CONFIG['margin']) * alpha2
    kept = extrapolated[extrapolated < ceiling]
    if len(kept) < levels:
        logger.warning(
            '%d of %d effective levels lie below %.6g (eps=%g, sector=%s)',
            len(kept), levels, ceiling, params.epsilon, params.sector.value,
        )
    metadata = {
        'length': length,
        'nodes': nodes,
        'refined_nodes': 2*nodes - 1,
        'auto_domain': auto_domain,
        'grid_gap': gap,
        'r_origin': r_profile.origin_value,
    }
    return EffectiveEigs(params, kept, levels, metadata)


def k1_length(alpha: float, levels: int, tail: float = None) -> float:
    tail = resolve(tail, K1_CONFIG, 'tail')
    return (abs(sigma(levels - 1)) + tail) / abs(alpha)


def _odd(nodes: int) -> int:
    return nodes if nodes % 2 == 1 else nodes + 1


def k1_oracle_eigs(
    alpha: float,
    levels: int,
    nodes: int = None,
    length: float = None,
) -> np.ndarray:
    '''Eigenvalues of -d^2/dx^2 + |alpha|^3 |x| on [-L, L], both parities.'''
    require_attractive(alpha)
    nodes = _odd(resolve(nodes, K1_CONFIG, 'nodes'))
    if is_none(length):
        length = k1_length(alpha, levels)

    def solve(n: int) -> np.ndarray:
        grid = np.linspace(-length, length, n)
        potential = abs(alpha)**3 * np.abs(grid)
        return full_line_fd_eigs(potential, 2.0 * length / (n - 1), 1.0, levels)

    return richardson2(solve(nodes), solve(2*nodes - 1))


def k1_half_line_eigs(
    alpha: float,
    levels: int,
    sector: Sector,
    nodes: int = None,
    length: float = None,
) -> np.ndarray:
    '''
    One parity of k1_oracle_eigs, on the non-negative half of the same grid
    (nodes counts the full line).
    '''
    require_attractive(alpha)
    nodes = _odd(resolve(nodes, K1_CONFIG, 'nodes'))
    if is_none(length):
        length = k1_length(alpha, 2 * levels)

    def solve(n: int) -> np.ndarray:
        grid = np.linspace(-length, length, n)[n // 2:]
        potential = abs(alpha)**3 * np.abs(grid)
        return half_line_fd_eigs(potential, 2.0 * length / (n - 1), 1.0, sector, levels)

    return richardson2(solve(nodes), solve(2*nodes - 1))
