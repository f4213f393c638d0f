'''
Exact bound states: -lambda is an eigenvalue of the three-body Hamiltonian in a
sector iff A(lambda) = 1 + alpha (M_d +- M_od)(-lambda) has a zero eigenvalue.
M_d is a Fourier multiplier and M_od an integral operator with a positive
kernel, discretised by a symmetrised Gauss-Legendre Nystrom scheme on
[-nu_max, nu_max]. The grid is symmetric under nu -> -nu, so A splits into
even and odd blocks that are solved separately.
'''
import logging
from typing import Dict, List, Tuple, Union

import numpy as np
from scipy import linalg

from hlbs.config import BS_GRID_CONFIG, EFFECTIVE_CONFIG
from hlbs.errors import BracketError, DomainError, GridConvergenceError
from hlbs.numerics import (
    Grid1D, SymMatrix, composite_gauss_legendre, root_bisect, sym_lowest_eigs,
)
from hlbs.spectrum.parameters import PhysParams, Sector
from hlbs.utils.config import resolve
from hlbs.utils.misc import is_none, restore_shape


logger = logging.getLogger(__name__)

Real = Union[float, np.ndarray]


def md_symbol(epsilon: float, lam: float, nu: Real) -> Real:
    if not lam > 0.0:
        raise DomainError(f'lambda must be positive, got {lam}')
    nu_arr = np.asarray(nu, dtype=float)
    value = 1.0 / np.sqrt(4.0 * epsilon**2 * nu_arr**2 + (4.0 + epsilon**2) * lam)
    return restore_shape(value, nu)


def mod_kernel(epsilon: float, lam: float, nu: Real, nu2: Real) -> Real:
    if not lam > 0.0:
        raise DomainError(f'lambda must be positive, got {lam}')
    nu_arr = np.asarray(nu, dtype=float)
    nu2_arr = np.asarray(nu2, dtype=float)
    denominator = (
        (4.0 + epsilon**2) * (nu_arr**2 + nu2_arr**2)
        + 2.0 * (4.0 - epsilon**2) * nu_arr * nu2_arr
        + 4.0 * lam
    )
    value = (2.0 / np.pi) / denominator
    return float(value) if np.ndim(value) == 0 else value


def ess_threshold(alpha: float, epsilon: float) -> float:
    if not epsilon >= 0.0:
        raise DomainError(f'epsilon must be nonnegative, got {epsilon}')
    return -alpha**2 / (4.0 + epsilon**2)


def ess_symbol(alpha: float, epsilon: float, lam: float, nu: Real) -> Real:
    '''1 + alpha * md_symbol: its range is the essential spectrum of A(lambda).'''
    return restore_shape(1.0 + alpha * np.asarray(md_symbol(epsilon, lam, nu)), nu)


def panel_edges(
    nu_max: float,
    panels: int,
    first_width: float,
    growth: float,
) -> np.ndarray:
    '''
    Edges on [0, nu_max]: widths grow geometrically from first_width and are
    capped so that exactly `panels` panels cover the interval.
    '''
    assert panels >= 1 and nu_max > 0.0
    if panels * first_width >= nu_max:
        return np.linspace(0.0, nu_max, panels + 1)

    geometric = first_width * growth ** np.arange(panels)

    def total(cap: float) -> float:
        return float(np.sum(np.minimum(geometric, cap)))

    if total(geometric[-1]) <= nu_max:
        widths = geometric
    else:
        cap = root_bisect(
            lambda c: total(c) - nu_max, first_width, geometric[-1],
            tol=1e-12 * nu_max,
        )
        widths = np.minimum(geometric, cap)
    edges = np.concatenate([[0.0], np.cumsum(widths)])
    return edges * (nu_max / edges[-1])


class BsGrid():
    def __init__(
        self,
        nu_max: float,
        panels: int,
        order: int = None,
        first_width: float = None,
        growth: float = None,
    ) -> None:
        order = resolve(order, BS_GRID_CONFIG, 'panel_order')
        first_width = resolve(first_width, BS_GRID_CONFIG, 'first_panel_width')
        growth = resolve(growth, BS_GRID_CONFIG, 'panel_growth')
        if not nu_max > 0.0:
            raise DomainError(f'nu_max must be positive, got {nu_max}')
        self._nu_max = nu_max
        self._panels = panels
        self._order = order
        self._first_width = first_width
        self._growth = growth
        self._edges = panel_edges(nu_max, panels, first_width, growth)
        self._half = composite_gauss_legendre(self._edges, order)
        self._full = Grid1D(
            np.concatenate([-self._half.nodes[::-1], self._half.nodes]),
            np.concatenate([self._half.weights[::-1], self._half.weights]),
        )

    @property
    def nu_max(self) -> float:
        return self._nu_max

    @property
    def order(self) -> int:
        return self._order

    @property
    def panels(self) -> int:
        return self._panels

    @property
    def edges(self) -> np.ndarray:
        return self._edges

    @property
    def half(self) -> Grid1D:
        return self._half

    @property
    def full(self) -> Grid1D:
        return self._full

    @property
    def nodes(self) -> np.ndarray:
        return self._full.nodes

    @property
    def weights(self) -> np.ndarray:
        return self._full.weights

    def __len__(self) -> int:
        return len(self._full)

    def refined(
        self,
        nodes_factor: float = None,
        nu_max_factor: float = None,
    ) -> 'BsGrid':
        nodes_factor = resolve(nodes_factor, BS_GRID_CONFIG, 'refine_nodes_factor')
        nu_max_factor = resolve(nu_max_factor, BS_GRID_CONFIG, 'refine_nu_max_factor')
        return BsGrid(
            self._nu_max * nu_max_factor,
            int(np.ceil(self._panels * nodes_factor)),
            self._order, self._first_width, self._growth,
        )

    def as_dict(self) -> dict:
        return {
            'nu_max': self._nu_max,
            'nodes': len(self),
            'panels_per_side': self._panels,
            'panel_order': self._order,
        }


def default_nodes(epsilon: float) -> int:
    nodes = BS_GRID_CONFIG['nodes'] * max(1.0, 0.1 / epsilon)
    return int(min(BS_GRID_CONFIG['max_nodes'], nodes))


def make_bs_grid(
    params: PhysParams,
    nodes: int = None,
    nu_max: float = None,
) -> BsGrid:
    scale = abs(params.alpha) if params.alpha != 0.0 else 1.0
    if is_none(nodes):
        nodes = default_nodes(params.epsilon)
    if is_none(nu_max):
        nu_max = BS_GRID_CONFIG['nu_max_factor'] * scale * max(1.0, 1.0 / params.epsilon)
    order = BS_GRID_CONFIG['panel_order']
    panels = max(1, int(round(nodes / (2 * order))))
    return BsGrid(nu_max, panels, order, BS_GRID_CONFIG['first_panel_width'] * scale)


def _scaled_kernel(
    epsilon: float,
    lam: float,
    nodes: np.ndarray,
    weights: np.ndarray,
    mirror: float = 0.0,
) -> np.ndarray:
    root_w = np.sqrt(weights)
    kernel = mod_kernel(epsilon, lam, nodes[:, None], nodes[None, :])
    if mirror != 0.0:
        kernel = kernel + mirror * mod_kernel(epsilon, lam, nodes[:, None], -nodes[None, :])
    return root_w[:, None] * kernel * root_w[None, :]


def assemble(params: PhysParams, lam: float, grid: BsGrid) -> SymMatrix:
    nodes, weights = grid.nodes, grid.weights
    diagonal = np.diag(1.0 + params.alpha * md_symbol(params.epsilon, lam, nodes))
    off = _scaled_kernel(params.epsilon, lam, nodes, weights)
    return SymMatrix(diagonal + params.alpha * params.sector.sign * off)


def assemble_parity(
    params: PhysParams,
    lam: float,
    grid: BsGrid,
    parity: int,
) -> SymMatrix:
    '''Block of A(lambda) on vectors even (parity=+1) or odd (-1) under nu -> -nu.'''
    assert parity in (1, -1)
    nodes, weights = grid.half.nodes, grid.half.weights
    diagonal = np.diag(1.0 + params.alpha * md_symbol(params.epsilon, lam, nodes))
    off = _scaled_kernel(params.epsilon, lam, nodes, weights, mirror=float(parity))
    return SymMatrix(diagonal + params.alpha * params.sector.sign * off)


def curve_values(
    params: PhysParams,
    lam: float,
    grid: BsGrid,
    count: int,
) -> np.ndarray:
    '''The `count` smallest eigenvalues of A(lambda), from both parity blocks.'''
    n = len(grid.half)
    blocks = [
        sym_lowest_eigs(assemble_parity(params, lam, grid, parity), min(count, n))
        for parity in (1, -1)
    ]
    return np.sort(np.concatenate(blocks))[:count]


def curve_mu(params: PhysParams, lam: float, grid: BsGrid, k: int) -> float:
    return float(curve_values(params, lam, grid, k + 1)[k])


def hs_norm(epsilon: float, lam: float, grid: BsGrid) -> float:
    return float(np.linalg.norm(_scaled_kernel(epsilon, lam, grid.nodes, grid.weights)))


def hs_bound(epsilon: float, lam: float) -> float:
    return float(np.sqrt(1.0 / (2.0 * min(epsilon**2, 4.0) * lam)))


def null_vector(
    params: PhysParams,
    lam: float,
    grid: BsGrid,
) -> Tuple[float, np.ndarray]:
    '''
    Eigenvalue of A(lambda) closest to 0 and the matching Fourier-space trace
    samples xi(nu_i) (the eigenvector with the square-root weights removed).
    '''
    values, vectors = linalg.eigh(assemble(params, lam, grid).as_array())
    i = int(np.argmin(np.abs(values)))
    trace = vectors[:, i] / np.sqrt(grid.weights)
    trace = trace / np.sign(trace[np.argmax(np.abs(trace))])
    return float(values[i]), trace


class BoundStateResult():
    def __init__(
        self,
        params: PhysParams,
        level: int,
        lambda_star: float = None,
        grid_metadata: dict = None,
    ) -> None:
        self._params = params
        self._level = level
        self._lambda_star = lambda_star
        self._grid_metadata = {} if is_none(grid_metadata) else grid_metadata

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
    def level(self) -> int:
        return self._level

    @property
    def lambda_star(self) -> Union[float, None]:
        return self._lambda_star

    @property
    def converged(self) -> bool:
        return not is_none(self._lambda_star)

    @property
    def E(self) -> Union[float, None]:
        return None if is_none(self._lambda_star) else -self._lambda_star

    @property
    def grid_metadata(self) -> dict:
        return self._grid_metadata

    def as_dict(self) -> dict:
        return {
            'alpha': self.alpha,
            'epsilon': self.epsilon,
            'sector': self.sector.value,
            'level': self._level,
            'lambda_star': self._lambda_star,
            'E': self.E,
            'converged': self.converged,
            **self._grid_metadata,
        }


def _solve_levels(
    params: PhysParams,
    levels: int,
    grid: BsGrid,
    tol: float,
) -> List[Union[float, None]]:
    alpha2 = params.alpha**2
    lam_lo = alpha2 / (4.0 + params.epsilon**2) * (1.0 + 10.0 * tol)
    lam_hi = alpha2 * (1.0 + BS_GRID_CONFIG['upper_bracket_slack'] * params.epsilon)
    cache: Dict[float, np.ndarray] = {}

    def values(lam: float) -> np.ndarray:
        if lam not in cache:
            cache[lam] = curve_values(params, lam, grid, levels)
        return cache[lam]

    if values(lam_hi)[0] <= 0.0:
        raise BracketError(
            f'A(lambda) is not positive at lambda={lam_hi:.6g}; the momentum grid '
            f'({len(grid)} nodes, nu_max={grid.nu_max:.4g}) is too coarse'
        )

    roots = []
    upper = lam_hi
    for k in range(levels):
        if values(lam_lo)[k] >= 0.0:
            logger.info('level %d has no crossing above the threshold', k)
            roots.extend([None] * (levels - k))
            break
        root = root_bisect(
            lambda lam: values(lam)[k], lam_lo, upper, tol * alpha2,
            method=BS_GRID_CONFIG['root_method'],
        )
        logger.debug('level %d: lambda* = %.12g', k, root)
        roots.append(root)
        upper = root
    return roots


def bs_bound_states(
    params: PhysParams,
    levels: int = 2,
    grid: BsGrid = None,
    tol: float = None,
    check_convergence: bool = True,
) -> List[BoundStateResult]:
    if not params.has_bound_states:
        logger.info('alpha=%g >= 0: no bound states', params.alpha)
        return []
    if not params.epsilon <= EFFECTIVE_CONFIG['max_epsilon']:
        raise DomainError(f'epsilon must lie in (0, 1], got {params.epsilon}')
    tol = resolve(tol, BS_GRID_CONFIG, 'tol')
    if is_none(grid):
        grid = make_bs_grid(params)

    roots = _solve_levels(params, levels, grid, tol)
    metadata = grid.as_dict()
    if check_convergence:
        refined = grid.refined()
        refined_roots = _solve_levels(params, levels, refined, tol)
        allowed = 10.0 * tol * params.alpha**2
        for k, (root, check) in enumerate(zip(roots, refined_roots)):
            if is_none(root) or is_none(check):
                continue
            if abs(root - check) > allowed:
                raise GridConvergenceError(
                    f'level {k} moved from {root:.10g} to {check:.10g} on the refined '
                    f'grid ({len(refined)} nodes, nu_max={refined.nu_max:.4g}); '
                    f'allowed {allowed:.3e}'
                )
        metadata['refined_nodes'] = len(refined)
        metadata['refined_nu_max'] = refined.nu_max

    return [BoundStateResult(params, k, root, metadata) for k, root in enumerate(roots)]
