import logging
from typing import Callable, Sequence, Union

import numpy as np
from scipy import integrate, linalg, optimize

from hlbs.config import BS_GRID_CONFIG, QUAD_CONFIG
from hlbs.constants import MACHINE_EPSILON
from hlbs.errors import BracketError, ConvergenceError, DomainError, SizeError
from hlbs.utils.config import resolve


logger = logging.getLogger(__name__)

CERTIFY_RTOL = 1e-12


class Grid1D():
    def __init__(
        self,
        nodes: Union[Sequence[float], np.ndarray],
        weights: Union[Sequence[float], np.ndarray],
    ) -> None:
        nodes = np.asarray(nodes, dtype=float)
        weights = np.asarray(weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise DomainError('nodes and weights must be 1D and of equal length')
        if len(nodes) < 2:
            raise DomainError('a grid needs at least two nodes')
        if np.any(np.diff(nodes) <= 0.0):
            raise DomainError('grid nodes must be strictly increasing')
        if np.any(weights <= 0.0):
            raise DomainError('grid weights must be positive')
        self._nodes = nodes
        self._weights = weights

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    def __len__(self) -> int:
        return len(self._nodes)

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self._weights, values))


class SymMatrix():
    '''Real symmetric matrix stored by its lower triangle.'''
    def __init__(self, lower: np.ndarray) -> None:
        lower = np.asarray(lower, dtype=float)
        assert lower.ndim == 2 and lower.shape[0] == lower.shape[1]
        self._lower = np.tril(lower)

    @classmethod
    def from_dense(cls, a: np.ndarray) -> 'SymMatrix':
        return cls(np.tril(a))

    @property
    def n(self) -> int:
        return self._lower.shape[0]

    def as_array(self) -> np.ndarray:
        return self._lower + np.tril(self._lower, -1).T

    def diagonal(self) -> np.ndarray:
        return np.diag(self._lower).copy()

    def __add__(self, other: 'SymMatrix') -> 'SymMatrix':
        return SymMatrix(self._lower + other._lower)

    def __sub__(self, other: 'SymMatrix') -> 'SymMatrix':
        return SymMatrix(self._lower - other._lower)


def composite_gauss_legendre(
    edges: Union[Sequence[float], np.ndarray],
    order: int,
) -> Grid1D:
    edges = np.asarray(edges, dtype=float)
    x, w = np.polynomial.legendre.leggauss(order)
    left, right = edges[:-1], edges[1:]
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return Grid1D(nodes, weights)


def _mapped_tail(
    f: Callable[[float], float],
    origin: float,
    direction: float,
) -> Callable[[float], float]:
    # y = origin + direction * t / (1 - t^2), t in (0, 1)
    def g(t: float) -> float:
        if t >= 1.0:
            return 0.0
        s = 1.0 - t * t
        y = origin + direction * t / s
        value = f(y)
        if value == 0.0:
            return 0.0
        return value * (1.0 + t * t) / (s * s)
    return g


def quad_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    breakpoints: Sequence[float] = (),
    rel_tol: float = None,
) -> float:
    rel_tol = resolve(rel_tol, QUAD_CONFIG, 'rel_tol')
    if not a < b:
        raise DomainError(f'quadrature needs a < b, got [{a}, {b}]')
    inner = sorted(p for p in breakpoints if a < p < b)
    if np.isinf(a) and np.isinf(b) and not inner:
        inner = [0.0]
    edges = [a] + inner + [b]

    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if np.isinf(lo):
            g, lo_t, hi_t = _mapped_tail(f, hi, -1.0), 0.0, 1.0
        elif np.isinf(hi):
            g, lo_t, hi_t = _mapped_tail(f, lo, 1.0), 0.0, 1.0
        else:
            g, lo_t, hi_t = f, lo, hi
        out = integrate.quad(
            g, lo_t, hi_t,
            epsabs=QUAD_CONFIG['abs_tol'], epsrel=rel_tol,
            limit=QUAD_CONFIG['limit'], full_output=1,
        )
        value, error, info = out[:3]
        if len(out) > 3:
            if info['last'] >= QUAD_CONFIG['limit']:
                raise ConvergenceError(
                    f'quadrature on [{lo}, {hi}] hit {info["last"]} subdivisions '
                    f'(error estimate {error:.3e})'
                )
            logger.warning(
                'quad on [%g, %g] accepted with error estimate %.3e: %s', lo, hi, error, out[3],
            )
        total += value
    return total


def sturm_count(
    diag: np.ndarray,
    offdiag: np.ndarray,
    shift: float,
) -> int:
    '''Number of eigenvalues of the symmetric tridiagonal matrix below shift.'''
    d = [float(v) for v in diag]
    e2 = [float(v) ** 2 for v in offdiag]
    scale = max(abs(v) for v in d) + 2.0 * max((abs(v) for v in offdiag), default=0.0)
    tiny = MACHINE_EPSILON * max(scale, 1.0)
    count = 0
    q = d[0] - shift
    for i in range(len(d)):
        if i > 0:
            q = d[i] - shift - e2[i - 1] / q
        if q == 0.0:
            q = -tiny
        if q < 0.0:
            count += 1
    return count


def tridiag_lowest_eigs(
    diag: Union[Sequence[float], np.ndarray],
    offdiag: Union[Sequence[float], np.ndarray],
    k: int,
    certify: bool = True,
) -> np.ndarray:
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    n = len(diag)
    if len(offdiag) != n - 1:
        raise DomainError(f'offdiag must have length {n - 1}, got {len(offdiag)}')
    if not 1 <= k <= n:
        raise DomainError(f'requested {k} eigenvalues of an order-{n} matrix')

    if n == 1:
        return diag.copy()
    eigs = linalg.eigh_tridiagonal(
        diag, offdiag, eigvals_only=True,
        select='i', select_range=(0, k - 1),
    )
    eigs = np.sort(eigs)

    if certify:
        scale = np.max(np.abs(diag)) + 2.0 * np.max(np.abs(offdiag), initial=0.0)
        slack = CERTIFY_RTOL * scale
        for j, value in enumerate(eigs):
            below = sturm_count(diag, offdiag, value - slack)
            above = sturm_count(diag, offdiag, value + slack)
            if below > j or above < j + 1:
                logger.warning(
                    'Sturm count disagrees with eigenvalue %d (%.16g): %d below, %d above',
                    j, value, below, above,
                )
    return eigs


def sym_lowest_eigs(
    a: Union[SymMatrix, np.ndarray],
    k: int,
) -> np.ndarray:
    dense = a.as_array() if isinstance(a, SymMatrix) else np.asarray(a, dtype=float)
    n = dense.shape[0]
    if n > BS_GRID_CONFIG['max_dense_order']:
        raise SizeError(f'order {n} exceeds dense cap {BS_GRID_CONFIG["max_dense_order"]}')
    if not 1 <= k <= n:
        raise DomainError(f'requested {k} eigenvalues of an order-{n} matrix')
    return linalg.eigh(dense, eigvals_only=True, subset_by_index=[0, k - 1])


def root_bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
    method: str = 'bisect',
) -> float:
    '''
    Root of f inside a sign-changing bracket [lo, hi], returned once the
    bracket is narrower than tol. method='brentq' keeps the bracket but
    accelerates with inverse interpolation.
    '''
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise BracketError(
            f'no sign change on [{lo}, {hi}]: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}'
        )
    max_iterations = int(np.ceil(np.log2(max((hi - lo) / tol, 1.0)))) + 2
    if method == 'bisect':
        root, result = optimize.bisect(
            f, lo, hi, xtol=tol, maxiter=max_iterations, full_output=True, disp=False,
        )
    elif method == 'brentq':
        root, result = optimize.brentq(
            f, lo, hi, xtol=tol, maxiter=max_iterations, full_output=True, disp=False,
        )
    else:
        raise DomainError(f'unknown root method {method}')
    if not result.converged:
        raise ConvergenceError(f'{method} did not converge on [{lo}, {hi}]: {result.flag}')
    logger.debug('%s root %.12g after %d evaluations', method, root, result.function_calls)
    return float(root)


def richardson2(v_h: float, v_h2: float) -> float:
    return (4.0 * v_h2 - v_h) / 3.0


def observed_order(v_h: float, v_h2: float, v_h4: float) -> float:
    '''Convergence order p from three values at steps h, h/2, h/4.'''
    return float(np.log2(abs(v_h - v_h2) / abs(v_h2 - v_h4)))


def loglog_slope(
    xs: Union[Sequence[float], np.ndarray],
    ys: Union[Sequence[float], np.ndarray],
) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(xs)), np.log(np.abs(np.asarray(ys))), 1)
    return float(slope)
