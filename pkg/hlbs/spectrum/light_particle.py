'''
Light particle in the field of two frozen heavy particles at -x/2 and +x/2:
two attractive contact wells of strength alpha. All closed forms are written
in the scaled separation t = |alpha||x|/2, where sqrt(lambda) = |alpha| nu / 2
and nu solves nu = 1 +- exp(-t nu).
'''
import logging
from math import factorial
from typing import List, Tuple, Union

import numpy as np

from hlbs.constants import SMALL_ETA_SERIES, SMALL_T_SERIES
from hlbs.errors import DomainError
from hlbs.specfun import lambert_w0, lambert_w0_branch
from hlbs.spectrum.parameters import require_attractive
from hlbs.utils.misc import is_none, restore_shape


logger = logging.getLogger(__name__)

Real = Union[float, np.ndarray]

ETA_SERIES_TERMS = 14


def _ground_excess(t: np.ndarray) -> np.ndarray:
    '''nu - 1 = W(t e^-t)/t on the ground branch.'''
    m = np.empty_like(t)
    small = t < SMALL_T_SERIES
    ts = t[small]
    m[small] = 1.0 - 2.0 * ts + 4.0 * ts**2
    tb = t[~small]
    if tb.size:
        m[~small] = np.atleast_1d(lambert_w0(tb * np.exp(-tb))) / tb
    return m


def _threshold_gap(eta: np.ndarray) -> np.ndarray:
    '''1 - (1 + eta) e^-eta, by its series when eta is small.'''
    gap = np.empty_like(eta)
    small = eta < SMALL_ETA_SERIES
    es = eta[small]
    gap[small] = sum(
        (-1.0)**n * (n - 1) * es**n / factorial(n) for n in range(2, ETA_SERIES_TERMS)
    )
    eb = eta[~small]
    gap[~small] = -np.expm1(-eb) - eb * np.exp(-eb)
    return gap


def _excited_excess(t: np.ndarray) -> np.ndarray:
    '''nu - 1 = W(-t e^-t)/t on the excited branch, t > 1.'''
    eta = t - 1.0
    w = np.empty_like(t)
    near = eta < SMALL_ETA_SERIES
    if np.any(near):
        p = np.sqrt(2.0 * _threshold_gap(eta[near]))
        w[near] = np.atleast_1d(lambert_w0_branch(p))
    tf = t[~near]
    if tf.size:
        w[~near] = np.atleast_1d(lambert_w0(-tf * np.exp(-tf)))
    return w / t


def nu_ground(t: Real) -> Real:
    t_arr = np.atleast_1d(np.abs(np.asarray(t, dtype=float)))
    return restore_shape(1.0 + _ground_excess(t_arr), t)


def nu_excited(t: Real) -> Real:
    t_arr = np.atleast_1d(np.abs(np.asarray(t, dtype=float)))
    if np.any(t_arr <= 1.0):
        raise DomainError('the excited branch needs t > 1')
    return restore_shape(1.0 + _excited_excess(t_arr), t)


def _scaled(alpha: float, x: Real) -> np.ndarray:
    require_attractive(alpha)
    return np.atleast_1d(0.5 * abs(alpha) * np.abs(np.asarray(x, dtype=float)))


def sqrt_lambda0(alpha: float, x: Real) -> Real:
    t = _scaled(alpha, x)
    return restore_shape(0.5 * abs(alpha) * (1.0 + _ground_excess(t)), x)


def lambda0(alpha: float, x: Real) -> Real:
    return restore_shape(np.asarray(sqrt_lambda0(alpha, x)) ** 2, x)


def lambda1(alpha: float, x: Real) -> Real:
    t = _scaled(alpha, x)
    if np.any(t <= 1.0):
        raise DomainError(
            f'second bound state needs |x| > 2/|alpha| = {2.0 / abs(alpha)}'
        )
    k = 0.5 * abs(alpha) * (1.0 + _excited_excess(t))
    return restore_shape(k**2, x)


def has_excited_state(alpha: float, x: Real) -> Union[bool, np.ndarray]:
    mask = np.abs(np.asarray(x, dtype=float)) > 2.0 / abs(alpha)
    return bool(mask) if np.ndim(mask) == 0 else mask


def eigen_residual(alpha: float, x: Real, lam: Real) -> Real:
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr <= 0.0):
        raise DomainError('eigen_residual needs lambda > 0')
    root = np.sqrt(lam_arr)
    x_arr = np.abs(np.asarray(x, dtype=float))
    value = (alpha + 2.0 * root)**2 - alpha**2 * np.exp(-2.0 * root * x_arr)
    return float(value) if np.ndim(value) == 0 else value


def _normalization(k: np.ndarray, a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    s = k * a
    denominator = 1.0 + np.exp(-s) * (1.0 + s)
    return np.sqrt(k / (2.0 * denominator)), denominator


def normalization_N(alpha: float, x: Real) -> Real:
    a = np.atleast_1d(np.abs(np.asarray(x, dtype=float)))
    k = np.atleast_1d(sqrt_lambda0(alpha, a))
    norm, _ = _normalization(k, a)
    return restore_shape(norm, x)


def psi_bo(alpha: float, x: Real, y: Real) -> Real:
    x_b, y_b = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float),
    )
    k = np.asarray(sqrt_lambda0(alpha, x_b))
    norm = np.asarray(normalization_N(alpha, x_b))
    half = 0.5 * x_b
    value = norm * (np.exp(-k * np.abs(half - y_b)) + np.exp(-k * np.abs(half + y_b)))
    return value if np.ndim(x_b) else float(value)


def _sign_with_side(a: np.ndarray, side: float) -> np.ndarray:
    return np.where(a == 0.0, side, np.sign(a))


def psi_bo_dy(alpha: float, x: Real, y: Real, side: float = 1.0) -> Real:
    '''
    y-derivative of psi_bo. At the kinks y = +-x/2 the one-sided limit
    from the right (side=+1) or the left (side=-1) is returned.
    '''
    x_b, y_b = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float),
    )
    k = np.asarray(sqrt_lambda0(alpha, x_b))
    norm = np.asarray(normalization_N(alpha, x_b))
    a = 0.5 * x_b - y_b
    b = 0.5 * x_b + y_b
    value = norm * k * (
        _sign_with_side(a, -side) * np.exp(-k * np.abs(a))
        - _sign_with_side(b, side) * np.exp(-k * np.abs(b))
    )
    return value if np.ndim(x_b) else float(value)


class GroundDerivatives():
    '''x-derivatives of sqrt(lambda0) and log N at fixed separation(s) x != 0.'''
    def __init__(self, alpha: float, x: Real) -> None:
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(x_arr == 0.0):
            raise DomainError('lambda0 is not differentiable at x = 0')
        t = _scaled(alpha, x_arr)
        m = _ground_excess(t)
        a = np.abs(x_arr)
        sign = np.sign(x_arr)

        self._x = x_arr
        self._k = 0.5 * abs(alpha) * (1.0 + m)
        # nu'/nu = -1/(exp(t nu) + t) and exp(-t nu) = nu - 1
        log_slope = -m / (1.0 + t * m)
        self._dk = sign * 0.5 * abs(alpha) * self._k * log_slope
        self._norm, denominator = _normalization(self._k, a)
        s = self._k * a
        dk_abs = sign * self._dk
        self._dlog_norm = sign * (
            dk_abs / (2.0 * self._k)
            + s * np.exp(-s) * (dk_abs * a + self._k) / (2.0 * denominator)
        )
        self._s = s

    @property
    def x(self) -> np.ndarray:
        return self._x

    @property
    def k(self) -> np.ndarray:
        return self._k

    @property
    def dk(self) -> np.ndarray:
        return self._dk

    @property
    def dlambda0(self) -> np.ndarray:
        return 2.0 * self._k * self._dk

    @property
    def norm(self) -> np.ndarray:
        return self._norm

    @property
    def dlog_norm(self) -> np.ndarray:
        return self._dlog_norm

    @property
    def s(self) -> np.ndarray:
        return self._s


def dpsi_bo_dx_components(
    alpha: float,
    x: float,
    y: Real,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    '''(phi1, phi2, phi3) at a single separation x != 0, vectorised in y.'''
    d = GroundDerivatives(alpha, float(x))
    k, dk, norm = d.k[0], d.dk[0], d.norm[0]
    y = np.asarray(y, dtype=float)
    a = 0.5 * x - y
    b = 0.5 * x + y
    e1 = np.exp(-k * np.abs(a))
    e2 = np.exp(-k * np.abs(b))
    phi1 = d.dlog_norm[0] * norm * (e1 + e2)
    phi2 = norm * dk * (np.abs(a) * e1 + np.abs(b) * e2)
    phi3 = 0.5 * k * norm * (np.sign(a) * e1 + np.sign(b) * e2)
    return phi1, phi2, phi3


def dpsi_bo_dx(alpha: float, x: float, y: Real) -> Real:
    phi1, phi2, phi3 = dpsi_bo_dx_components(alpha, x, y)
    return restore_shape(phi1 - phi2 - phi3, y)


def component_norms_sq(alpha: float, x: Real) -> Tuple[Real, Real, Real]:
    '''Closed forms of the squared L2(dy) norms of phi1, phi2, phi3.'''
    d = GroundDerivatives(alpha, x)
    s, k = d.s, d.k
    decay = np.exp(-s)
    denominator = 1.0 + decay + s * decay
    phi1 = d.dlog_norm**2
    phi2 = d.norm**2 * d.dk**2 / k**3 * (1.0 + decay * (1.0 + s + s**3 / 3.0))
    phi3 = 0.25 * k**2 * (1.0 - decay + s * decay) / denominator
    return restore_shape(phi1, x), restore_shape(phi2, x), restore_shape(phi3, x)


def dpsi_bo_dy_norm_sq(alpha: float, x: Real) -> Real:
    '''Closed form of the light-particle kinetic energy integral of psi_bo.'''
    a = np.atleast_1d(np.abs(np.asarray(x, dtype=float)))
    k = np.atleast_1d(sqrt_lambda0(alpha, a))
    s = k * a
    decay = np.exp(-s)
    value = k**2 * (1.0 + decay - s * decay) / (1.0 + decay + s * decay)
    return restore_shape(value, x)


class LightSpectrum():
    def __init__(
        self,
        x: float,
        lambda0: float,
        N: float,
        lambda1: float = None,
    ) -> None:
        self._x = x
        self._lambda0 = lambda0
        self._lambda1 = lambda1
        self._N = N

    @property
    def x(self) -> float:
        return self._x

    @property
    def lambda0(self) -> float:
        return self._lambda0

    @property
    def lambda1(self) -> Union[float, None]:
        return self._lambda1

    @property
    def N(self) -> float:
        return self._N

    @property
    def has_excited_state(self) -> bool:
        return not is_none(self._lambda1)

    def as_dict(self) -> dict:
        return {
            'x': self._x,
            'lambda0': self._lambda0,
            'lambda1': self._lambda1,
            'N': self._N,
        }


def light_spectrum(alpha: float, x: float) -> LightSpectrum:
    x = float(x)
    excited = lambda1(alpha, x) if has_excited_state(alpha, x) else None
    return LightSpectrum(x, lambda0(alpha, x), normalization_N(alpha, x), excited)


def figure_dataset(alpha: float, xs: np.ndarray) -> List[Tuple[float, float, Union[float, None]]]:
    '''(x, -lambda0(x), -lambda1(x) or None) over xs.'''
    rows = []
    for x in np.asarray(xs, dtype=float):
        spectrum = light_spectrum(alpha, x)
        excited = None if is_none(spectrum.lambda1) else -spectrum.lambda1
        rows.append((spectrum.x, -spectrum.lambda0, excited))
    return rows
