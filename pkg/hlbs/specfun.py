import logging
from enum import Enum
from typing import Tuple, Union

import numpy as np
from scipy import optimize, special

from hlbs.constants import (
    AIRY_AI_0, AIRY_AIP_0, INV_E, LAMBERT_BRANCH_WINDOW, LAMBERT_DOMAIN_SLACK,
    MACHINE_EPSILON, MAX_SIGMA_INDEX,
)
from hlbs.errors import DomainError, RangeError
from hlbs.utils.misc import restore_shape


logger = logging.getLogger(__name__)

# W0(-1/e + p^2/(2e)) = -1 + p - p^2/3 + ...
BRANCH_SERIES = (
    -1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0,
    769.0 / 17280.0, -221.0 / 8505.0, 680863.0 / 43545600.0,
)

# Number of terms in the large-|x| Airy expansions and the band where they
# are compared with the library evaluation.
AIRY_ASYMPTOTIC_TERMS = 12
AIRY_CROSSOVER_BAND = (9.0, 12.0)


def lambert_w0_branch(p: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    '''Principal branch of W near -1/e in terms of p = sqrt(2(1 + e*u)).'''
    p = np.asarray(p, dtype=float)
    return restore_shape(np.polynomial.polynomial.polyval(p, BRANCH_SERIES), p)


def lambert_w0(u: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(np.isnan(u_arr)) or np.any(u_arr < -INV_E - LAMBERT_DOMAIN_SLACK):
        raise DomainError(f'Lambert W0 is undefined below -1/e, got {u}')
    u_arr = np.maximum(u_arr, -INV_E)

    w = np.real(special.lambertw(u_arr, 0))
    near = (u_arr + INV_E) < LAMBERT_BRANCH_WINDOW
    if np.any(near):
        p = np.sqrt(2.0 * np.maximum(np.e * u_arr[near] + 1.0, 0.0))
        w[near] = np.polynomial.polynomial.polyval(p, BRANCH_SERIES)
    return restore_shape(np.maximum(w, -1.0), u)


def airy_ai(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    ai, _, _, _ = special.airy(np.asarray(x, dtype=float))
    return restore_shape(ai, x)


def airy_ai_prime(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    _, aip, _, _ = special.airy(np.asarray(x, dtype=float))
    return restore_shape(aip, x)


def airy_maclaurin(x: float, max_terms: int = 120) -> Tuple[float, float]:
    '''(Ai(x), Ai'(x)) from the two power series about 0; for |x| <~ 7.'''
    x = float(x)
    cube = x**3
    f, g = 1.0, x
    fp, gp = 0.0, 1.0
    t_f, t_g = 1.0, x
    t_fp, t_gp = 0.5 * x * x, 1.0
    for k in range(1, max_terms):
        t_f *= cube / ((3*k - 1) * 3*k)
        t_g *= cube / (3*k * (3*k + 1))
        if k > 1:
            t_fp *= cube / (3 * (k - 1) * (3*k - 1))
        t_gp *= cube / (3*k * (3*k - 2))
        f += t_f
        g += t_g
        fp += t_fp
        gp += t_gp
        if max(abs(t_f), abs(t_g), abs(t_fp), abs(t_gp)) < 1e-18 * max(1.0, abs(f), abs(g)):
            break
    ai = AIRY_AI_0 * f + AIRY_AIP_0 * g
    aip = AIRY_AI_0 * fp + AIRY_AIP_0 * gp
    return ai, aip


def _asymptotic_coefficients(terms: int) -> Tuple[np.ndarray, np.ndarray]:
    u = np.ones(terms)
    v = np.ones(terms)
    for k in range(1, terms):
        u[k] = u[k - 1] * (6*k - 5) * (6*k - 3) * (6*k - 1) / ((2*k - 1) * 216 * k)
        v[k] = -(6*k + 1) / (6*k - 1) * u[k]
    return u, v


def airy_asymptotic(
    x: float,
    terms: int = AIRY_ASYMPTOTIC_TERMS,
) -> Tuple[float, float]:
    '''
    Large-|x| expansions of (Ai(x), Ai'(x)): the exponential form for x > 0
    and the trigonometric form for x < 0. Only meaningful for |x| >~ 7.
    '''
    if x == 0.0:
        raise DomainError('asymptotic Airy expansion needs x != 0')
    u, v = _asymptotic_coefficients(terms)
    z = abs(x)
    zeta = 2.0 / 3.0 * z**1.5
    powers = zeta ** -np.arange(terms, dtype=float)
    signs = (-1.0) ** np.arange(terms)

    if x > 0.0:
        prefactor = np.exp(-zeta) / (2.0 * np.sqrt(np.pi))
        ai = prefactor * z**-0.25 * np.sum(signs * u * powers)
        aip = -prefactor * z**0.25 * np.sum(signs * v * powers)
        return float(ai), float(aip)

    even = np.arange(0, terms, 2)
    odd = np.arange(1, terms, 2)
    alt_even = (-1.0) ** np.arange(len(even))
    alt_odd = (-1.0) ** np.arange(len(odd))
    theta = zeta + np.pi / 4.0
    p_u = np.sum(alt_even * u[even] * powers[even])
    q_u = np.sum(alt_odd * u[odd] * powers[odd])
    p_v = np.sum(alt_even * v[even] * powers[even])
    q_v = np.sum(alt_odd * v[odd] * powers[odd])
    ai = (np.sin(theta) * p_u - np.cos(theta) * q_u) / (np.sqrt(np.pi) * z**0.25)
    aip = -z**0.25 * (np.cos(theta) * p_v + np.sin(theta) * q_v) / np.sqrt(np.pi)
    return float(ai), float(aip)


class SigmaKind(Enum):
    EXTREMUM = 'extremum'
    ZERO = 'zero'


class AirySigma():
    def __init__(
        self,
        k: int,
        value: float,
        kind: SigmaKind,
    ) -> None:
        assert value < 0.0
        self._k = k
        self._value = value
        self._kind = kind

    @property
    def k(self) -> int:
        return self._k

    @property
    def value(self) -> float:
        return self._value

    @property
    def kind(self) -> SigmaKind:
        return self._kind

    def __abs__(self) -> float:
        return abs(self._value)

    def __float__(self) -> float:
        return self._value

    def __repr__(self) -> str:
        return f'AirySigma(k={self._k}, value={self._value!r}, kind={self._kind.value})'


def zero_bounds(n: int) -> Tuple[float, float]:
    '''Enclosure [lower, upper] of the (n+1)-th zero of Ai, i.e. sigma_{2n+1}.'''
    t = 3.0 * np.pi * (4*n + 3) / 8.0
    correction = 1.5 * np.arctan(5.0 / (18.0 * np.pi * (4*n + 3)))
    return -(t + correction) ** (2.0 / 3.0), -t ** (2.0 / 3.0)


def extremum_upper_bound(n: int) -> float:
    '''Upper bound on sigma_{2n}, n >= 1.'''
    assert n >= 1
    return -(3.0 * np.pi * (4*n - 1) / 8.0) ** (2.0 / 3.0)


def _polish(f, fprime, lo: float, hi: float) -> float:
    x0 = optimize.bisect(f, lo, hi, xtol=1e-10)
    tol = 4.0 * MACHINE_EPSILON * max(1.0, abs(x0))
    x = optimize.newton(f, x0, fprime=fprime, tol=tol, maxiter=50, disp=False)
    return float(x)


def _airy_zero(n: int) -> float:
    lower, upper = zero_bounds(n)
    pad = 1e-6 * (1.0 + abs(upper))
    return _polish(airy_ai, airy_ai_prime, lower - pad, upper + pad)


def sigma(k: int) -> AirySigma:
    if int(k) != k or k < 0:
        raise RangeError(f'sigma index must be a nonnegative integer, got {k}')
    if k > MAX_SIGMA_INDEX:
        raise RangeError(f'sigma index {k} exceeds supported maximum {MAX_SIGMA_INDEX}')
    k = int(k)

    n = k // 2
    if k % 2 == 1:
        return AirySigma(k, _airy_zero(n), SigmaKind.ZERO)

    # Ai' has exactly one zero between consecutive zeros of Ai (and in (sigma_1, 0))
    lower = _airy_zero(n)
    upper = 0.0 if n == 0 else _airy_zero(n - 1)
    value = _polish(
        airy_ai_prime,
        lambda x: x * airy_ai(x),
        lower,
        upper,
    )
    logger.debug('sigma_%d = %.16g', k, value)
    return AirySigma(k, value, SigmaKind.EXTREMUM)
