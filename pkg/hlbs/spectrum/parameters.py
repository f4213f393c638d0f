from enum import Enum
from typing import Tuple

import numpy as np

from hlbs.config import MASS_CONFIG, PARAMETER_CONFIG
from hlbs.errors import ConfigError, DomainError
from hlbs.utils.config import check_bounds, get_default_values
from hlbs.utils.misc import is_none


class Sector(Enum):
    BOSONIC = 'b'
    FERMIONIC = 'f'

    @classmethod
    def parse(cls, value) -> 'Sector':
        if isinstance(value, Sector):
            return value
        key = str(value).strip().lower()
        for sector in cls:
            if key in (sector.value, sector.name.lower()):
                return sector
        raise ConfigError(f'unknown sector {value!r}, expected b or f')

    @property
    def sign(self) -> float:
        '''Sign in front of the off-diagonal block.'''
        return 1.0 if self is Sector.BOSONIC else -1.0

    def sigma_index(self, k: int) -> int:
        '''Index of the Airy constant governing level k of this sector.'''
        return 2*k if self is Sector.BOSONIC else 2*k + 1


class PhysParams():
    def __init__(
        self,
        alpha: float = None,
        epsilon: float = None,
        sector: Sector = Sector.BOSONIC,
    ) -> None:
        defaults = get_default_values(PARAMETER_CONFIG)
        if is_none(alpha):
            alpha = defaults['alpha']
        if is_none(epsilon):
            epsilon = defaults['epsilon']
        check_bounds('alpha', alpha, PARAMETER_CONFIG)
        check_bounds('epsilon', epsilon, PARAMETER_CONFIG, strict_lower=True)
        self._alpha = float(alpha)
        self._epsilon = float(epsilon)
        self._sector = Sector.parse(sector)

    @property
    def alpha(self) -> float:
        return self._alpha

    @property
    def epsilon(self) -> float:
        return self._epsilon

    @property
    def sector(self) -> Sector:
        return self._sector

    @property
    def has_bound_states(self) -> bool:
        return self._alpha < 0.0

    def require_attractive(self) -> None:
        if not self.has_bound_states:
            raise DomainError(f'bound states need alpha < 0, got {self._alpha}')

    def with_epsilon(self, epsilon: float) -> 'PhysParams':
        return PhysParams(self._alpha, epsilon, self._sector)

    def with_sector(self, sector: Sector) -> 'PhysParams':
        return PhysParams(self._alpha, self._epsilon, sector)

    def as_dict(self) -> dict:
        return {
            'alpha': self._alpha,
            'epsilon': self._epsilon,
            'sector': self._sector.value,
        }

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PhysParams) and self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash(tuple(self.as_dict().items()))

    def __repr__(self) -> str:
        return (
            f'PhysParams(alpha={self._alpha!r}, epsilon={self._epsilon!r}, '
            f'sector={self._sector.value})'
        )


def require_attractive(alpha: float) -> None:
    if not alpha < 0.0:
        raise DomainError(f'bound states need alpha < 0, got {alpha}')


def phys_to_scaled(
    M: float,
    m: float,
    beta: float,
) -> Tuple[float, float]:
    '''
    Heavy mass M, light mass m and contact strength beta to the scaled
    (epsilon, alpha) with mu = 2Mm/(2M+m), epsilon^2 = 2mu/M, alpha = 2 mu beta.
    '''
    if not (M > 0.0 and m > 0.0):
        raise DomainError(f'masses must be positive, got M={M}, m={m}')
    check_bounds('M', M, MASS_CONFIG, strict_lower=True)
    check_bounds('m', m, MASS_CONFIG, strict_lower=True)
    mu = 2.0 * M * m / (2.0 * M + m)
    epsilon = np.sqrt(2.0 * mu / M)
    alpha = 2.0 * mu * beta
    return float(epsilon), float(alpha)


def reduced_mass(M: float, m: float) -> float:
    return 2.0 * M * m / (2.0 * M + m)
