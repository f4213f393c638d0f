from typing import List, Tuple, Union

import numpy as np

from hlbs.numerics import loglog_slope
from hlbs.spectrum.parameters import Sector
from hlbs.utils.misc import is_none


TABLE_COLUMNS = (
    'alpha', 'epsilon', 'sector', 'k', 'E_bs', 'E_eff', 'E_airy', 'ratio', 's_k',
)


class SpectralTableRow():
    def __init__(
        self,
        alpha: float,
        epsilon: float,
        sector: Sector,
        k: int,
        s_k: float,
        E_airy: float,
        E_bs: float = None,
        E_eff: float = None,
    ) -> None:
        self.alpha = alpha
        self.epsilon = epsilon
        self.sector = Sector.parse(sector)
        self.k = k
        self.s_k = s_k
        self.E_airy = E_airy
        self.E_bs = E_bs
        self.E_eff = E_eff

    @property
    def scale(self) -> float:
        return self.alpha**2 * self.epsilon ** (2.0 / 3.0)

    @property
    def ratio(self) -> Union[float, None]:
        '''(E_bs + alpha^2) / (alpha^2 eps^(2/3)), the exact-solver estimate of s_k.'''
        if is_none(self.E_bs):
            return None
        return (self.E_bs + self.alpha**2) / self.scale

    @property
    def eff_ratio(self) -> Union[float, None]:
        if is_none(self.E_eff):
            return None
        return (self.E_eff + self.alpha**2) / self.scale

    @property
    def cross_gap(self) -> Union[float, None]:
        if is_none(self.E_bs) or is_none(self.E_eff):
            return None
        return abs(self.E_bs - self.E_eff)

    @property
    def sort_key(self) -> Tuple[float, str, int]:
        return (self.epsilon, self.sector.value, self.k)

    def as_dict(self) -> dict:
        return {
            'alpha': self.alpha,
            'epsilon': self.epsilon,
            'sector': self.sector.value,
            'k': self.k,
            'E_bs': self.E_bs,
            'E_eff': self.E_eff,
            'E_airy': self.E_airy,
            'ratio': self.ratio,
            's_k': self.s_k,
        }


def sort_rows(rows: List[SpectralTableRow]) -> List[SpectralTableRow]:
    return sorted(rows, key=lambda row: row.sort_key)


def select(
    rows: List[SpectralTableRow],
    sector: Sector,
    k: int,
) -> List[SpectralTableRow]:
    '''Rows of one (sector, level), ordered by decreasing epsilon.'''
    sector = Sector.parse(sector)
    chosen = [row for row in rows if row.sector is sector and row.k == k]
    return sorted(chosen, key=lambda row: -row.epsilon)


def get_epsilons(rows: List[SpectralTableRow]) -> np.ndarray:
    return np.array([row.epsilon for row in rows])


def get_ratio_errors(
    rows: List[SpectralTableRow],
    effective: bool = False,
) -> np.ndarray:
    '''|r_k - s_k| with r_k from the exact (default) or the effective solver.'''
    errors = []
    for row in rows:
        ratio = row.eff_ratio if effective else row.ratio
        errors.append(np.nan if is_none(ratio) else abs(ratio - row.s_k))
    return np.array(errors)


def get_cross_gaps(rows: List[SpectralTableRow]) -> np.ndarray:
    return np.array([
        np.nan if is_none(row.cross_gap) else row.cross_gap for row in rows
    ])


def is_strictly_decreasing(values: np.ndarray) -> bool:
    '''Strict decrease over the finite entries; needs at least two of them.'''
    values = np.asarray(values, dtype=float)
    finite = values[np.isfinite(values)]
    if len(finite) < 2:
        return False
    return bool(np.all(np.diff(finite) < 0.0))


def get_cross_slope(rows: List[SpectralTableRow]) -> float:
    epsilons, gaps = get_epsilons(rows), get_cross_gaps(rows)
    finite = np.isfinite(gaps) & (gaps > 0.0)
    if np.count_nonzero(finite) < 2:
        return np.nan
    return loglog_slope(epsilons[finite], gaps[finite])
