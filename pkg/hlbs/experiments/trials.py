import logging
import multiprocessing as mp
from typing import Iterable, List

import compress_pickle

from hlbs.experiments.data import SpectralTableRow, sort_rows
from hlbs.specfun import sigma
from hlbs.spectrum.bo_effective import airy_level, effective_eigs
from hlbs.spectrum.birman_schwinger import bs_bound_states, make_bs_grid
from hlbs.spectrum.parameters import PhysParams, Sector
from hlbs.utils.misc import is_none


logger = logging.getLogger(__name__)


def spectral_table(
    alpha: float,
    epsilons: Iterable[float],
    sectors: Iterable[Sector] = (Sector.BOSONIC, Sector.FERMIONIC),
    levels: int = 3,
    bs_levels: int = None,
    bs_nodes: int = None,
    nu_max: float = None,
    tol: float = None,
    effective_nodes: int = None,
    check_convergence: bool = True,
    processes: int = None,
) -> List[SpectralTableRow]:
    '''
    Exact, effective and Airy levels for every (epsilon, sector). Jobs run in
    a process pool when processes != 1; rows come back sorted by
    (epsilon, sector, k).
    '''
    if is_none(bs_levels):
        bs_levels = levels
    trial_args = [
        {
            'alpha': alpha, 'epsilon': epsilon, 'sector': Sector.parse(sector),
            'levels': levels, 'bs_levels': bs_levels, 'bs_nodes': bs_nodes,
            'nu_max': nu_max, 'tol': tol, 'effective_nodes': effective_nodes,
            'check_convergence': check_convergence,
        }
        for epsilon in epsilons
        for sector in sectors
    ]
    if processes == 1 or len(trial_args) == 1:
        results = list(map(spectral_trial, trial_args))
    else:
        with mp.Pool(processes) as p:
            results = p.map(spectral_trial, trial_args)
    return sort_rows([row for rows in results for row in rows])


def spectral_trial(trial_args: dict) -> List[SpectralTableRow]:
    # Unpack args
    params = PhysParams(trial_args['alpha'], trial_args['epsilon'], trial_args['sector'])
    levels = trial_args['levels']
    bs_levels = trial_args['bs_levels']

    # Exact levels
    E_bs = [None] * levels
    if bs_levels > 0 and params.has_bound_states:
        grid = make_bs_grid(params, trial_args['bs_nodes'], trial_args['nu_max'])
        states = bs_bound_states(
            params, bs_levels, grid, trial_args['tol'], trial_args['check_convergence'],
        )
        for state in states:
            if state.converged and state.level < levels:
                E_bs[state.level] = state.E

    # Effective levels
    E_eff = [None] * levels
    if params.has_bound_states:
        eigs = effective_eigs(params, levels, nodes=trial_args['effective_nodes'])
        for k, value in enumerate(eigs.unshifted):
            E_eff[k] = float(value)

    rows = []
    for k in range(levels):
        s_k = abs(sigma(params.sector.sigma_index(k)))
        E_airy = airy_level(params.alpha, params.epsilon, params.sector, k) \
            if params.has_bound_states else None
        rows.append(SpectralTableRow(
            params.alpha, params.epsilon, params.sector, k, s_k, E_airy,
            E_bs[k], E_eff[k],
        ))
    logger.info('finished eps=%g sector=%s', params.epsilon, params.sector.value)
    return rows


def save_table(rows: List[SpectralTableRow], path: str) -> None:
    with open(path, 'wb') as file:
        compress_pickle.dump(rows, file, compression='lzma', set_default_extension=False)


def load_table(path: str) -> List[SpectralTableRow]:
    with open(path, 'rb') as file:
        return compress_pickle.load(file, compression='lzma', set_default_extension=False)
