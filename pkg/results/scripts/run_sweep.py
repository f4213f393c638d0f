#!/usr/bin/env python3

from os import makedirs
from os.path import join

from hlbs.experiments.trials import save_table, spectral_table
from hlbs.spectrum.parameters import Sector

from consts.paths import *
from consts.sweeps import *


def run_sweep() -> None:
    print('Starting sweep over epsilon =', EPSILONS, '...')
    rows = spectral_table(
        ALPHA, EPSILONS, (Sector.BOSONIC, Sector.FERMIONIC), LEVELS,
        bs_levels=BS_LEVELS, processes=PROCESSES,
    )
    makedirs(DATA_PATH, exist_ok=True)
    save_table(rows, join(DATA_PATH, TABLE_FILE))
    print('Saved', len(rows), 'rows to', join(DATA_PATH, TABLE_FILE))


if __name__ == '__main__':
    run_sweep()
