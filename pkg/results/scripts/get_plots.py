#!/usr/bin/env python3

from os import makedirs
from os.path import join
from typing import List

import matplotlib.axes
import matplotlib.pyplot as plt
import numpy as np
plt.rcParams.update({"font.family": "Times New Roman"})

from hlbs.experiments.data import *
from hlbs.experiments.trials import load_table
from hlbs.spectrum.bo_effective import RProfile, potential_V
from hlbs.spectrum.light_particle import figure_dataset

from consts.paths import *
from consts.plots import *
from consts.sweeps import *


def get_light_particle_plot(plot_axis: matplotlib.axes.Axes) -> None:
    xs = np.linspace(-LIGHT_X_MAX, LIGHT_X_MAX, LIGHT_SAMPLES)
    rows = figure_dataset(ALPHA, xs)
    ground = np.array([row[1] for row in rows])
    excited = np.array([np.nan if is_none(row[2]) else row[2] for row in rows])
    plot_axis.plot(xs, ground, color=COLORS[0], label=r'$-\lambda_0$')
    plot_axis.plot(xs, excited, color=COLORS[1], label=r'$-\lambda_1$')
    plot_axis.axhline(-0.25 * ALPHA**2, color=AIRY_COLOR, linestyle='--', linewidth=0.8)
    plot_axis.set_xlabel('x')
    plot_axis.legend()
    print(f'\n-lambda0 min: {ground.min()}, max: {ground.max()}')


def get_potential_plot(plot_axis: matplotlib.axes.Axes) -> None:
    profile = RProfile(ALPHA, POTENTIAL_X_MAX, knots=POTENTIAL_KNOTS)
    xs = np.linspace(0.0, POTENTIAL_X_MAX, 400)
    R = profile(xs)
    plot_axis.plot(xs, potential_V(ALPHA, xs), color=COLORS[0], label='V')
    plot_axis.plot(xs, R, color=COLORS[2], label='R')
    plot_axis.axhline(ALPHA**2 / 16.0, color=AIRY_COLOR, linestyle='--', linewidth=0.8)
    plot_axis.set_xlabel('x')
    plot_axis.legend()
    print(f'\nR min: {R.min()}, max: {R.max()}, mean: {R.mean()}')


def get_ratio_plot(
    plot_axis: matplotlib.axes.Axes,
    rows: List[SpectralTableRow],
) -> None:
    for i, sector in enumerate((Sector.BOSONIC, Sector.FERMIONIC)):
        for k in range(BS_LEVELS):
            chosen = select(rows, sector, k)
            errors = get_ratio_errors(chosen)
            label = f'{SECTOR_LABELS[sector.value]} k={k}'
            plot_axis.plot(
                get_epsilons(chosen), errors, marker=MARKERS[k], color=COLORS[i], label=label,
            )
            finite = errors[np.isfinite(errors)]
            if len(finite):
                print(f'{label} ratio error min: {finite.min()}, max: {finite.max()}, mean: {finite.mean()}')
    plot_axis.set_xscale('log')
    plot_axis.set_xlabel(r'$\varepsilon$')
    plot_axis.set_ylabel(r'$|r_k - |\sigma_k||$')
    plot_axis.legend()


def get_cross_gap_plot(
    plot_axis: matplotlib.axes.Axes,
    rows: List[SpectralTableRow],
) -> None:
    for i, sector in enumerate((Sector.BOSONIC, Sector.FERMIONIC)):
        chosen = select(rows, sector, 0)
        gaps = get_cross_gaps(chosen)
        plot_axis.loglog(
            get_epsilons(chosen), gaps, marker=MARKERS[0], color=COLORS[i],
            label=SECTOR_LABELS[sector.value],
        )
        print(f'{SECTOR_LABELS[sector.value]} cross-solver slope: {get_cross_slope(chosen)}')
    plot_axis.set_xlabel(r'$\varepsilon$')
    plot_axis.set_ylabel(r'$|E_{bs} - E_{eff}|$')
    plot_axis.legend()


if __name__ == '__main__':
    makedirs(FIG_PATH, exist_ok=True)

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    get_light_particle_plot(axes[0])
    get_potential_plot(axes[1])
    fig.tight_layout()
    fig.savefig(join(FIG_PATH, 'light_particle.png'), dpi=200)

    rows = load_table(join(DATA_PATH, TABLE_FILE))
    print('Finished loading', len(rows), 'rows from', DATA_PATH)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    get_ratio_plot(axes[0], rows)
    get_cross_gap_plot(axes[1], rows)
    fig.tight_layout()
    fig.savefig(join(FIG_PATH, 'convergence.png'), dpi=200)
    plt.show()
