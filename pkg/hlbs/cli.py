import argparse
import csv
import json
import logging
import sys
from typing import List, Optional, Sequence

import numpy as np

from hlbs.config import (
    EFFECTIVE_CONFIG, LIGHTSPEC_CONFIG, MASS_CONFIG, PARAMETER_CONFIG,
    VALIDATE_CONFIG,
)
from hlbs.constants import VERSION
from hlbs.errors import (
    BracketError, ConfigError, ConvergenceError, DiscretizationError, DomainError,
    RangeError, SizeError,
)
from hlbs.experiments.trials import spectral_table
from hlbs.experiments.validate import resolve_settings, run_checks
from hlbs.specfun import airy_ai, airy_ai_prime, sigma
from hlbs.spectrum import light_particle as lp
from hlbs.spectrum.birman_schwinger import bs_bound_states, make_bs_grid
from hlbs.spectrum.bo_effective import (
    airy_prediction, correction_R, effective_eigs, potential_V,
)
from hlbs.spectrum.parameters import PhysParams, Sector, phys_to_scaled, reduced_mass
from hlbs.utils.config import check_bounds, get_default_values, resolve
from hlbs.utils.misc import is_none, significant


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_NUMERICS = 3

COMMANDS = (
    'lightspec', 'potential', 'effective', 'bs', 'asymptotic', 'airy', 'convert', 'validate',
)

COLUMNS = {
    'lightspec': ('x', 'minus_lambda0', 'minus_lambda1', 'N', 'V', 'R'),
    'potential': ('x', 'V', 'R'),
    'effective': ('alpha', 'epsilon', 'sector', 'k', 'E_shifted', 'E', 'length', 'nodes'),
    'bs': ('alpha', 'epsilon', 'sector', 'k', 'lambda_star', 'E', 'converged', 'nodes', 'nu_max'),
    'asymptotic': ('alpha', 'epsilon', 'sector', 'k', 's_k', 'E_airy'),
    'table': ('alpha', 'epsilon', 'sector', 'k', 'E_bs', 'E_eff', 'E_airy', 'ratio', 's_k'),
    'airy': ('k', 'kind', 'sigma', 'Ai', 'Ai_prime'),
    'convert': ('M', 'm', 'beta', 'mu', 'epsilon', 'alpha'),
    'validate': ('name', 'measured', 'bound', 'passed', 'status'),
}


class RunConfig():
    '''Resolved options of one command-line invocation.'''
    def __init__(
        self,
        command: str,
        alpha: float,
        epsilons: Sequence[float],
        sectors: Sequence[Sector],
        levels: int,
        nodes: int = None,
        nu_max: float = None,
        length: float = None,
        tol: float = None,
        format: str = 'csv',
        out: str = None,
        extra: dict = None,
    ) -> None:
        self.command = command
        self.alpha = alpha
        self.epsilons = tuple(epsilons)
        self.sectors = tuple(Sector.parse(sector) for sector in sectors)
        self.levels = levels
        self.nodes = nodes
        self.nu_max = nu_max
        self.length = length
        self.tol = tol
        self.format = format
        self.out = out
        self.extra = {} if is_none(extra) else extra

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'RunConfig':
        sectors = (Sector.BOSONIC, Sector.FERMIONIC) if args.sector == 'both' else (args.sector,)
        known = {
            'command', 'alpha', 'eps', 'sector', 'levels', 'nodes', 'nu_max', 'length',
            'tol', 'format', 'out', 'log_level', 'verbose',
        }
        extra = {key: value for key, value in vars(args).items() if key not in known}
        config = cls(
            args.command, args.alpha, args.eps, sectors, args.levels, args.nodes,
            args.nu_max, args.length, args.tol, args.format, args.out, extra,
        )
        config.validate()
        return config

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f'unknown command {self.command}')
        check_bounds('alpha', self.alpha, PARAMETER_CONFIG)
        for epsilon in self.epsilons:
            check_bounds('epsilon', epsilon, PARAMETER_CONFIG, strict_lower=True)
        if self.levels < 1:
            raise ConfigError(f'--levels must be at least 1, got {self.levels}')
        for name in ('nodes', 'nu_max', 'length', 'tol'):
            value = getattr(self, name)
            if not is_none(value) and not value > 0:
                raise ConfigError(f'--{name.replace("_", "-")} must be positive, got {value}')
        if self.format not in ('csv', 'json'):
            raise ConfigError(f'unknown format {self.format}')

    def as_dict(self) -> dict:
        return {
            'command': self.command,
            'alpha': self.alpha,
            'epsilons': list(self.epsilons),
            'sectors': [sector.value for sector in self.sectors],
            'levels': self.levels,
            'nodes': self.nodes,
            'nu_max': self.nu_max,
            'length': self.length,
            'tol': self.tol,
            'format': self.format,
            'out': self.out,
            **self.extra,
        }


def _plain(value):
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Sector):
        return value.value
    return value


def _cell(value) -> str:
    value = _plain(value)
    if is_none(value):
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return significant(value)
    return str(value)


def emit(
    records: List[dict],
    format: str,
    path: Optional[str],
    columns: Sequence[str],
    metadata: dict = None,
) -> None:
    '''Write records as CSV (metadata as a leading comment block) or JSON.'''
    metadata = {} if is_none(metadata) else metadata
    to_stdout = is_none(path) or path == '-'
    try:
        file = sys.stdout if to_stdout else open(path, 'w', newline='', encoding='utf-8')
    except OSError as error:
        raise OSError(f'cannot open output {path}: {error}') from error
    try:
        if format == 'json':
            payload = {
                'metadata': metadata,
                'records': [
                    {column: _plain(record.get(column)) for column in columns}
                    for record in records
                ],
            }
            json.dump(payload, file, indent=2)
            file.write('\n')
        elif format == 'csv':
            for key, value in metadata.items():
                file.write(f'# {key}: {json.dumps(value)}\n')
            writer = csv.writer(file, lineterminator='\n')
            writer.writerow(columns)
            for record in records:
                writer.writerow([_cell(record.get(column)) for column in columns])
        else:
            raise ConfigError(f'unknown format {format}')
    except OSError as error:
        raise OSError(f'cannot write output {path}: {error}') from error
    finally:
        if not to_stdout:
            file.close()


def resolved_grids(config: RunConfig) -> dict:
    '''Grid sizes the command actually runs with, after defaults are filled in.'''
    if config.command == 'effective':
        return {'effective_nodes': resolve(config.nodes, EFFECTIVE_CONFIG, 'nodes')}
    uses_bs = config.command in ('bs', 'validate') or (
        config.command == 'asymptotic' and config.extra['compare']
    )
    if not uses_bs or config.alpha >= 0.0:
        return {}
    epsilons = config.epsilons
    if config.command == 'validate':
        epsilons = config.extra['validate_eps']
    return {
        'bs_grids': [
            {'epsilon': epsilon, **make_bs_grid(
                PhysParams(config.alpha, epsilon), config.nodes, config.nu_max,
            ).as_dict()}
            for epsilon in epsilons
        ],
    }


def run_lightspec(config: RunConfig) -> List[dict]:
    alpha = config.alpha
    xs = np.linspace(config.extra['x_min'], config.extra['x_max'], config.extra['samples'])
    with_correction = config.extra['with_correction']
    origin = EFFECTIVE_CONFIG['r_origin_offset'] / abs(alpha)
    records = []
    for x in xs:
        spectrum = lp.light_spectrum(alpha, x)
        record = {
            'x': x,
            'minus_lambda0': -spectrum.lambda0,
            'minus_lambda1': None if is_none(spectrum.lambda1) else -spectrum.lambda1,
            'N': spectrum.N,
            'V': potential_V(alpha, x),
            'R': None,
        }
        if with_correction:
            record['R'] = correction_R(alpha, x if x != 0.0 else origin)
        records.append(record)
    return records


def run_potential(config: RunConfig) -> List[dict]:
    alpha = config.alpha
    x_max = config.extra['x_max']
    xs = np.linspace(0.0, x_max, config.extra['samples'])
    origin = EFFECTIVE_CONFIG['r_origin_offset'] / abs(alpha)
    return [
        {'x': x, 'V': potential_V(alpha, x), 'R': correction_R(alpha, x if x != 0.0 else origin)}
        for x in xs
    ]


def run_effective(config: RunConfig) -> List[dict]:
    records = []
    for epsilon in config.epsilons:
        for sector in config.sectors:
            params = PhysParams(config.alpha, epsilon, sector)
            eigs = effective_eigs(
                params, config.levels, config.nodes,
                auto_domain=is_none(config.length), length=config.length, tol=config.tol,
            )
            for k, (shifted, value) in enumerate(zip(eigs.shifted, eigs.unshifted)):
                records.append({
                    'alpha': config.alpha, 'epsilon': epsilon, 'sector': sector, 'k': k,
                    'E_shifted': shifted, 'E': value,
                    'length': eigs.metadata['length'], 'nodes': eigs.metadata['nodes'],
                })
    return records


def run_bs(config: RunConfig) -> List[dict]:
    records = []
    for epsilon in config.epsilons:
        for sector in config.sectors:
            params = PhysParams(config.alpha, epsilon, sector)
            grid = make_bs_grid(params, config.nodes, config.nu_max)
            states = bs_bound_states(
                params, config.levels, grid, config.tol,
                check_convergence=not config.extra['no_refine'],
            )
            for state in states:
                records.append({
                    'alpha': config.alpha, 'epsilon': epsilon, 'sector': sector,
                    'k': state.level, 'lambda_star': state.lambda_star, 'E': state.E,
                    'converged': state.converged, 'nodes': len(grid), 'nu_max': grid.nu_max,
                })
    return records


def run_asymptotic(config: RunConfig) -> List[dict]:
    if config.extra['compare']:
        rows = spectral_table(
            config.alpha, config.epsilons, config.sectors, config.levels,
            bs_nodes=config.nodes, nu_max=config.nu_max, tol=config.tol,
            processes=config.extra['processes'],
        )
        return [row.as_dict() for row in rows]
    records = []
    for epsilon in config.epsilons:
        for sector in config.sectors:
            params = PhysParams(config.alpha, epsilon, sector)
            for k in range(config.levels):
                records.append({
                    'alpha': config.alpha, 'epsilon': epsilon, 'sector': sector, 'k': k,
                    's_k': abs(sigma(sector.sigma_index(k))),
                    'E_airy': airy_prediction(params, k),
                })
    return records


def run_airy(config: RunConfig) -> List[dict]:
    records = []
    for k in range(config.extra['k_max'] + 1):
        s = sigma(k)
        records.append({
            'k': k, 'kind': s.kind.value, 'sigma': s.value,
            'Ai': airy_ai(s.value), 'Ai_prime': airy_ai_prime(s.value),
        })
    return records


def run_convert(config: RunConfig) -> List[dict]:
    M, m, beta = config.extra['M'], config.extra['m'], config.extra['beta']
    epsilon, alpha = phys_to_scaled(M, m, beta)
    return [{
        'M': M, 'm': m, 'beta': beta, 'mu': reduced_mass(M, m),
        'epsilon': epsilon, 'alpha': alpha,
    }]


def run_validate(config: RunConfig) -> List[dict]:
    settings = resolve_settings(
        alpha=config.alpha,
        epsilons=config.extra['validate_eps'],
        bs_nodes=config.nodes,
        nu_max=config.nu_max,
        tol=config.tol,
        processes=config.extra['processes'],
    )
    return [record.as_dict() for record in run_checks(settings)]


RUNNERS = {
    'lightspec': run_lightspec,
    'potential': run_potential,
    'effective': run_effective,
    'bs': run_bs,
    'asymptotic': run_asymptotic,
    'airy': run_airy,
    'convert': run_convert,
    'validate': run_validate,
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    defaults = get_default_values(PARAMETER_CONFIG)
    parser.add_argument('--alpha', type=float, default=defaults['alpha'],
                        help='contact coupling (default: %(default)s)')
    parser.add_argument('--eps', type=float, nargs='+', default=[defaults['epsilon']],
                        help='mass-ratio parameter(s) epsilon (default: %(default)s)')
    parser.add_argument('--sector', choices=('b', 'f', 'both'), default='both',
                        help='exchange symmetry sector (default: %(default)s)')
    parser.add_argument('--levels', type=int, default=3,
                        help='number of levels per sector (default: %(default)s)')
    parser.add_argument('--nodes', type=int, default=None,
                        help='grid nodes (momentum grid for bs, half-line grid for effective)')
    parser.add_argument('--nu-max', type=float, default=None, help='momentum cutoff')
    parser.add_argument('--length', type=float, default=None,
                        help='half-domain length of the effective problem (default: automatic)')
    parser.add_argument('--tol', type=float, default=None, help='solver tolerance, relative to alpha^2')
    parser.add_argument('--format', choices=('csv', 'json'), default='csv',
                        help='output format (default: %(default)s)')
    parser.add_argument('--out', type=str, default=None, help='output path (default: stdout)')
    parser.add_argument('--log-level', type=str, default='WARNING',
                        help='logging level (default: %(default)s)')
    parser.add_argument('-v', '--verbose', action='store_true', help='shortcut for --log-level INFO')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='hlbs',
        description='Bound states of two heavy particles and a light particle with contact interactions.',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {VERSION}')
    subparsers = parser.add_subparsers(dest='command', required=True)

    sub = subparsers.add_parser('lightspec', help='light-particle eigenvalues, N, V and R on an x-grid')
    _add_common(sub)
    sub.add_argument('--x-min', type=float, default=LIGHTSPEC_CONFIG['x_min'])
    sub.add_argument('--x-max', type=float, default=LIGHTSPEC_CONFIG['x_max'])
    sub.add_argument('--samples', type=int, default=LIGHTSPEC_CONFIG['samples'])
    sub.add_argument('--no-correction', dest='with_correction', action='store_false',
                     help='skip the quadrature for R')

    sub = subparsers.add_parser('potential', help='effective potential V and correction R')
    _add_common(sub)
    sub.add_argument('--x-max', type=float, default=LIGHTSPEC_CONFIG['x_max'])
    sub.add_argument('--samples', type=int, default=201)

    sub = subparsers.add_parser('effective', help='Born-Oppenheimer effective levels')
    _add_common(sub)

    sub = subparsers.add_parser('bs', help='exact bound states from the momentum-space condition')
    _add_common(sub)
    sub.add_argument('--no-refine', action='store_true', help='skip the grid-convergence repeat')

    sub = subparsers.add_parser('asymptotic', help='Airy predictions (optionally against both solvers)')
    _add_common(sub)
    sub.add_argument('--compare', action='store_true', help='emit the full cross-validation table')
    sub.add_argument('--processes', type=int, default=None, help='worker processes for --compare')

    sub = subparsers.add_parser('airy', help='interlaced Airy constants sigma_k')
    _add_common(sub)
    sub.add_argument('--k-max', type=int, default=10)

    mass_defaults = get_default_values(MASS_CONFIG)
    sub = subparsers.add_parser('convert', help='physical masses and coupling to (epsilon, alpha)')
    _add_common(sub)
    sub.add_argument('--M', type=float, default=mass_defaults['M'], help='heavy mass (default: %(default)s)')
    sub.add_argument('--m', type=float, default=mass_defaults['m'], help='light mass (default: %(default)s)')
    sub.add_argument('--beta', type=float, default=-50.25, help='contact strength (default: %(default)s)')

    sub = subparsers.add_parser('validate', help='run the cross-validation suite')
    _add_common(sub)
    sub.add_argument('--validate-eps', type=float, nargs='+', default=list(VALIDATE_CONFIG['epsilons']),
                     help='epsilon ladder for the exact solver (default: %(default)s)')
    sub.add_argument('--processes', type=int, default=None, help='worker processes')
    return parser


def configure_logging(level: str, verbose: bool) -> None:
    logging.basicConfig(
        level=logging.INFO if verbose else getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.verbose)
    try:
        config = RunConfig.from_args(args)
        records = RUNNERS[config.command](config)
    except (ConfigError, DomainError, RangeError, SizeError) as error:
        logger.error('%s', error)
        return EXIT_USAGE
    except (ConvergenceError, DiscretizationError, BracketError) as error:
        logger.error('numerical failure: %s', error)
        return EXIT_NUMERICS

    columns = COLUMNS[config.command]
    if config.command == 'asymptotic' and config.extra['compare']:
        columns = COLUMNS['table']
    metadata = {
        'version': VERSION,
        'config': {key: value for key, value in config.as_dict().items() if not is_none(value)},
        'grids': resolved_grids(config),
    }
    try:
        emit(records, config.format, config.out, columns, metadata)
    except OSError as error:
        logger.error('%s', error)
        return EXIT_USAGE

    if config.command == 'validate':
        passed, failed = summarize_records(records)
        logger.info('%d checks passed, %d failed', passed, failed)
        return EXIT_OK if failed == 0 else EXIT_VALIDATION
    return EXIT_OK


def summarize_records(records: List[dict]) -> tuple:
    failed = sum(1 for record in records if not record['passed'])
    return len(records) - failed, failed


if __name__ == '__main__':
    sys.exit(main())
