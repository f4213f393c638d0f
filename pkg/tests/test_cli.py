import csv
import io
import json

import pytest

import numpy as np

from hlbs.cli import RunConfig, build_parser, emit, main, resolved_grids
from hlbs.constants import VERSION
from hlbs.errors import ConfigError


def _csv_rows(text):
    lines = [line for line in text.splitlines() if not line.startswith('#')]
    return list(csv.DictReader(io.StringIO('\n'.join(lines))))


def test_airy_json(tmp_path):
    path = tmp_path / 'airy.json'
    assert main(['airy', '--k-max', '3', '--format', 'json', '--out', str(path)]) == 0
    payload = json.loads(path.read_text())
    assert payload['metadata']['version'] == VERSION
    records = payload['records']
    assert [record['k'] for record in records] == [0, 1, 2, 3]
    assert records[1]['kind'] == 'zero'
    assert records[0]['sigma'] == pytest.approx(-1.018792971647471)


def test_convert_csv(capsys):
    assert main(['convert', '--M', '1', '--m', '0.01', '--beta', '-50']) == 0
    out = capsys.readouterr().out
    assert out.startswith('# version: ')
    rows = _csv_rows(out)
    assert len(rows) == 1
    mu = 2.0 * 0.01 / 2.01
    assert float(rows[0]['alpha']) == pytest.approx(-100.0 * mu)


def test_lightspec_without_correction(capsys):
    argv = ['lightspec', '--alpha', '-1', '--x-min', '-4', '--x-max', '4', '--samples', '5',
            '--no-correction']
    assert main(argv) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert [float(row['x']) for row in rows] == [-4.0, -2.0, 0.0, 2.0, 4.0]
    assert float(rows[2]['minus_lambda0']) == -1.0
    assert rows[2]['minus_lambda1'] == ''
    assert rows[0]['minus_lambda1'] != ''
    assert rows[1]['minus_lambda1'] == ''
    assert rows[0]['R'] == ''


def test_lightspec_with_correction(capsys):
    argv = ['lightspec', '--alpha', '-1', '--x-min', '0', '--x-max', '1', '--samples', '2']
    assert main(argv) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert float(rows[0]['R']) == pytest.approx(1.0 / 16.0, rel=1e-3)


def test_asymptotic(capsys):
    assert main(['asymptotic', '--eps', '0.1', '0.05', '--sector', 'f', '--levels', '2']) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert len(rows) == 4
    assert {row['sector'] for row in rows} == {'f'}


def test_repulsive_bs_has_no_rows(capsys):
    assert main(['bs', '--alpha', '0.5', '--eps', '0.1']) == 0
    assert _csv_rows(capsys.readouterr().out) == []


@pytest.mark.parametrize('argv', [
    ['effective', '--eps', '0'],
    ['effective', '--alpha', '1.0'],
    ['bs', '--levels', '0'],
    ['airy', '--k-max', '60'],
    ['convert', '--M', '-1'],
])
def test_usage_errors_exit_2(argv):
    assert main(argv) == 2


def test_parser_rejects_unknown_sector():
    with pytest.raises(SystemExit) as info:
        main(['bs', '--sector', 'x'])
    assert info.value.code == 2


def test_run_config_validation():
    args = build_parser().parse_args(['effective', '--eps', '0.1', '--nodes', '101'])
    config = RunConfig.from_args(args)
    assert config.as_dict()['epsilons'] == [0.1]
    assert config.as_dict()['sectors'] == ['b', 'f']
    with pytest.raises(ConfigError):
        RunConfig('effective', -1.0, [0.1], ['b'], 1, nodes=-3).validate()


def test_emit_writes_empty_cells(tmp_path):
    path = tmp_path / 'out.csv'
    emit([{'a': 0.1, 'b': None, 'c': True}], 'csv', str(path), ('a', 'b', 'c'), {'k': 1})
    lines = path.read_text().splitlines()
    assert lines == ['# k: 1', 'a,b,c', '0.10000000000000001,,true']


def test_validate_without_attraction(capsys):
    assert main(['validate', '--alpha', '1.0', '--validate-eps', '0.2']) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert all(row['passed'] == 'true' for row in rows)


def test_emit_empty_json(tmp_path):
    path = tmp_path / 'out.json'
    emit([], 'json', str(path), ('a',), {'version': VERSION})
    assert json.loads(path.read_text()) == {'metadata': {'version': VERSION}, 'records': []}


def test_emit_reports_unwritable_path(tmp_path):
    with pytest.raises(OSError, match='cannot open output'):
        emit([], 'csv', str(tmp_path / 'missing' / 'out.csv'), ('a',))


def test_emit_json_keeps_every_bit(tmp_path):
    values = [0.1, 1.0 / 3.0, np.float64(np.pi) * 1e-300, -2.5e17, np.nextafter(1.0, 2.0)]
    path = tmp_path / 'bits.json'
    emit([{'v': value} for value in values], 'json', str(path), ('v',))
    loaded = [record['v'] for record in json.loads(path.read_text())['records']]
    assert [float(value).hex() for value in loaded] == [float(value).hex() for value in values]


def test_coarse_bs_grid_fails():
    argv = ['bs', '--alpha', '-1', '--eps', '0.1', '--sector', 'b', '--levels', '1',
            '--nodes', '50']
    assert main(argv) != 0


def test_metadata_reports_resolved_grids():
    args = build_parser().parse_args(['bs', '--eps', '0.1', '--nodes', '64'])
    grids = resolved_grids(RunConfig.from_args(args))['bs_grids']
    assert grids[0]['epsilon'] == 0.1
    assert grids[0]['nodes'] == 64
    assert grids[0]['nu_max'] == pytest.approx(120.0)
    args = build_parser().parse_args(['effective', '--eps', '0.1'])
    assert resolved_grids(RunConfig.from_args(args)) == {'effective_nodes': 8001}


def test_lightspec_metadata_has_no_grid(tmp_path):
    path = tmp_path / 'light.json'
    argv = ['lightspec', '--x-min', '0', '--x-max', '1', '--samples', '2', '--no-correction',
            '--format', 'json', '--out', str(path)]
    assert main(argv) == 0
    metadata = json.loads(path.read_text())['metadata']
    assert metadata['grids'] == {}
    assert 'nodes' not in metadata['config'] and 'nu_max' not in metadata['config']
