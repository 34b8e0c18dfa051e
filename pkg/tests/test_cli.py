import importlib
import json
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))
sys.path.insert(0, str(ROOT / 'packages'))

cli = importlib.import_module('ops.scripts.sym_census')
main = cli.main
load_run_config = cli.load_run_config

from shared.shared.errors import ConfigError  # noqa: E402


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


def _report(path):
    with open(path, encoding='utf-8') as handle:
        return json.load(handle)


def test_value_set_both_methods(tmp_path):
    out = tmp_path / 'vs.json'
    code = main(['value-set', '--q', '5', '--n', '3', '--s', '1', '--a', '0', '--method', 'both',
                 '--out', str(out)])
    assert code == 0
    report = _report(out)
    assert report['schema'] == 1
    assert report['command'] == 'value-set'
    assert report['results']['direct'] == '17/5'
    assert report['results']['via_chi'] == '17/5'
    assert [c['name'] for c in report['checks']] == ['methods_agree']


def test_value_set_bounds_skipped_outside_range(tmp_path, capsys):
    out = tmp_path / 'vs.json'
    code = main(['value-set', '--q', '5', '--n', '3', '--s', '1', '--a', '0', '--verify-bounds',
                 '--chi-method', 'both', '--out', str(out)])
    assert code == 0
    assert 'bounds_skipped' in _report(out)['results']
    assert 'Bounds skipped' in capsys.readouterr().err


def test_pattern_census_csv(tmp_path):
    family = _write(tmp_path, 'a1=0.fam', '# a_1 = 0\n1 | 0\n')
    out = tmp_path / 'census.csv'
    code = main(['pattern-census', '--q', '3', '--n', '2', '--family', family, '--format', 'csv',
                 '--out', str(out)])
    assert code == 0
    assert out.read_bytes() == b'pattern,total,squarefree\n1^2,2,1\n2^1,1,1\n'


def test_pattern_census_prescribed_with_bounds(tmp_path):
    out = tmp_path / 'census.json'
    code = main(['pattern-census', '--q', '5', '--n', '3', '--prescribed', '1=0', '--verify-bounds',
                 '--correspondence', '--out', str(out)])
    assert code == 0
    names = [c['name'] for c in _report(out)['checks']]
    assert names[:2] == ['census_closure', 'pattern_proportions']
    assert 'discriminant_locus' in names
    assert 'correspondence[3^1]' in names


def test_count_points_report(tmp_path):
    system = _write(tmp_path, 'sum.sys', 'Y1\n')
    out = tmp_path / 'count.json'
    code = main(['count-points', '--q', '5', '--r', '4', '--system', system, '--infinity', '--out', str(out)])
    assert code == 0
    results = _report(out)['results']
    assert results['affine_count'] == 125
    assert results['infinity_count'] == 31
    assert 'wall_time' not in results


def test_count_points_vacuous_bound_flagged(tmp_path):
    system = _write(tmp_path, 'pairs.sys', 'Y2 - 1\n')
    out = tmp_path / 'count.json'
    assert main(['count-points', '--q', '7', '--r', '5', '--system', system, '--out', str(out)]) == 0
    affine = _report(out)['checks'][0]
    assert affine['bound'] == '21952'
    assert affine['vacuous'] is True


def test_degenerate_system_needs_flag(tmp_path):
    system = _write(tmp_path, 'sum.sys', 'Y1\n')
    assert main(['count-points', '--q', '5', '--r', '3', '--system', system]) == 2
    out = tmp_path / 'count.json'
    assert main(['count-points', '--q', '5', '--r', '3', '--system', system, '--allow-degenerate',
                 '--out', str(out)]) == 0
    assert _report(out)['results']['distinct_count'] == 12


def test_hypothesis_check_failure_exit_code(tmp_path):
    system = _write(tmp_path, 'square.sys', 'Y1^2\n')
    out = tmp_path / 'hyp.json'
    code = main(['hypothesis-check', '--q', '5', '--r', '5', '--s', '2', '--system', system,
                 '--max-ext', '1', '--out', str(out)])
    assert code == 1
    assert _report(out)['results']['verdict'] == 'FAIL'


def test_verify_bounds_sweep_csv(tmp_path):
    out = tmp_path / 'sweep.csv'
    assert main(['verify-bounds', '--q', '7', '--n', '4', '--format', 'csv', '--out', str(out)]) == 0
    lines = out.read_text(encoding='utf-8').splitlines()
    assert lines[0].startswith('suite,q,n,s,name,')
    assert any(line.startswith('value_set,7,4,1,chi[r=4]') for line in lines)
    assert any(line.startswith('prescribed,7,4,1,discriminant_locus') for line in lines)


def test_missing_q_is_a_config_error(capsys):
    assert main(['value-set', '--n', '3', '--s', '1', '--a', '0']) == 2
    assert "missing required parameter 'q'" in capsys.readouterr().err


def test_work_ceiling_exit_code(tmp_path):
    system = _write(tmp_path, 'sum.sys', 'Y1\n')
    assert main(['count-points', '--q', '5', '--r', '4', '--system', system, '--work-ceiling', '10']) == 2
    assert main(['count-points', '--q', '5', '--r', '4', '--system', system,
                 '--out', str(tmp_path / 'ok.json')]) == 0


def test_config_file_merged_under_flags(tmp_path):
    config = _write(tmp_path, 'run.cfg', 'q=7\nn=3\ns=1\na=0\nmethod=direct\n')
    parsed = load_run_config(['value-set', '--config', config, '--q', '5'])
    assert parsed.q == (5,)
    assert parsed.n == (3,)
    assert parsed.method == 'direct'


def test_config_file_diagnostics(tmp_path):
    config = _write(tmp_path, 'run.cfg', 'q=5\ncolour=blue\n')
    with pytest.raises(ConfigError, match='run.cfg:2'):
        load_run_config(['value-set', '--config', config])
    config = _write(tmp_path, 'bad.cfg', 'q=five\n')
    with pytest.raises(ConfigError, match="'q'"):
        load_run_config(['value-set', '--config', config])


def test_reports_are_deterministic_across_workers(tmp_path):
    family = _write(tmp_path, 'trace.fam', '1 | 0\n')
    outputs = []
    for workers in ('1', '2', '1'):
        out = tmp_path / f'census-{len(outputs)}.json'
        assert main(['pattern-census', '--q', '5', '--n', '3', '--family', family, '--verify-bounds',
                     '--workers', workers, '--out', str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_unwritable_report_path_exit_code(tmp_path, capsys):
    blocker = _write(tmp_path, 'blocker', 'not a directory\n')
    out = str(Path(blocker) / 'report.json')
    assert main(['value-set', '--q', '5', '--n', '3', '--s', '1', '--a', '0', '--out', out]) == 2
    assert '✗' in capsys.readouterr().err
