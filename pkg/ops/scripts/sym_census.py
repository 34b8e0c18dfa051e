"""
Symmetric Census CLI

Counts points of symmetric polynomial systems, tallies factorization patterns
of linear families and averages value sets over small finite fields, then
checks every count against its exact identity or explicit estimate.

Usage:
    python ops/scripts/sym_census.py count-points --q 5 --r 4 --system sum.sys
    python ops/scripts/sym_census.py pattern-census --q 3 --n 2 --family a1=0.fam --format csv
    python ops/scripts/sym_census.py value-set --q 5 --n 3 --s 1 --a 0 --method both
    python ops/scripts/sym_census.py hypothesis-check --q 5 --r 6 --system sum.sys --max-ext 2
    python ops/scripts/sym_census.py verify-bounds --q 5,7 --n 4,5,6 --format csv --out sweep.csv

Exit status: 0 when every check passes, 1 when any check fails, 2 on bad
configuration or a violated contract (including the work ceiling).
"""

import argparse
import os
import sys
import time
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from dotenv import dotenv_values, load_dotenv

load_dotenv()
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'packages'))

from algebra.algebra.ff import build_field
from algebra.algebra.symsys import hypothesis_check, infer_inner_dimension, parse_system
from shared.shared.config import get_default_workers, get_max_extension
from shared.shared.errors import ConfigError, HypothesisRangeViolation
from shared.shared.reports import build_report, render_csv, render_json, write_atomic
from verify.verify.census import count_points, verify_estimate
from verify.verify.factpat import (
    correspondence_check,
    enumerate_patterns,
    family_census,
    parse_family,
    pattern_constants,
    prescribed_family,
    verify_pattern_bounds,
)
from verify.verify.valueset import (
    CoeffWindow,
    average_value_set_direct,
    average_value_set_via_chi,
    chi,
    chi_range,
    mu,
    verify_value_set_bounds,
)


COMMANDS = ('count-points', 'pattern-census', 'value-set', 'hypothesis-check', 'verify-bounds')
CHECK_COLUMNS = ['name', 'observed', 'main_term', 'bound', 'observed_deviation',
                 'passed', 'vacuous', 'slack', 'hypotheses_met', 'note']
REQUIRED = {
    'count-points': ('r', 'system'),
    'pattern-census': ('n',),
    'value-set': ('n', 's'),
    'hypothesis-check': ('r', 'system'),
    'verify-bounds': ('n',),
}


@dataclass
class RunConfig:
    command: str
    q: Tuple[int, ...] = ()
    p: Optional[int] = None
    k: int = 1
    n: Tuple[int, ...] = ()
    s: Optional[int] = None
    r: Optional[int] = None
    a: Tuple[int, ...] = ()
    system: Optional[str] = None
    family: Optional[str] = None
    prescribed: Optional[str] = None
    ineq: str = 'all'
    infinity: bool = False
    diagonal: bool = False
    allow_degenerate: bool = False
    method: str = 'both'
    chi_method: str = 'subsets'
    verify_bounds: bool = False
    correspondence: bool = False
    max_ext: Optional[int] = None
    work_ceiling: Optional[int] = None
    workers: int = 1
    out: Optional[str] = None
    format: str = 'json'

    @property
    def single_q(self) -> int:
        return self.q[0]

    @property
    def single_n(self) -> int:
        return self.n[0]


# --- CONFIG PARSING ---

def _int_list(raw: str) -> Tuple[int, ...]:
    return tuple(int(v) for v in str(raw).replace(' ', '').split(',') if v != '')


def _bool(raw) -> bool:
    if isinstance(raw, bool):
        return raw
    value = str(raw).strip().lower()
    if value in ('1', 'true', 'yes', 'on'):
        return True
    if value in ('0', 'false', 'no', 'off', ''):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


CONVERTERS = {
    'q': _int_list, 'n': _int_list, 'a': _int_list,
    'p': int, 'k': int, 's': int, 'r': int, 'max_ext': int, 'work_ceiling': int, 'workers': int,
    'infinity': _bool, 'diagonal': _bool, 'allow_degenerate': _bool,
    'verify_bounds': _bool, 'correspondence': _bool,
}
CHOICES = {
    'method': ('direct', 'chi', 'both'),
    'chi_method': ('subsets', 'pointcount', 'both'),
    'format': ('json', 'csv'),
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, help='key=value file merged under explicit flags')
    common.add_argument('--q', type=str, help='field size (prime), or comma list for verify-bounds')
    common.add_argument('--p', type=str, help='characteristic, with --k for extension fields')
    common.add_argument('--k', type=str, help='extension degree')
    common.add_argument('--n', type=str, help='polynomial degree, or comma list for verify-bounds')
    common.add_argument('--s', type=str, help='window length / number of Y variables')
    common.add_argument('--r', type=str, help='number of X variables')
    common.add_argument('--a', type=str, help='coefficient window a_{n-1},...,a_{n-s}')
    common.add_argument('--system', type=str, help='system file, one polynomial per line')
    common.add_argument('--family', type=str, help="family file, rows 'c_1 ... c_s | alpha'")
    common.add_argument('--prescribed', type=str, help='prescribed coefficients i=v,... (a_i of T^(n-i))')
    common.add_argument('--ineq', type=str, help="'all', 'none' or pairs like 1-2,3-4")
    common.add_argument('--infinity', action='store_true', default=None, help='also count points at infinity')
    common.add_argument('--diagonal', action='store_true', default=None, help='also count X_1 = X_2')
    common.add_argument('--allow-degenerate', dest='allow_degenerate', action='store_true', default=None,
                        help='accept systems outside m <= s <= r-m-2 (flagged in reports)')
    common.add_argument('--method', type=str, help='value-set method: direct|chi|both')
    common.add_argument('--chi-method', dest='chi_method', type=str, help='subsets|pointcount|both')
    common.add_argument('--verify-bounds', dest='verify_bounds', action='store_true', default=None,
                        help='evaluate the explicit estimates')
    common.add_argument('--correspondence', action='store_true', default=None,
                        help='run the root-encoding correspondence scan per pattern')
    common.add_argument('--max-ext', dest='max_ext', type=str, help='largest extension degree sampled')
    common.add_argument('--work-ceiling', dest='work_ceiling', type=str, help='override the work ceiling')
    common.add_argument('--workers', type=str, help='process pool size')
    common.add_argument('--out', type=str, help='report path (default: stdout)')
    common.add_argument('--format', type=str, help='json|csv')

    parser = argparse.ArgumentParser(description='Symmetric Census')
    sub = parser.add_subparsers(dest='command')
    for command in COMMANDS:
        sub.add_parser(command, parents=[common])
    return parser


def _config_line(path: str, key: str) -> int:
    with open(path, encoding='utf-8') as handle:
        for lineno, line in enumerate(handle, start=1):
            if line.strip().split('=', 1)[0].strip().replace('-', '_') == key:
                return lineno
    return 0


def load_run_config(argv: Optional[List[str]] = None) -> RunConfig:
    """defaults < config file < explicit flags; raises ConfigError with field diagnostics."""
    args = vars(_build_parser().parse_args(argv))
    command = args.pop('command')
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}")
    config_path = args.pop('config')
    known = {f.name for f in fields(RunConfig)} - {'command'}

    raw: Dict[str, Tuple[object, str]] = {}
    if config_path:
        if not os.path.exists(config_path):
            raise ConfigError(f"config file {config_path} not found")
        for key, value in dotenv_values(config_path).items():
            name = key.strip().replace('-', '_')
            where = f"{config_path}:{_config_line(config_path, name)}"
            if name not in known:
                raise ConfigError(f"{where}: unknown key '{key}'")
            raw[name] = (value, where)
    for name, value in args.items():
        if value is not None:
            raw[name] = (value, f"--{name.replace('_', '-')}")

    values = {}
    for name, (value, where) in raw.items():
        try:
            values[name] = CONVERTERS.get(name, str)(value)
        except ValueError as e:
            raise ConfigError(f"{where}: invalid value for '{name}': {e}")
        if name in CHOICES and values[name] not in CHOICES[name]:
            raise ConfigError(f"{where}: '{name}' must be one of {', '.join(CHOICES[name])}")

    values.setdefault('workers', get_default_workers())
    config = RunConfig(command=command, **values)
    _validate(config)
    return config


def _validate(config: RunConfig) -> None:
    if not config.q and config.p is None:
        raise ConfigError(f"{config.command}: missing required parameter 'q' (or 'p' with 'k')")
    if config.q and config.p is not None:
        raise ConfigError("give either 'q' or 'p'/'k', not both")
    for name in REQUIRED[config.command]:
        value = getattr(config, name)
        if value is None or value == ():
            raise ConfigError(f"{config.command}: missing required parameter '{name}'")
    if config.command != 'verify-bounds' and (len(config.q) > 1 or len(config.n) > 1):
        raise ConfigError(f"{config.command}: 'q' and 'n' take a single value")
    for name in ('q', 'n'):
        if any(v < 1 for v in getattr(config, name)):
            raise ConfigError(f"'{name}' must be positive")
    for name in ('p', 'k', 'r', 'max_ext', 'work_ceiling', 'workers'):
        value = getattr(config, name)
        if value is not None and value < 1:
            raise ConfigError(f"'{name}' must be positive, got {value}")
    if config.s is not None and config.s < 0:
        raise ConfigError(f"'s' must be non-negative, got {config.s}")
    if config.command == 'pattern-census' and bool(config.family) == bool(config.prescribed):
        raise ConfigError("pattern-census needs exactly one of 'family' or 'prescribed'")
    if config.command == 'value-set' and len(config.a) != config.s:
        raise ConfigError(f"'a' must list s={config.s} coefficients, got {len(config.a)}")


# --- PIPELINES ---

def _field(config: RunConfig, q: Optional[int] = None):
    if q is not None:
        return build_field(q, 1)
    if config.p is not None:
        return build_field(config.p, config.k)
    return build_field(config.single_q, 1)


def _read(path: str) -> str:
    if not os.path.exists(path):
        raise ConfigError(f"file {path} not found")
    with open(path, encoding='utf-8') as handle:
        return handle.read()


def _parse_pairs(text: str) -> Optional[List[Tuple[int, int]]]:
    if text == 'all':
        return None
    if text == 'none':
        return []
    pairs = []
    for item in text.split(','):
        try:
            i, j = item.split('-')
            pairs.append((int(i), int(j)))
        except ValueError:
            raise ConfigError(f"--ineq: cannot parse pair {item!r}")
    return pairs


def _identity(name: str, passed: bool, detail: str = '') -> Dict:
    return {'name': name, 'passed': bool(passed), 'note': detail}


def _check_rows(checks: List, extra: Optional[Dict] = None) -> List[Dict]:
    rows = []
    for check in checks:
        row = asdict(check) if not isinstance(check, dict) else dict(check)
        row.update(extra or {})
        rows.append(row)
    return rows


def _system(config: RunConfig):
    ctx = _field(config)
    text = _read(config.system)
    s = config.s or infer_inner_dimension(text)
    return parse_system(text, ctx, s, config.r, strict=not config.allow_degenerate)


def _run_count_points(config: RunConfig):
    sys_ = _system(config)
    report = count_points(sys_, _parse_pairs(config.ineq), config.workers,
                          with_infinity=config.infinity, with_diagonal=config.diagonal)
    print(f"  counted {report.work} {report.method} representatives in {report.wall_time:.2f}s", file=sys.stderr)
    checks = verify_estimate(report, sys_)
    results = asdict(report)
    results.pop('wall_time')
    results.update({'degrees': list(sys_.degrees), 'D': sys_.D, 'delta': sys_.delta,
                    'standing_assumption': sys_.within_standing_assumption, 'system': sys_.to_text()})
    return results, checks, _check_rows(checks), CHECK_COLUMNS


def _run_pattern_census(config: RunConfig):
    ctx = _field(config)
    n = config.single_n
    if config.family:
        fam = parse_family(_read(config.family), ctx, n)
    else:
        try:
            values = {int(i): int(v) for i, v in (item.split('=') for item in config.prescribed.split(','))}
        except ValueError:
            raise ConfigError(f"--prescribed: cannot parse {config.prescribed!r}")
        fam = prescribed_family(ctx, n, values)

    census = family_census(fam, config.workers)
    patterns = enumerate_patterns(n)
    checks = [
        _identity('census_closure', census.total() == ctx.q ** (n - fam.m),
                  f"sum of totals {census.total()} vs q^(n-m) = {ctx.q ** (n - fam.m)}"),
        _identity('pattern_proportions', sum(pattern_constants(lam)[1] for lam in patterns) == 1),
    ]
    if config.verify_bounds:
        checks.extend(verify_pattern_bounds(census))
    correspondence = []
    if config.correspondence:
        for lam in patterns:
            rep = correspondence_check(fam, lam, census, config.workers)
            correspondence.append(rep)
            checks.append(_identity(f'correspondence[{lam}]', rep.passed,
                                    f"w={rep.w}, squarefree {rep.squarefree_members}/{rep.expected_squarefree}"
                                    + (f"; {rep.note}" if rep.note else '')))
    results = {'family': fam.describe(), 'q': census.q, 'n': n, 'm': census.m,
               'census': census.rows(), 'correspondence': correspondence}
    return results, checks, census.rows(), ['pattern', 'total', 'squarefree']


def _value_set_one(win: CoeffWindow, config: RunConfig, checks: List) -> Dict:
    results: Dict = {'window': win.describe(), 'mu_n': mu(win.n), 'mu_n_q': mu(win.n) * win.q}
    chis = {}
    if config.method in ('direct', 'both'):
        results['direct'] = average_value_set_direct(win)
    if config.method in ('chi', 'both'):
        chi_methods = ('subsets', 'pointcount') if config.chi_method == 'both' else (config.chi_method,)
        per_method = {m: {r: chi(win, r, m, config.workers) for r in chi_range(win)} for m in chi_methods}
        chis = per_method[chi_methods[0]]
        results['chi'] = {m: {str(r): v for r, v in vals.items()} for m, vals in per_method.items()}
        results['via_chi'] = average_value_set_via_chi(win, chis=chis)
        if len(chi_methods) == 2:
            checks.append(_identity('chi_methods_agree', per_method['subsets'] == per_method['pointcount']))
    if 'direct' in results and 'via_chi' in results:
        checks.append(_identity('methods_agree', results['direct'] == results['via_chi'],
                                f"direct {results['direct']} vs via chi {results['via_chi']}"))
    if config.verify_bounds:
        try:
            checks.extend(verify_value_set_bounds(win, chis or None, results.get('direct')))
        except HypothesisRangeViolation as e:
            results['bounds_skipped'] = str(e)
            print(f"  ⚠️ Bounds skipped: {e}", file=sys.stderr)
    return results


def _run_value_set(config: RunConfig):
    ctx = _field(config)
    win = CoeffWindow(ctx, config.single_n, config.s, tuple(c if ctx.k > 1 else c % ctx.p for c in config.a))
    checks: List = []
    results = _value_set_one(win, config, checks)
    row = {'q': win.q, 'n': win.n, 's': win.s, 'a': ' '.join(str(c) for c in win.a),
           'direct': results.get('direct', ''), 'via_chi': results.get('via_chi', '')}
    return results, checks, [row], ['q', 'n', 's', 'a', 'direct', 'via_chi']


def _run_hypothesis_check(config: RunConfig):
    sys_ = _system(config)
    report = hypothesis_check(sys_, config.max_ext or get_max_extension())
    checks = [_identity('hypotheses_sampled', report.passed, report.label)]
    return asdict(report), checks, _check_rows(checks), ['name', 'passed', 'note']


def _run_verify_bounds(config: RunConfig):
    """Value-set and prescribed-coefficient estimate suites over a (q, n) grid."""
    checks, rows, sweep = [], [], []
    for q in config.q:
        ctx = _field(config, q)
        for n in config.n:
            for s in range(1, n // 2):
                win = CoeffWindow(ctx, n, s, (0,) * s)
                chis = {r: chi(win, r) for r in chi_range(win)}
                suite = verify_value_set_bounds(win, chis, average_value_set_direct(win))
                checks.extend(suite)
                rows.extend(_check_rows(suite, {'suite': 'value_set', 'q': q, 'n': n, 's': s}))
                sweep.append({'suite': 'value_set', 'q': q, 'n': n, 's': s})
            if q > n:
                fam = prescribed_family(ctx, n, {1: 0})
                suite = verify_pattern_bounds(family_census(fam, config.workers))
                checks.extend(suite)
                rows.extend(_check_rows(suite, {'suite': 'prescribed', 'q': q, 'n': n, 's': fam.s}))
                sweep.append({'suite': 'prescribed', 'q': q, 'n': n, 's': fam.s})
    return {'instances': sweep}, checks, rows, ['suite', 'q', 'n', 's'] + CHECK_COLUMNS


PIPELINES = {
    'count-points': _run_count_points,
    'pattern-census': _run_pattern_census,
    'value-set': _run_value_set,
    'hypothesis-check': _run_hypothesis_check,
    'verify-bounds': _run_verify_bounds,
}


def _passed(check) -> bool:
    return check['passed'] if isinstance(check, dict) else check.passed


def _summary_line(check) -> str:
    mark = '✓' if _passed(check) else '✗'
    if isinstance(check, dict):
        return f"  {mark} {check['name']}" + (f"  ({check['note']})" if check.get('note') else '')
    vacuous = ' [vacuous]' if check.vacuous else ''
    hypotheses = '' if check.hypotheses_met else ' [hypotheses not met]'
    return (f"  {mark} {check.name}  deviation={check.observed_deviation} bound={check.bound} "
            f"slack={check.slack}{vacuous}{hypotheses}")


def run(config: RunConfig) -> int:
    """Execute one pipeline, emit its report and return the exit status."""
    previous = os.environ.get('SYMCENSUS_WORK_CEILING')
    if config.work_ceiling:
        os.environ['SYMCENSUS_WORK_CEILING'] = str(config.work_ceiling)
    try:
        return _execute(config)
    finally:
        if previous is None:
            os.environ.pop('SYMCENSUS_WORK_CEILING', None)
        else:
            os.environ['SYMCENSUS_WORK_CEILING'] = previous


def _execute(config: RunConfig) -> int:
    print("=" * 60, file=sys.stderr)
    print(f"SYMMETRIC CENSUS: {config.command}", file=sys.stderr)
    print("=" * 60, file=sys.stderr)
    start = time.perf_counter()
    try:
        results, checks, rows, columns = PIPELINES[config.command](config)
        params = {k: v for k, v in asdict(config).items() if k not in ('out', 'format', 'workers', 'work_ceiling')}
        if config.format == 'csv':
            text = render_csv(rows, columns)
        else:
            text = render_json(build_report(config.command, params, results, checks))
        if config.out:
            write_atomic(config.out, text)
        else:
            sys.stdout.write(text)
    except (ValueError, ArithmeticError, OSError) as e:
        # ContractError, input parse errors and unwritable report paths
        print(f"  ✗ {type(e).__name__}: {e}", file=sys.stderr)
        return 2

    for check in checks:
        print(_summary_line(check), file=sys.stderr)
    failed = sum(1 for c in checks if not _passed(c))
    print("=" * 60, file=sys.stderr)
    if failed:
        print(f"❌ {failed}/{len(checks)} checks failed ({time.perf_counter() - start:.2f}s)", file=sys.stderr)
        return 1
    print(f"✅ All checks passed ({len(checks)}/{len(checks)}, {time.perf_counter() - start:.2f}s)", file=sys.stderr)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = load_run_config(argv)
    except ConfigError as e:
        print(f"✗ Config error: {e}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == '__main__':
    sys.exit(main())
