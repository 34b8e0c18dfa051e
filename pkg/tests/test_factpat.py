import itertools
import sys
from fractions import Fraction
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))
sys.path.insert(0, str(ROOT / 'packages'))

from algebra.algebra.ff import build_field  # noqa: E402
from algebra.algebra.upoly import FactPattern, UPoly, factorization_pattern  # noqa: E402
from shared.shared.errors import (  # noqa: E402
    DegenerateFamily,
    FieldTooLarge,
    HypothesisRangeViolation,
    InconsistentSystem,
)
from verify.verify import factpat  # noqa: E402
from verify.verify.factpat import (  # noqa: E402
    build_root_encoding,
    coefficient_identity_check,
    coefficient_identity_supported,
    common_field_degree,
    correspondence_check,
    enumerate_patterns,
    evaluate_G,
    family_census,
    is_type_lambda,
    parse_family,
    pattern_constants,
    prescribed_family,
    verify_pattern_bounds,
)

F3, F5 = build_field(3), build_field(5)
LAM = FactPattern.from_text


def _trace_zero_quadratics():
    return parse_family('1 | 0\n', F3, 2)


def test_pattern_constants():
    assert pattern_constants(LAM('1^1 2^1')) == (2, Fraction(1, 2))
    assert pattern_constants(LAM('1^4')) == (24, Fraction(1, 24))
    assert pattern_constants(LAM('5^1')) == (5, Fraction(1, 5))


def test_enumerate_patterns():
    assert [str(p) for p in enumerate_patterns(3)] == ['1^3', '1^1 2^1', '3^1']
    assert [str(p) for p in enumerate_patterns(1)] == ['1^1']
    assert len(enumerate_patterns(5)) == 7


@pytest.mark.parametrize('n', range(1, 13))
def test_pattern_proportions_sum_to_one(n):
    assert sum(pattern_constants(p)[1] for p in enumerate_patterns(n)) == 1


def test_family_census_trace_zero_quadratics():
    census = family_census(_trace_zero_quadratics())
    assert census.m == 1
    assert census.counts == {LAM('1^2'): (2, 1), LAM('2^1'): (1, 1)}
    assert census.total() == 3
    assert census.rows() == [
        {'pattern': '1^2', 'total': 2, 'squarefree': 1},
        {'pattern': '2^1', 'total': 1, 'squarefree': 1},
    ]


def test_prescribed_family_matches_parsed_family():
    fam = prescribed_family(F3, 2, {1: 0})
    assert fam.prescribed
    assert family_census(fam).counts == family_census(_trace_zero_quadratics()).counts


def test_census_closure_and_brute_force():
    fam = parse_family('1 2 | 3\n', F5, 4)
    census = family_census(fam)
    assert census.total() == 5 ** 3
    expected = {}
    for low in itertools.product(range(5), repeat=4):
        f = UPoly(F5, tuple(low) + (1,))
        if fam.contains(f):
            lam = factorization_pattern(f)
            expected[lam] = expected.get(lam, 0) + 1
    assert {lam: t for lam, (t, _) in census.counts.items() if t} == expected


def test_family_without_free_coefficients():
    fam = prescribed_family(F5, 2, {1: 1, 2: 1})
    census = family_census(fam)
    # T^2 + T + 1 has discriminant 2, a non-square mod 5
    assert census.counts[LAM('2^1')] == (1, 1)
    assert census.total() == 1


def test_family_contracts():
    with pytest.raises(InconsistentSystem):
        parse_family('1 0 | 0\n2 0 | 1\n', F5, 4)
    with pytest.raises(DegenerateFamily):
        parse_family('1 0 | 0\n2 0 | 0\n', F5, 4)
    with pytest.raises(HypothesisRangeViolation):
        parse_family('1 | 0\n', F3, 3)
    with pytest.raises(DegenerateFamily, match='line 2'):
        parse_family('1 | 0\n1 0\n', F5, 3)


def test_pivot_ordering():
    fam = parse_family('0 1 | 2\n1 0 | 0\n', F5, 4)
    assert fam.pivots == (1, 2)
    assert fam.D_L == 1 and fam.delta_L == 2


def test_pattern_bounds_on_small_census():
    checks = verify_pattern_bounds(family_census(_trace_zero_quadratics()))
    names = [c.name for c in checks]
    assert names == ['squarefree[1^2]', 'total[1^2]', 'squarefree[2^1]', 'total[2^1]', 'discriminant_locus']
    assert all(c.passed for c in checks)
    assert checks[0].vacuous
    assert not any(c.hypotheses_met for c in checks)


def test_tampered_census_fails():
    census = family_census(_trace_zero_quadratics())
    census.counts[LAM('1^2')] = (102, 101)
    failed = [c.name for c in verify_pattern_bounds(census) if not c.passed]
    assert 'squarefree[1^2]' in failed


def test_root_encoding_for_split_pattern():
    enc = build_root_encoding(5, 3, LAM('1^3'))
    assert enc.matrices[1] == ((1,),)
    assert [start for _, _, start in enc.blocks] == [0, 1, 2]
    assert evaluate_G(enc, (1, 2, 3)) == UPoly.from_roots(F5, [1, 2, 3])


def test_root_encoding_for_quadratic_block():
    enc = build_root_encoding(3, 2, LAM('2^1'))
    f = evaluate_G(enc, (1, 0))
    assert f.degree == 2 and all(c < 3 for c in f.coeffs)
    assert factorization_pattern(f) == LAM('2^1')
    assert evaluate_G(enc, (0, 0)) == UPoly.monomial(F3, 2)
    assert not is_type_lambda(enc, (0, 0))
    assert not is_type_lambda(enc, (1, 1))
    assert is_type_lambda(enc, (1, 0))


def test_type_lambda_iff_pattern_lambda():
    for lam in enumerate_patterns(3):
        enc = build_root_encoding(5, 3, lam)
        for x in itertools.product(range(5), repeat=3):
            assert is_type_lambda(enc, x) == (factorization_pattern(evaluate_G(enc, x)) == lam)


def test_coefficient_identity():
    enc = build_root_encoding(5, 3, LAM('1^1 2^1'))
    for x in [(1, 1, 0), (2, 3, 4), (0, 0, 0)]:
        assert coefficient_identity_check(enc, x)


def test_correspondence_on_trace_zero_cubics():
    fam = parse_family('1 | 0\n', F5, 3)
    census = family_census(fam)
    for lam in enumerate_patterns(3):
        report = correspondence_check(fam, lam, census)
        assert report.passed, report
        assert report.w == pattern_constants(lam)[0]
        assert report.squarefree_members == census.counts[lam][1]
        assert report.cross_block_count == report.w * report.squarefree_members


@pytest.mark.parametrize('q,n,text', [
    (5, 3, '1 1 | 0'),
    (7, 2, '1 | 0'),
    (7, 2, '1 1 | 3'),
    (7, 3, '1 | 0'),
    (7, 3, '1 1 | 2'),
])
def test_correspondence_across_families(q, n, text):
    fam = parse_family(text + '\n', build_field(q), n)
    census = family_census(fam)
    for lam in enumerate_patterns(n):
        report = correspondence_check(fam, lam, census)
        assert report.passed, report
        assert report.squarefree_members == census.counts[lam][1]
        assert report.identity_checked == report.member_vectors
        assert report.identity_failures == 0
        assert report.note == ''


def test_correspondence_notes_skipped_coefficient_identity(monkeypatch):
    monkeypatch.setattr(factpat, 'coefficient_identity_supported', lambda enc: False)
    fam = parse_family('1 | 0\n', F5, 3)
    report = correspondence_check(fam, LAM('1^1 2^1'))
    assert report.passed
    assert report.identity_checked == 0
    assert 'skipped' in report.note


def test_coefficient_identity_refuses_oversized_common_field(monkeypatch):
    monkeypatch.setenv('SYMCENSUS_FIELD_CEILING', '65536')
    enc = build_root_encoding(7, 5, LAM('2^1 3^1'))
    assert common_field_degree(enc) == 6
    assert not coefficient_identity_supported(enc)
    with pytest.raises(FieldTooLarge):
        coefficient_identity_check(enc, (1, 0, 1, 2, 0))
    assert coefficient_identity_supported(build_root_encoding(7, 3, LAM('1^1 2^1')))
