import itertools
import random
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))
sys.path.insert(0, str(ROOT / 'packages'))

from algebra.algebra.ff import build_field  # noqa: E402
from algebra.algebra.upoly import UPoly  # noqa: E402
from algebra.algebra.symsys import (  # noqa: E402
    MPoly,
    SymSystem,
    diagonal_substitution_check,
    elem_sym_eval,
    highest_weight_component,
    hypothesis_check,
    infer_inner_dimension,
    jacobian_rank_at,
    leading_component_identity_check,
    parse_mpoly,
    parse_system,
    system_eval,
    vandermonde_factorization_check,
)
from shared.shared.errors import (  # noqa: E402
    DimensionMismatch,
    InsufficientScalars,
    StandingAssumptionViolation,
    ZeroPolynomial,
)

from oracles import naive_elem_sym  # noqa: E402

F2, F5, F7 = build_field(2), build_field(5), build_field(7)


def _system(ctx, text, s, r, strict=True):
    return parse_system(text, ctx, s, r, strict=strict)


def test_elem_sym_examples():
    assert elem_sym_eval(F7, (1, 2, 3), 3) == (6, 4, 6)
    assert elem_sym_eval(F7, (0, 0, 0, 0), 2) == (0, 0)
    assert elem_sym_eval(F7, (3,) * 5, 1) == (F7.mul(5, 3),)


def test_elem_sym_matches_subset_sums():
    rng = random.Random(7)
    for _ in range(50):
        x = [rng.randrange(7) for _ in range(5)]
        assert list(elem_sym_eval(F7, x, 5)) == [naive_elem_sym(x, k, 7) for k in range(1, 6)]


def test_elem_sym_rejects_bad_s():
    with pytest.raises(DimensionMismatch):
        elem_sym_eval(F7, (1, 2), 3)


def test_parse_and_text_format():
    S = parse_mpoly('Y2*Y3 + 4 Y1^4 - 1', F5, 3)
    assert S.as_dict() == {(0, 1, 1): 1, (4, 0, 0): 4, (0, 0, 0): 4}
    assert S.to_text() == '4 * Y1^4 + 1 * Y2^1 Y3^1 + 4'
    assert parse_mpoly(S.to_text(), F5, 3) == S
    assert parse_mpoly('0', F5, 3).to_text() == '0'


def test_weights():
    S = parse_mpoly('Y2 Y3 + Y1^4 + 1', F5, 3)
    assert S.weight() == 5
    assert S.total_degree() == 4
    with pytest.raises(ZeroPolynomial):
        MPoly(F5, 2).weight()


@pytest.mark.parametrize('text,expected', [
    ('Y1^2 + Y2', 'Y1^2 + Y2'),
    ('Y1 + Y3', 'Y3'),
    ('Y2 Y3 + Y1^4 + 1', 'Y2 Y3'),
])
def test_highest_weight_component(text, expected):
    S = parse_mpoly(text, F5, 3)
    assert highest_weight_component(S) == parse_mpoly(expected, F5, 3)


def test_partial_derivative_reduces_multipliers():
    S = parse_mpoly('Y1^2 + Y2', F2, 2)
    assert S.partial(0).is_zero()
    assert S.partial(1) == MPoly.constant(F2, 2, 1)


def test_system_eval_examples():
    sum_zero = _system(F5, 'Y1', 1, 4)
    assert system_eval(sum_zero, (1, 2, 3, 4)) == (0,)

    pairwise = _system(F5, 'Y2 - 1', 2, 4, strict=False)
    assert system_eval(pairwise, (1, 2, 3, 4)) == (4,)

    both = _system(F5, 'Y1\nY2', 2, 6)
    assert system_eval(both, (1, 4, 0, 0, 0, 0)) == (0, 4)


def test_system_invariants():
    sys_ = _system(F7, 'Y2 - 1', 2, 5)
    assert sys_.degrees == (2,)
    assert sys_.D == 1 and sys_.delta == 2
    assert sys_.within_standing_assumption
    assert sys_.digest() == _system(F7, 'Y2 + 6', 2, 5).digest()
    assert sys_.digest() != _system(F7, 'Y2 - 1', 2, 6).digest()


def test_system_contract_violations():
    with pytest.raises(StandingAssumptionViolation):
        _system(F5, 'Y1', 1, 3)
    with pytest.raises(StandingAssumptionViolation):
        SymSystem((MPoly.constant(F5, 1, 2),), 4)
    with pytest.raises(StandingAssumptionViolation):
        SymSystem((), 4)
    with pytest.raises(ZeroPolynomial):
        SymSystem((MPoly(F5, 1),), 4)
    with pytest.raises(DimensionMismatch):
        _system(F5, 'Y3', 3, 2, strict=False)


def test_non_strict_system_is_flagged():
    sys_ = _system(F5, 'Y1', 1, 3, strict=False)
    assert not sys_.within_standing_assumption


def test_parse_system_file_format():
    text = '# sum and pairwise sum\nY1\n\nY2 - 1  # shifted\n'
    assert infer_inner_dimension(text) == 2
    sys_ = _system(F7, text, 2, 6)
    assert sys_.m == 2
    assert sys_.to_text() == '1 * Y1^1\n1 * Y2^1 + 6'


def test_jacobian_rank():
    assert jacobian_rank_at([parse_mpoly('Y1 + 3', F5, 2)], (4, 2)) == 1
    S = parse_mpoly('Y1^2 + Y2', F2, 2)
    assert all(jacobian_rank_at([S], y) == 1 for y in itertools.product(range(2), repeat=2))
    Y1 = parse_mpoly('Y1', F5, 2)
    assert jacobian_rank_at([Y1, Y1], (1, 1)) == 1


def test_hypothesis_check_passes_for_linear_system():
    report = hypothesis_check(_system(F5, 'Y1 - 2', 1, 3, strict=False), max_ext=2)
    assert report.passed
    assert report.label == 'sampled up to degree 2'
    assert report.points_checked == {1: 5, 2: 25}


def test_hypothesis_check_finds_singular_zero_set():
    report = hypothesis_check(_system(F5, 'Y1^2', 2, 5), max_ext=1)
    assert report.verdict == 'FAIL'
    assert report.witness['y'][0] == 0
    assert all(y[0] == 0 for y in report.zero_set_failures[1])


@pytest.mark.parametrize('x', [(0, 1, 2), (3, 3, 1), (4,), (1, 2, 3, 4)])
def test_vandermonde_factorization(x):
    assert vandermonde_factorization_check(F5, x)


def test_leading_component_identity():
    sys_ = _system(F7, 'Y1^2 + Y2 + 3 Y1\nY1', 2, 6)
    rng = random.Random(3)
    sample = [[rng.randrange(7) for _ in range(6)] for _ in range(20)]
    assert leading_component_identity_check(sys_, sample)


def test_leading_component_needs_enough_scalars():
    sys_ = _system(F2, 'Y1^2 + Y2', 2, 5)
    with pytest.raises(InsufficientScalars):
        leading_component_identity_check(sys_, [[1, 0, 1, 0, 0]])


def test_diagonal_substitution():
    for y in itertools.product(range(5), repeat=3):
        assert diagonal_substitution_check(F5, y)


@pytest.mark.parametrize('ctx', [F7, build_field(2, 2), build_field(3, 2)])
def test_elem_sym_are_signed_coefficients_of_root_polynomial(ctx):
    rng = random.Random(ctx.q)
    for r in range(1, 6):
        for _ in range(10):
            x = [rng.randrange(ctx.q) for _ in range(r)]
            f = UPoly.from_roots(ctx, x)
            e = elem_sym_eval(ctx, x, r)
            for k in range(1, r + 1):
                signed = e[k - 1] if k % 2 == 0 else ctx.neg(e[k - 1])
                assert f.coeff(r - k) == signed


def test_elem_sym_invariant_under_permutation():
    rng = random.Random(17)
    for _ in range(30):
        x = [rng.randrange(7) for _ in range(5)]
        y = list(x)
        rng.shuffle(y)
        assert elem_sym_eval(F7, x, 5) == elem_sym_eval(F7, y, 5)
    for y in itertools.permutations((1, 2, 4, 4)):
        assert elem_sym_eval(F5, y, 4) == elem_sym_eval(F5, (1, 2, 4, 4), 4)


def test_jacobian_rank_of_independent_linear_system():
    polys = [parse_mpoly(text, F7, 4) for text in ('Y1 + 2 Y2', 'Y2 + 3 Y4 + 1', 'Y3 - Y4')]
    rng = random.Random(5)
    for _ in range(20):
        y = [rng.randrange(7) for _ in range(4)]
        assert jacobian_rank_at(polys, y) == 3


@pytest.mark.parametrize('q', [3, 7, 11])
def test_vandermonde_factorization_random_points(q):
    ctx = build_field(q)
    rng = random.Random(q)
    for r in range(1, 7):
        for _ in range(15):
            x = [rng.randrange(q) for _ in range(r)]
            assert vandermonde_factorization_check(ctx, x)
        if r > 1:
            assert vandermonde_factorization_check(ctx, [1] * r)
