import itertools
import random
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))
sys.path.insert(0, str(ROOT / 'packages'))

from algebra.algebra.ff import build_field  # noqa: E402
from algebra.algebra.upoly import (  # noqa: E402
    FactPattern,
    UPoly,
    distinct_degree_split,
    factorization_pattern,
    is_squarefree,
    monic_census,
    poly_divrem,
    poly_gcd,
    poly_mul,
    squarefree_decomposition,
)
from shared.shared.errors import DivisionByZeroPoly, InvalidPattern, NotMonic  # noqa: E402

from oracles import naive_mul, naive_pattern, naive_rem  # noqa: E402

F3, F5, F7 = build_field(3), build_field(5), build_field(7)


def _poly(ctx, *coeffs):
    return UPoly.from_coeffs(ctx, coeffs)


def test_divrem_cubic_by_split_cubic():
    f = UPoly.monomial(F7, 3)
    g = UPoly.from_roots(F7, [1, 2, 3])
    quo, rem = poly_divrem(f, g)
    assert rem.coeffs == (6, 3, 6)
    assert quo.is_one()
    assert poly_mul(quo, g) + rem == f


def test_remainder_by_t_is_constant_term():
    f = _poly(F5, 3, 1, 4, 1)
    _, rem = poly_divrem(f, _poly(F5, 0, 1))
    assert rem.coeffs == (f(0),)


def test_self_division():
    f = _poly(F3, 1, 0, 1)
    quo, rem = poly_divrem(f, f)
    assert quo.is_one() and rem.is_zero()


def test_division_by_zero_polynomial():
    with pytest.raises(DivisionByZeroPoly):
        poly_divrem(_poly(F5, 1, 1), UPoly(F5, ()))


def test_divrem_matches_schoolbook_oracle():
    g = [2, 0, 1, 1]
    for coeffs in itertools.product(range(5), repeat=5):
        _, rem = poly_divrem(UPoly(F5, coeffs), UPoly(F5, tuple(g)))
        assert list(rem.coeffs) == naive_rem(coeffs, g, 5)


def test_gcd_is_monic():
    f = UPoly.from_roots(F7, [1, 2])
    g = poly_mul(UPoly.from_roots(F7, [2, 5]), _poly(F7, 3))
    assert poly_gcd(f, g) == UPoly.from_roots(F7, [2])


def test_squarefree():
    assert is_squarefree(_poly(F3, 1, 0, 1))
    assert not is_squarefree(_poly(F3, 0, 0, 1))
    # T^5 - 2 is a fifth power over F_5
    assert not is_squarefree(_poly(F5, -2, 0, 0, 0, 0, 1))


def test_patterns_of_small_examples():
    assert factorization_pattern(_poly(F3, 1, 0, 1)) == FactPattern((0, 1), 2)
    f = poly_mul(UPoly.from_roots(F5, [1, 1]), UPoly.from_roots(F5, [2]))
    assert factorization_pattern(f) == FactPattern((3, 0, 0), 3)
    assert factorization_pattern(_poly(F3, 0, 0, 1)).counts == (2, 0)


def test_pattern_needs_monic():
    with pytest.raises(NotMonic):
        factorization_pattern(_poly(F5, 1, 0, 2))


@pytest.mark.parametrize('p,n', [(2, 4), (3, 5), (5, 3), (5, 5), (7, 3), (7, 4)])
def test_patterns_match_trial_division(p, n):
    ctx = build_field(p)
    for tail in itertools.product(range(p), repeat=n):
        coeffs = tuple(tail) + (1,)
        assert factorization_pattern(UPoly(ctx, coeffs)).counts == naive_pattern(coeffs, p)


def test_squarefree_decomposition():
    f = poly_mul(UPoly.from_roots(F5, [1, 1]), UPoly.from_roots(F5, [2]))
    assert squarefree_decomposition(f) == [
        (UPoly.from_roots(F5, [2]), 1),
        (UPoly.from_roots(F5, [1]), 2),
    ]


def test_distinct_degree_split():
    irreducible = _poly(F3, 1, 0, 1)
    f = poly_mul(irreducible, UPoly.from_roots(F3, [0, 1]))
    split = distinct_degree_split(f)
    assert [(g.degree, i) for g, i in split] == [(2, 1), (2, 2)]
    assert split[1][0] == irreducible


def test_pth_power_over_extension():
    f4 = build_field(2, 2)
    # T^2 + omega = (T + omega^2)^2
    f = UPoly(f4, (2, 0, 1))
    assert not is_squarefree(f)
    assert factorization_pattern(f).counts == (2, 0)


@pytest.mark.parametrize('p,k,n,irreducible', [(3, 1, 2, 3), (2, 2, 2, 6), (2, 2, 3, 20), (3, 1, 4, 18)])
def test_monic_census_counts_irreducibles(p, k, n, irreducible):
    ctx = build_field(p, k)
    census = monic_census(ctx, n)
    assert sum(census.values()) == ctx.q ** n
    top = FactPattern.from_parts([n])
    assert census[top] == irreducible


def test_pattern_text():
    lam = FactPattern.from_text('1^2 2^1')
    assert lam.counts == (2, 1, 0, 0)
    assert str(lam) == '1^2 2^1'
    assert lam.parts() == [2, 1, 1]
    assert FactPattern.from_parts([1]) + FactPattern.from_parts([2]) == FactPattern.from_parts([2, 1])


def test_invalid_pattern():
    with pytest.raises(InvalidPattern):
        FactPattern((1, 1), 2)
    with pytest.raises(InvalidPattern):
        FactPattern.from_text('x^2')


def _random_monic(rng, ctx, degree):
    return UPoly(ctx, tuple(rng.randrange(ctx.q) for _ in range(degree)) + (1,))


def test_quintic_patterns_over_f7_match_trial_division():
    rng = random.Random(75)
    for _ in range(300):
        f = _random_monic(rng, F7, 5)
        assert factorization_pattern(f).counts == naive_pattern(f.coeffs, 7)


@pytest.mark.parametrize('ctx', [F3, F5, F7])
def test_pattern_of_coprime_product_is_sum(ctx):
    rng = random.Random(ctx.q)
    tested = 0
    while tested < 40:
        f = _random_monic(rng, ctx, rng.randint(1, 3))
        g = _random_monic(rng, ctx, rng.randint(1, 3))
        if not poly_gcd(f, g).is_one():
            continue
        product = poly_mul(f, g)
        assert list(product.coeffs) == naive_mul(f.coeffs, g.coeffs, ctx.q)
        assert factorization_pattern(product) == factorization_pattern(f) + factorization_pattern(g)
        tested += 1


@pytest.mark.parametrize('ctx,n', [(F3, 4), (F5, 3)])
def test_squarefree_iff_single_simple_part(ctx, n):
    for tail in itertools.product(range(ctx.q), repeat=n):
        f = UPoly(ctx, tail + (1,))
        parts = squarefree_decomposition(f)
        assert is_squarefree(f) == (parts == [(f, 1)])
        rebuilt = UPoly(ctx, (1,))
        for g, e in parts:
            for _ in range(e):
                rebuilt = poly_mul(rebuilt, g)
        assert rebuilt == f
