import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))
sys.path.insert(0, str(ROOT / 'packages'))

from algebra.algebra.ff import (  # noqa: E402
    build_field,
    element,
    embed,
    find_normal_element,
    frobenius,
    matrix_det,
    matrix_rank,
    rank_mod_p,
    rref_mod_p,
)
from shared.shared.errors import FieldMismatch, FieldTooLarge, NonPrime  # noqa: E402


def test_prime_field():
    ctx = build_field(5)
    assert ctx.q == 5
    assert ctx.is_prime_field
    assert str(ctx) == 'F_5'
    assert ctx.mul(3, 4) == 2
    assert ctx.inv(2) == 3


def test_f4_modulus_is_the_only_irreducible_quadratic():
    ctx = build_field(2, 2)
    assert ctx.modulus == (1, 1, 1)
    assert str(ctx) == 'F_2^2'


def test_f9_modulus():
    assert build_field(3, 2).modulus == (1, 0, 1)


def test_non_prime_rejected():
    with pytest.raises(NonPrime):
        build_field(4, 1)


def test_field_ceiling(monkeypatch):
    monkeypatch.setenv('SYMCENSUS_FIELD_CEILING', '8')
    with pytest.raises(FieldTooLarge):
        build_field(2, 4)


@pytest.mark.parametrize('p,k', [(2, 2), (3, 2), (2, 3)])
def test_extension_field_axioms(p, k):
    ctx = build_field(p, k)
    elems = list(ctx.elements())
    for a, b in itertools.product(elems, repeat=2):
        assert ctx.add(a, b) == ctx.add(b, a)
        assert ctx.mul(a, b) == ctx.mul(b, a)
        assert ctx.sub(ctx.add(a, b), b) == a
    for a, b, c in itertools.product(elems, repeat=3):
        assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
    for a in elems[1:]:
        assert ctx.mul(a, ctx.inv(a)) == 1
        assert ctx.pow(a, ctx.q - 1) == 1


def test_frobenius():
    f5 = build_field(5)
    for c in f5.elements():
        assert frobenius(element(f5, c), 1).code == c

    f4 = build_field(2, 2)
    omega = element(f4, 2)
    assert frobenius(omega, 1) == omega * omega
    assert frobenius(omega, 1).code == 3  # omega + 1
    assert frobenius(omega, 0) == omega
    assert frobenius(omega, 2) == omega


def test_prime_subfield_fixed_by_frobenius():
    ctx = build_field(3, 2)
    fixed = [a for a in ctx.elements() if ctx.frob(a) == a]
    assert fixed == [0, 1, 2]


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        element(build_field(2, 2), 1) + element(build_field(3, 2), 1)


def test_normal_elements():
    assert find_normal_element(build_field(5)).code == 1
    assert find_normal_element(build_field(2, 2)).code == 2


def test_f9_normal_element_is_first_spanning_element():
    ctx = build_field(3, 2)
    theta = find_normal_element(ctx).code

    def spans(a):
        return rank_mod_p([ctx.digits(a), ctx.digits(ctx.frob(a))], 3) == 2

    assert spans(theta)
    assert not any(spans(a) for a in range(1, theta))


def test_normal_element_over_intermediate_field():
    ctx = build_field(2, 4)
    theta = find_normal_element(ctx, base_degree=2).code
    moore = [[ctx.frob(theta, 2 * (g + h)) for h in range(2)] for g in range(2)]
    assert matrix_rank(ctx, moore) == 2


def test_embedding_is_a_field_homomorphism():
    small, big = build_field(2, 2), build_field(2, 4)
    table = embed(small, big)
    assert table[0] == 0 and table[1] == 1
    assert len(set(table)) == small.q
    for a, b in itertools.product(small.elements(), repeat=2):
        assert table[small.add(a, b)] == big.add(table[a], table[b])
        assert table[small.mul(a, b)] == big.mul(table[a], table[b])


def test_embed_rejects_non_subfield():
    with pytest.raises(FieldMismatch):
        embed(build_field(2, 3), build_field(2, 4))


def test_rref_mod_p():
    reduced, pivots = rref_mod_p([[2, 4, 1], [1, 2, 4]], 5)
    assert pivots == [0, 2]
    assert np.array_equal(reduced, np.array([[1, 2, 0], [0, 0, 1]]))


def test_matrix_det_vandermonde():
    ctx = build_field(7)
    xs = [1, 3, 4]
    rows = [[ctx.pow(x, k) for x in xs] for k in range(3)]
    expected = ctx.prod(ctx.sub(xs[j], xs[i]) for i in range(3) for j in range(i + 1, 3))
    assert matrix_det(ctx, rows) == expected
    assert matrix_rank(ctx, [[1, 2], [2, 4]]) == 1


PRIME_POWERS_TO_64 = [(p, k) for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)
                      for k in range(1, 7) if p ** k <= 64]


@pytest.mark.parametrize('p,k', PRIME_POWERS_TO_64)
def test_unit_group_order_by_repeated_multiplication(p, k):
    ctx = build_field(p, k)
    orders = set()
    for a in range(1, ctx.q):
        acc, order = a, 1
        while acc != 1:
            acc = ctx.mul(acc, a)
            order += 1
        assert (ctx.q - 1) % order == 0
        orders.add(order)
        assert ctx.pow(a, ctx.q - 1) == 1
    # cyclic: some element generates the whole unit group
    assert ctx.q - 1 in orders


@pytest.mark.parametrize('p,k', [(p, k) for p, k in PRIME_POWERS_TO_64 if k > 1])
def test_frobenius_is_a_field_automorphism(p, k):
    ctx = build_field(p, k)
    elems = list(ctx.elements())
    for e in range(1, k):
        images = [ctx.frob(a, e) for a in elems]
        assert sorted(images) == elems
        for a, b in itertools.product(elems, repeat=2):
            assert ctx.frob(ctx.add(a, b), e) == ctx.add(images[a], images[b])
            assert ctx.frob(ctx.mul(a, b), e) == ctx.mul(images[a], images[b])
    for a in elems:
        acc = 1
        for _ in range(p):
            acc = ctx.mul(acc, a)
        assert ctx.frob(a) == acc
        assert ctx.frob(a, k) == a
