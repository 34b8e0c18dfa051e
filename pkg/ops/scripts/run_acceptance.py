"""
Acceptance Sweep

Exhaustive and randomized cross-checks over the desk-scale grid: field tables,
factorization patterns, the Jacobian factorization, the H-table recursion,
point counts, value-set identities, the root-encoding correspondence and the
explicit estimates. Run this after touching any of the algebra or
verification modules.

Usage:
    python ops/scripts/run_acceptance.py
    python ops/scripts/run_acceptance.py --workers 4
"""

import argparse
import itertools
import os
import random
import sys
from fractions import Fraction

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Add packages to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'packages'))

from algebra.algebra.ff import build_field, find_normal_element, rank_mod_p
from algebra.algebra.symsys import parse_system, vandermonde_factorization_check
from algebra.algebra.upoly import FactPattern, monic_census
from verify.verify.census import count_points, count_points_direct, verify_estimate
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
    _endpoints,
    average_value_set_direct,
    average_value_set_via_chi,
    build_H_table,
    chi,
    chi_range,
    final_envelope,
    h_table_check,
    verify_value_set_bounds,
)

TOTAL = 11
WORKERS = 1

VANDERMONDE_POINTS = 10_000
H_TABLE_INSTANCES = 10_000
WINDOWS_PER_CELL = 20

# (q, n, family text) for the correspondence scans; two families per (q, n)
CORRESPONDENCE_FAMILIES = [
    (5, 3, '1 | 0'),
    (5, 3, '1 1 | 2'),
    (7, 2, '1 | 0'),
    (7, 2, '1 1 | 3'),
    (7, 3, '1 | 0'),
    (7, 3, '1 1 | 2'),
]

# (q, n, family text or prescribed values) for the pattern bound suite
PATTERN_FAMILIES = [
    (5, 4, '1 | 0'),
    (7, 4, '1 | 3'),
    (7, 5, '0 1 | 3'),
    (5, 4, {1: 0}),
    (7, 5, {1: 0}),
    (7, 5, {2: 1}),
]


def _mobius(n: int) -> int:
    result, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    return -result if n > 1 else result


def _irreducible_count(q: int, n: int) -> int:
    return sum(_mobius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def check_fields():
    """Moduli, Frobenius fixed points and normal elements of the small extensions."""
    print(f"\n[1/{TOTAL}] Checking finite field tables...")
    if build_field(2, 2).modulus != (1, 1, 1) or build_field(3, 2).modulus != (1, 0, 1):
        print("  ✗ Unexpected default modulus for F_4 or F_9")
        return False
    for p, k in [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4)]:
        ctx = build_field(p, k)
        fixed = [a for a in ctx.elements() if ctx.frob(a) == a]
        if fixed != list(range(p)):
            print(f"  ✗ Frobenius fixes {len(fixed)} elements of {ctx}")
            return False
        theta = find_normal_element(ctx).code
        if rank_mod_p([ctx.digits(ctx.frob(theta, h)) for h in range(k)], p) != k:
            print(f"  ✗ Normal element {theta} of {ctx} does not span")
            return False
    print("  ✓ Moduli, Frobenius and normal elements consistent")
    return True


def check_pattern_census():
    """Irreducible counts against the necklace formula."""
    print(f"\n[2/{TOTAL}] Checking factorization patterns...")
    for (p, k), n in itertools.product([(2, 1), (3, 1), (5, 1), (7, 1), (2, 2)], range(1, 6)):
        ctx = build_field(p, k)
        if ctx.q ** n > 20000:
            continue
        census = monic_census(ctx, n)
        expected = _irreducible_count(ctx.q, n)
        got = census.get(FactPattern.from_parts([n]), 0)
        if got != expected or sum(census.values()) != ctx.q ** n:
            print(f"  ✗ {ctx}, n={n}: {got} irreducibles, expected {expected}")
            return False
    print("  ✓ Irreducible counts match the necklace formula")
    return True


def check_vandermonde():
    """Jacobian = B A with the Vandermonde determinant, on random points with forced repeats."""
    print(f"\n[3/{TOTAL}] Checking Jacobian of the elementary symmetric map...")
    rng = random.Random(3)
    fields = {q: build_field(q) for q in (3, 5, 7, 11)}
    repeated = 0
    for _ in range(VANDERMONDE_POINTS):
        q = rng.choice(list(fields))
        r = rng.randint(1, 6)
        x = [rng.randrange(q) for _ in range(r)]
        if r > 1 and rng.random() < 0.25:
            i, j = rng.sample(range(r), 2)
            x[j] = x[i]
        repeated += len(set(x)) < r
        if not vandermonde_factorization_check(fields[q], x):
            print(f"  ✗ Factorization fails over F_{q} at x={x}")
            return False
    print(f"  ✓ {VANDERMONDE_POINTS} points agree ({repeated} with repeated coordinates)")
    return True


def check_h_table():
    """Reconstructed remainders of T^j against direct division."""
    print(f"\n[4/{TOTAL}] Checking H-table recursion...")
    rng = random.Random(4)
    fields = {q: build_field(q) for q in (3, 5, 7, 11)}
    tables = {}
    for _ in range(H_TABLE_INSTANCES):
        q = rng.choice(list(fields))
        n = rng.randint(1, 7)
        r = rng.randint(1, n)
        if (q, r, n) not in tables:
            tables[(q, r, n)] = build_H_table(fields[q], r, n)
        x = [rng.randrange(q) for _ in range(r)]
        if not h_table_check(fields[q], tables[(q, r, n)], x, n):
            print(f"  ✗ Mismatch over F_{q} at r={r}, n={n}, x={x}")
            return False
    print(f"  ✓ {H_TABLE_INSTANCES} instances, {len(tables)} tables, zero mismatches")
    return True


SYSTEMS = [
    ('Y1', 1, 4),
    ('Y1 - 1', 1, 4),
    ('Y2 - 1', 2, 4),
    ('Y1^2 + Y2', 2, 4),
    ('Y1 - 1', 1, 5),
    ('Y2 - 1', 2, 5),
    ('Y1^2 + Y2', 2, 5),
    ('Y1\nY2 + 1', 2, 6),
]


def check_point_counts():
    """Orbit enumeration against the direct scan, and across worker counts."""
    print(f"\n[5/{TOTAL}] Checking point counts (orbit vs direct)...")
    pool = max(2, WORKERS)
    for q in (3, 5):
        ctx = build_field(q)
        for text, s, r in SYSTEMS:
            sys_ = parse_system(text, ctx, s, r, strict=False)
            orbit = count_points(sys_, workers=1)
            direct = count_points_direct(sys_, workers=WORKERS)
            pooled = count_points(sys_, workers=pool)
            if (orbit.affine_count, orbit.distinct_count) != (direct.affine_count, direct.distinct_count):
                print(f"  ✗ q={q}, system {text!r}: orbit {orbit.affine_count} vs direct {direct.affine_count}")
                return False
            if orbit != pooled:
                print(f"  ✗ q={q}, system {text!r}: counts differ between 1 and {pool} workers")
                return False
    print(f"  ✓ {2 * len(SYSTEMS)} systems agree, deterministic across 1 and {pool} workers")
    return True


def check_estimates():
    print(f"\n[6/{TOTAL}] Checking point-count estimates...")
    vacuous = flagged = 0
    for q in (5, 7):
        ctx = build_field(q)
        for text, s, r in SYSTEMS:
            sys_ = parse_system(text, ctx, s, r, strict=False)
            for check in verify_estimate(count_points(sys_, workers=WORKERS, with_infinity=True), sys_):
                if not check.hypotheses_met:
                    flagged += 1
                    continue
                if not check.passed:
                    print(f"  ✗ q={q}, system {text!r}: {check.name} deviation {check.observed_deviation} > {check.bound}")
                    return False
                vacuous += check.vacuous
    print(f"  ✓ All estimates hold ({vacuous} vacuous at this scale, {flagged} outside the hypotheses)")
    return True


def _windows(rng, q, s):
    """Every window at q = 3 or when there are few; otherwise a fixed-size sample."""
    every = list(itertools.product(range(q), repeat=s))
    if q == 3 or len(every) <= WINDOWS_PER_CELL:
        return every
    return rng.sample(every, WINDOWS_PER_CELL)


def check_value_sets():
    """chi by subsets vs by point count, the two averages, and the value-set estimates."""
    print(f"\n[7/{TOTAL}] Checking value-set identities and estimates...")
    rng = random.Random(2024)
    instances = bounded = vacuous = 0

    worked = CoeffWindow(build_field(5), 3, 1, (0,))
    if not average_value_set_direct(worked) == average_value_set_via_chi(worked) == Fraction(17, 5):
        print("  ✗ q=5, n=3, s=1, a=(0) does not give 17/5 by both paths")
        return False

    for q in (3, 5, 7):
        ctx = build_field(q)
        for n in (4, 5, 6):
            for s in range(1, n - 1):
                for a in _windows(rng, q, s):
                    win = CoeffWindow(ctx, n, s, a)
                    subsets = {r: chi(win, r, 'subsets') for r in chi_range(win)}
                    points = {r: chi(win, r, 'pointcount', WORKERS) for r in chi_range(win)}
                    if subsets != points:
                        print(f"  ✗ chi mismatch at {win.describe()}: {subsets} vs {points}")
                        return False
                    average = average_value_set_direct(win)
                    if average != average_value_set_via_chi(win, chis=subsets):
                        print(f"  ✗ average mismatch at {win.describe()}")
                        return False
                    instances += 1
                    if 2 * (s + 1) > n:
                        continue
                    for check in verify_value_set_bounds(win, chis=subsets, average=average):
                        if not check.passed:
                            print(f"  ✗ {check.name} at {win.describe()}: deviation {check.observed_deviation} "
                                  f"> {check.bound}")
                            return False
                        bounded += 1
                        vacuous += check.vacuous
    print(f"  ✓ {instances} windows agree; {bounded} estimates hold ({vacuous} vacuous)")
    return True


def _family(ctx, n, definition):
    if isinstance(definition, dict):
        return prescribed_family(ctx, n, definition)
    return parse_family(definition + '\n', ctx, n)


def check_pattern_bounds():
    """Census closure, proportions and the pattern estimates per family."""
    print(f"\n[8/{TOTAL}] Checking factorization-pattern estimates...")
    held = vacuous = 0
    for q, n, definition in PATTERN_FAMILIES:
        fam = _family(build_field(q), n, definition)
        census = family_census(fam, WORKERS)
        if census.total() != q ** (n - fam.m):
            print(f"  ✗ q={q}, n={n}, family {definition!r}: {census.total()} members, expected {q ** (n - fam.m)}")
            return False
        if sum(pattern_constants(lam)[1] for lam in enumerate_patterns(n)) != 1:
            print(f"  ✗ Pattern proportions for n={n} do not sum to 1")
            return False
        for check in verify_pattern_bounds(census):
            if not check.hypotheses_met:
                print(f"  ✗ q={q}, n={n}, family {definition!r} is outside the estimate's hypotheses")
                return False
            if not check.passed:
                print(f"  ✗ q={q}, n={n}, family {definition!r}: {check.name} deviation "
                      f"{check.observed_deviation} > {check.bound}")
                return False
            held += 1
            vacuous += check.vacuous
    print(f"  ✓ {len(PATTERN_FAMILIES)} families closed; {held} estimates hold ({vacuous} vacuous)")
    return True


def check_correspondence():
    print(f"\n[9/{TOTAL}] Checking root-encoding correspondence...")
    scans = 0
    for q, n, text in CORRESPONDENCE_FAMILIES:
        fam = parse_family(text + '\n', build_field(q), n)
        census = family_census(fam, WORKERS)
        nonsquarefree = sum(census.nonsquarefree(lam) for lam in census.counts)
        if nonsquarefree > n * (n - 1) * q ** (n - fam.m - 1):
            print(f"  ✗ q={q}, n={n}, family {text!r}: {nonsquarefree} non-squarefree members")
            return False
        for lam in enumerate_patterns(n):
            report = correspondence_check(fam, lam, census, WORKERS)
            if not report.passed:
                print(f"  ✗ q={q}, n={n}, family {text!r}, pattern {lam}: {report}")
                return False
            if report.note:
                print(f"  ⚠️ q={q}, n={n}, pattern {lam}: {report.note}")
            scans += 1
    print(f"  ✓ {scans} scans: every squarefree member has w(lambda) preimages")
    return True


def check_envelope():
    print(f"\n[10/{TOTAL}] Checking final envelope shape...")
    lows = {n: _endpoints(final_envelope(n)) for n in (13, 14, 15, 50, 51)}
    if not (1.07e5 < lows[14][0] and lows[14][1] < 1.09e5):
        print(f"  ✗ Envelope at 14 is {lows[14]}")
        return False
    if not (lows[13][1] < lows[14][0] and lows[15][1] < lows[14][0]):
        print("  ✗ Envelope is not maximal at 14")
        return False
    if not (lows[50][0] > 1 and lows[51][1] < 1):
        print("  ✗ Envelope does not cross 1 between 50 and 51")
        return False
    print("  ✓ Maximum at n=14, below 1 from n=51")
    return True


def check_worker_determinism():
    """A family census is identical at every worker count."""
    print(f"\n[11/{TOTAL}] Checking census determinism across workers...")
    fam = parse_family('1 | 0\n', build_field(7), 4)
    baseline = family_census(fam, 1).rows()
    for workers in sorted({2, max(2, WORKERS)}):
        if family_census(fam, workers).rows() != baseline:
            print(f"  ✗ Census differs at {workers} workers")
            return False
    print("  ✓ Identical rows at every worker count")
    return True


def main():
    """Run all acceptance checks."""
    global WORKERS
    parser = argparse.ArgumentParser(description='Acceptance sweep')
    parser.add_argument('--workers', type=int, default=1, help='process pool size for enumerations')
    WORKERS = parser.parse_args().workers

    print("=" * 60)
    print("ACCEPTANCE SWEEP")
    print("=" * 60)

    checks = [
        check_fields,
        check_pattern_census,
        check_vandermonde,
        check_h_table,
        check_point_counts,
        check_estimates,
        check_value_sets,
        check_pattern_bounds,
        check_correspondence,
        check_envelope,
        check_worker_determinism,
    ]

    results = []
    for check in checks:
        try:
            result = check()
            results.append(result)
        except Exception as e:
            print(f"  ✗ Error: {str(e)}")
            results.append(False)

    print("\n" + "=" * 60)
    print("SUMMARY")
    print("=" * 60)

    passed = sum(results)
    total = len(results)

    if all(results):
        print(f"✅ All checks passed ({passed}/{total})")
        return 0
    else:
        print(f"❌ Some checks failed ({passed}/{total})")
        print("\nPlease review the failing check above.")
        return 1


if __name__ == '__main__':
    sys.exit(main())
