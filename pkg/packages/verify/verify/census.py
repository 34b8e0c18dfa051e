"""
Point counting for symmetric systems.

R_i(x) depends only on the multiset of coordinates of x, so the affine count
walks multisets of size r (C(q+r-1, r) of them) and weights each by its orbit
size r!/prod mult!. Partial coordinate-inequality sets need the ordering of x
and fall back to the direct q^r scan, which is also kept as the oracle.
"""

import itertools
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from algebra.algebra.symsys import SymSystem, require_homogeneous, system_eval
from shared.shared.config import check_work
from shared.shared.errors import NonHomogeneousLeadingPart, ReportMismatch
from shared.shared.workers import map_partitions

Pair = Tuple[int, int]


# --- REPORT TYPES ---

@dataclass
class CountReport:
    q: int
    r: int
    m: int
    system_digest: str
    method: str
    ineq: List[Pair]
    affine_count: int
    distinct_count: int
    infinity_count: Optional[int] = None
    diagonal_count: Optional[int] = None
    work: int = 0
    wall_time: float = field(default=0.0, compare=False)


@dataclass
class BoundCheck:
    """|observed - main_term| <= bound (or observed <= bound for one-sided checks)."""
    name: str
    D: int
    delta: int
    main_term: Fraction
    bound: Fraction
    observed: Fraction
    observed_deviation: Fraction
    passed: bool
    slack: str
    vacuous: bool
    hypotheses_met: bool
    note: str = ''


def decimal_ratio(num: Fraction, den: Fraction, places: int = 6) -> str:
    """num/den truncated to a fixed number of decimals."""
    if den == 0:
        return '0' if num == 0 else 'inf'
    ratio = Fraction(num) / Fraction(den)
    scaled = math.floor(ratio * 10 ** places)
    whole, frac = divmod(scaled, 10 ** places)
    return f"{whole}.{frac:0{places}d}"


def make_check(name: str, observed, main_term, bound, low, high, D: int = 0, delta: int = 1,
               hypotheses_met: bool = True, note: str = '', one_sided: bool = False) -> BoundCheck:
    """
    Evaluate one inequality exactly. The bound is vacuous when it covers every
    deviation the trivial range [low, high] of the observed quantity allows.
    """
    observed, main_term, bound = Fraction(observed), Fraction(main_term), Fraction(bound)
    if one_sided:
        deviation = max(Fraction(0), observed - main_term)
        widest = Fraction(high) - main_term
    else:
        deviation = abs(observed - main_term)
        widest = max(abs(main_term - Fraction(low)), abs(Fraction(high) - main_term))
    return BoundCheck(
        name=name,
        D=D,
        delta=delta,
        main_term=main_term,
        bound=bound,
        observed=observed,
        observed_deviation=deviation,
        passed=deviation <= bound,
        slack=decimal_ratio(deviation, bound),
        vacuous=bound >= widest,
        hypotheses_met=hypotheses_met,
        note=note,
    )


# --- BOUND ARITHMETIC ---

def projective_size(q: int, k: int) -> int:
    """p_k = q^k + ... + q + 1, zero for k < 0."""
    return sum(q ** i for i in range(k + 1)) if k >= 0 else 0


def affine_bound(D: int, delta: int, q: int, r: int, m: int) -> Fraction:
    return 14 * D ** 3 * delta ** 2 * (q + 1) * Fraction(q) ** (r - m - 2)


def distinct_bound(D: int, delta: int, q: int, r: int, m: int, n_pairs: int) -> Fraction:
    return affine_bound(D, delta, q, r, m) + n_pairs * delta * Fraction(q) ** (r - m - 1)


def infinity_bound(D: int, delta: int, q: int, r: int, m: int) -> Fraction:
    return 14 * D ** 3 * delta ** 2 * Fraction(q) ** (r - m - 2)


def closure_bound(D: int, delta: int, q: int, r: int, m: int) -> Fraction:
    return 14 * D ** 3 * delta ** 2 * Fraction(q) ** (r - m - 1)


def diagonal_bound(delta: int, q: int, r: int, m: int) -> Fraction:
    return delta * Fraction(q) ** (r - m - 1)


# --- ENUMERATION WORKERS (top-level so they pickle) ---

def orbit_weight(multiset: Sequence[int]) -> int:
    weight = math.factorial(len(multiset))
    for mult in Counter(multiset).values():
        weight //= math.factorial(mult)
    return weight


def _orbit_partition(args) -> Tuple[int, int]:
    sys, first = args
    q, r = sys.ctx.q, sys.r
    affine = distinct = 0
    for tail in itertools.combinations_with_replacement(range(first, q), r - 1):
        point = (first,) + tail
        if any(system_eval(sys, point)):
            continue
        weight = orbit_weight(point)
        affine += weight
        if weight == math.factorial(r):
            distinct += weight
    return affine, distinct


def _direct_partition(args) -> Tuple[int, int]:
    sys, first, pairs = args
    q, r = sys.ctx.q, sys.r
    affine = distinct = 0
    for rest in itertools.product(range(q), repeat=r - 1):
        point = (first,) + rest
        if any(system_eval(sys, point)):
            continue
        affine += 1
        if all(point[i - 1] != point[j - 1] for i, j in pairs):
            distinct += 1
    return affine, distinct


def _diagonal_partition(args) -> int:
    sys, first, i, j = args
    q, r = sys.ctx.q, sys.r
    count = 0
    for rest in itertools.product(range(q), repeat=r - 2):
        free = iter((first,) + rest)
        point = []
        for k in range(1, r + 1):
            point.append(point[i - 1] if k == j else next(free))
        if not any(system_eval(sys, point)):
            count += 1
    return count


# --- COUNTING ---

def all_pairs(r: int) -> List[Pair]:
    return [(i, j) for i in range(1, r + 1) for j in range(i + 1, r + 1)]


def normalize_pairs(r: int, ineq: Optional[Iterable[Pair]]) -> List[Pair]:
    """Sorted 1-based pairs i < j; None means every pair."""
    if ineq is None:
        return all_pairs(r)
    pairs: Set[Pair] = set()
    for i, j in ineq:
        i, j = min(i, j), max(i, j)
        if not 1 <= i < j <= r:
            raise ValueError(f"inequality pair ({i}, {j}) outside 1..{r}")
        pairs.add((i, j))
    return sorted(pairs)


def count_points_direct(sys: SymSystem, ineq: Optional[Iterable[Pair]] = None,
                        workers: int = 1) -> CountReport:
    """Naive scan of all q^r points."""
    q, r = sys.ctx.q, sys.r
    pairs = normalize_pairs(r, ineq)
    work = check_work(q ** r, f"direct scan of F_{q}^{r}")
    start = time.perf_counter()
    tallies = map_partitions(_direct_partition, [(sys, first, pairs) for first in range(q)], workers)
    return CountReport(
        q=q, r=r, m=sys.m, system_digest=sys.digest(), method='direct', ineq=pairs,
        affine_count=sum(t[0] for t in tallies), distinct_count=sum(t[1] for t in tallies),
        work=work, wall_time=time.perf_counter() - start,
    )


def count_points(sys: SymSystem, ineq: Optional[Iterable[Pair]] = None, workers: int = 1,
                 with_infinity: bool = False, with_diagonal: bool = False) -> CountReport:
    """
    Exact |V_r(F_q)| and |V_r^!=(F_q)|. The distinct count uses the pairs in
    ineq (None: all pairs). Orbit enumeration serves the empty and the full pair
    sets; any other set is scanned directly.
    """
    q, r = sys.ctx.q, sys.r
    pairs = normalize_pairs(r, ineq)
    if pairs and len(pairs) != r * (r - 1) // 2:
        report = count_points_direct(sys, pairs, workers)
    else:
        work = check_work(math.comb(q + r - 1, r), f"orbit scan of F_{q}^{r}")
        start = time.perf_counter()
        tallies = map_partitions(_orbit_partition, [(sys, first) for first in range(q)], workers)
        affine = sum(t[0] for t in tallies)
        distinct = sum(t[1] for t in tallies) if pairs else affine
        report = CountReport(
            q=q, r=r, m=sys.m, system_digest=sys.digest(), method='orbit', ineq=pairs,
            affine_count=affine, distinct_count=distinct, work=work,
            wall_time=time.perf_counter() - start,
        )
    if with_infinity:
        report.infinity_count = count_infinity(sys, workers)
    if with_diagonal and r >= 2:
        report.diagonal_count = count_diagonal(sys, 1, 2, workers)
    return report


def count_infinity(sys: SymSystem, workers: int = 1) -> int:
    """Projective points of {S^wt(Pi(x)) = 0}, i.e. the points at infinity of pcl(V_r)."""
    q, r = sys.ctx.q, sys.r
    leading = sys.leading_system()
    require_homogeneous(leading)
    check_work(math.comb(q + r - 1, r), f"cone scan of F_{q}^{r}")
    tallies = map_partitions(_orbit_partition, [(leading, first) for first in range(q)], workers)
    cone = sum(t[0] for t in tallies)
    if (cone - 1) % (q - 1):
        raise NonHomogeneousLeadingPart(f"cone count {cone} is not 1 mod {q - 1}")
    return (cone - 1) // (q - 1)


def count_diagonal(sys: SymSystem, i: int = 1, j: int = 2, workers: int = 1) -> int:
    """|V_r(F_q) with X_i = X_j|."""
    q, r = sys.ctx.q, sys.r
    i, j = min(i, j), max(i, j)
    if not 1 <= i < j <= r:
        raise ValueError(f"diagonal ({i}, {j}) outside 1..{r}")
    check_work(q ** (r - 1), f"diagonal scan of F_{q}^{r}")
    return sum(map_partitions(_diagonal_partition, [(sys, first, i, j) for first in range(q)], workers))


# --- VERIFICATION ---

def verify_estimate(report: CountReport, sys: SymSystem) -> List[BoundCheck]:
    """Bound checks for the affine, distinct-coordinate and (when counted) projective counts."""
    if report.system_digest != sys.digest() or report.r != sys.r or report.q != sys.ctx.q:
        raise ReportMismatch(
            f"report for system {report.system_digest} (q={report.q}, r={report.r}) "
            f"paired with {sys.digest()} (q={sys.ctx.q}, r={sys.r})"
        )
    q, r, m = report.q, report.r, report.m
    D, delta = sys.D, sys.delta
    ok = sys.within_standing_assumption
    note = '' if ok else 'standing assumption m <= s <= r-m-2 not met'
    common = dict(D=D, delta=delta, hypotheses_met=ok, note=note)

    checks = [
        make_check('affine', report.affine_count, q ** (r - m), affine_bound(D, delta, q, r, m),
                   0, q ** r, **common),
        make_check('distinct', report.distinct_count, q ** (r - m),
                   distinct_bound(D, delta, q, r, m, len(report.ineq)), 0, q ** r, **common),
    ]
    if report.infinity_count is not None:
        checks.append(make_check(
            'at_infinity', report.infinity_count, projective_size(q, r - m - 1),
            infinity_bound(D, delta, q, r, m), 0, projective_size(q, r - 1), **common))
        checks.append(make_check(
            'projective_closure', report.affine_count + report.infinity_count,
            projective_size(q, r - m), closure_bound(D, delta, q, r, m),
            0, projective_size(q, r), **common))
    if report.diagonal_count is not None:
        checks.append(make_check(
            'diagonal', report.diagonal_count, 0, diagonal_bound(delta, q, r, m),
            0, q ** (r - 1), one_sided=True, **common))
    return checks
