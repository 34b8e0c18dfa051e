"""
Factorization patterns of linear families of polynomials.

A linear family A(L, alpha) is the set of monic f = T^n + a_{n-1}T^{n-1} + ... + a_0
over a prime field whose top coefficient window (a_{n-s}, ..., a_{n-1}) satisfies
L (a_{n-s}, ..., a_{n-1})^T + alpha = 0. This module counts members per
factorization pattern, checks the counts against the explicit estimates, and
cross-checks them through the root encoding G(x, T), which builds a monic
polynomial from n base-field coordinates using normal bases of F_{q^i}.
"""

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from algebra.algebra.ff import (
    FieldCtx,
    build_field,
    embed,
    find_normal_element,
    matrix_rank,
    rref_mod_p,
)
from algebra.algebra.symsys import elem_sym_eval
from algebra.algebra.upoly import (
    FactPattern,
    UPoly,
    factorization_pattern,
    is_squarefree,
    poly_mul,
)
from shared.shared.config import check_work, get_field_ceiling
from shared.shared.errors import (
    CoefficientNotRational,
    DegenerateFamily,
    FieldMismatch,
    HypothesisRangeViolation,
    InconsistentSystem,
    InvalidPattern,
    NotFound,
)
from shared.shared.workers import map_partitions

from .census import BoundCheck, make_check


# --- PATTERN COMBINATORICS ---

def pattern_constants(pattern: FactPattern) -> Tuple[int, Fraction]:
    """w = prod i^l_i l_i! and T = 1/w, the share of S_n with that cycle type."""
    if sum((i + 1) * c for i, c in enumerate(pattern.counts)) != pattern.n:
        raise InvalidPattern(f"{pattern} does not sum to {pattern.n}")
    w = 1
    for i, c in enumerate(pattern.counts, start=1):
        w *= i ** c * math.factorial(c)
    return w, Fraction(1, w)


def _partitions(n: int, largest: int):
    if n == 0:
        yield []
        return
    for part in range(min(n, largest), 0, -1):
        for rest in _partitions(n - part, part):
            yield [part] + rest


@lru_cache(maxsize=None)
def _patterns(n: int) -> Tuple[FactPattern, ...]:
    parts = sorted(_partitions(n, n))
    patterns = tuple(FactPattern.from_parts(p) for p in parts)
    total = sum(pattern_constants(p)[1] for p in patterns)
    assert total == 1, f"pattern proportions for n={n} sum to {total}"
    return patterns


def enumerate_patterns(n: int) -> List[FactPattern]:
    """All patterns of degree n: 1^n first, n^1 last."""
    if n < 1:
        raise InvalidPattern(f"degree must be >= 1, got {n}")
    return list(_patterns(n))


# --- LINEAR FAMILIES ---

@dataclass(frozen=True)
class LinearFamily:
    """
    Rows are stored reduced, ordered by increasing pivot index i_j; column t of
    L multiplies a_{n-s+t}, so a pivot in column t has index i = s - t.
    """
    ctx: FieldCtx
    n: int
    s: int
    L: Tuple[Tuple[int, ...], ...]
    alpha: Tuple[int, ...]
    pivots: Tuple[int, ...]
    prescribed: bool = False

    @classmethod
    def from_rows(cls, ctx: FieldCtx, n: int, rows: Sequence[Sequence[int]],
                  alpha: Sequence[int], prescribed: bool = False) -> 'LinearFamily':
        if ctx.k != 1:
            raise FieldMismatch("linear families are defined over a prime field")
        q = ctx.q
        if q <= n:
            raise HypothesisRangeViolation(f"pattern estimates need q > n, got q={q}, n={n}")
        if not rows:
            raise DegenerateFamily("a family needs at least one constraint")
        s = len(rows[0])
        if any(len(row) != s for row in rows) or len(alpha) != len(rows):
            raise DegenerateFamily("constraint rows have inconsistent lengths")
        if not 1 <= s <= n:
            raise DegenerateFamily(f"window length s={s} outside 1..{n}")

        augmented = [list(row) + [a] for row, a in zip(rows, alpha)]
        reduced, pivot_cols = rref_mod_p(augmented, q, ncols=s)
        rank = len(pivot_cols)
        for extra in reduced[rank:]:
            if int(extra[s]) % q:
                raise InconsistentSystem("constraints have no common solution")
            raise DegenerateFamily("constraint rows are linearly dependent")

        order = sorted(range(rank), key=lambda idx: s - pivot_cols[idx])
        L = tuple(tuple(int(v) for v in reduced[idx][:s]) for idx in order)
        a = tuple(int(reduced[idx][s]) for idx in order)
        pivots = tuple(s - pivot_cols[idx] for idx in order)
        return cls(ctx=ctx, n=n, s=s, L=L, alpha=a, pivots=pivots, prescribed=prescribed)

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def m(self) -> int:
        return len(self.L)

    @property
    def D_L(self) -> int:
        return sum(i - 1 for i in self.pivots)

    @property
    def delta_L(self) -> int:
        return math.prod(self.pivots)

    @property
    def within_standing_assumption(self) -> bool:
        if self.prescribed:
            return self.pivots[-1] <= self.n - self.m - 2
        return self.m <= self.s <= self.n - self.m - 2

    def pivot_columns(self) -> List[int]:
        return [self.s - i for i in self.pivots]

    def free_indices(self) -> List[int]:
        """Coefficient indices k (of a_k) that range freely over F_q."""
        pivot_coeffs = {self.n - self.s + c for c in self.pivot_columns()}
        return [k for k in range(self.n) if k not in pivot_coeffs]

    def member(self, free_values: Sequence[int]) -> UPoly:
        """The member whose free coefficients take the given values."""
        ctx, n, s = self.ctx, self.n, self.s
        coeffs = [0] * n + [1]
        for k, v in zip(self.free_indices(), free_values):
            coeffs[k] = v
        for row, a, col in zip(self.L, self.alpha, self.pivot_columns()):
            value = ctx.neg(a)
            for t, c in enumerate(row):
                if t != col and c:
                    value = ctx.sub(value, ctx.mul(c, coeffs[n - s + t]))
            coeffs[n - s + col] = value
        return UPoly(ctx, tuple(coeffs))

    def contains(self, f: UPoly) -> bool:
        if f.degree != self.n or not f.is_monic():
            return False
        ctx, window = self.ctx, [f.coeff(self.n - self.s + t) for t in range(self.s)]
        for row, a in zip(self.L, self.alpha):
            acc = a
            for c, v in zip(row, window):
                acc = ctx.add(acc, ctx.mul(c, v))
            if acc:
                return False
        return True

    def describe(self) -> Dict:
        return {'n': self.n, 's': self.s, 'm': self.m, 'L': [list(r) for r in self.L],
                'alpha': list(self.alpha), 'pivots': list(self.pivots), 'prescribed': self.prescribed}


def parse_family(text: str, ctx: FieldCtx, n: int) -> LinearFamily:
    """One constraint per line, 'c_1 ... c_s | alpha'; '#' starts a comment."""
    rows, alpha = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        left, bar, right = line.partition('|')
        try:
            if not bar:
                raise ValueError("missing '|'")
            rows.append([int(c) % ctx.p for c in left.split()])
            alpha.append(int(right.strip()) % ctx.p)
        except ValueError as e:
            raise DegenerateFamily(f"family line {lineno}: {e}")
    return LinearFamily.from_rows(ctx, n, rows, alpha)


def prescribed_family(ctx: FieldCtx, n: int, values: Dict[int, int]) -> LinearFamily:
    """
    {T^n + a_1 T^(n-1) + ... + a_n : a_i = values[i]}, positions i counted from
    the top (a_i is the coefficient of T^(n-i)).
    """
    if not values:
        raise DegenerateFamily("no prescribed coefficients")
    positions = sorted(values)
    if positions[0] < 1 or positions[-1] > n:
        raise DegenerateFamily(f"prescribed positions must lie in 1..{n}")
    s = positions[-1]
    rows, alpha = [], []
    for i in positions:
        row = [0] * s
        row[s - i] = 1
        rows.append(row)
        alpha.append(ctx.neg(values[i] % ctx.p))
    return LinearFamily.from_rows(ctx, n, rows, alpha, prescribed=True)


# --- CENSUS ---

@dataclass
class Census:
    q: int
    n: int
    m: int
    family: LinearFamily
    counts: Dict[FactPattern, Tuple[int, int]] = field(default_factory=dict)

    def total(self) -> int:
        return sum(t for t, _ in self.counts.values())

    def nonsquarefree(self, pattern: FactPattern) -> int:
        total, sq = self.counts.get(pattern, (0, 0))
        return total - sq

    def rows(self) -> List[Dict]:
        return [{'pattern': str(lam), 'total': t, 'squarefree': sq}
                for lam, (t, sq) in self.counts.items()]


def _census_partition(args) -> Dict[FactPattern, List[int]]:
    fam, first = args
    prefix = () if first is None else (first,)
    free = fam.free_indices()
    tally: Dict[FactPattern, List[int]] = {}
    for rest in itertools.product(range(fam.q), repeat=len(free) - len(prefix)):
        f = fam.member(prefix + rest)
        lam = factorization_pattern(f)
        entry = tally.setdefault(lam, [0, 0])
        entry[0] += 1
        if is_squarefree(f):
            entry[1] += 1
    return tally


def family_census(fam: LinearFamily, workers: int = 1) -> Census:
    """Members of the family tallied by factorization pattern and squarefreeness."""
    q, n, m = fam.q, fam.n, fam.m
    check_work(q ** (n - m) * n, f"census of a degree-{n} family over F_{q}")
    firsts = list(range(q)) if fam.free_indices() else [None]
    partials = map_partitions(_census_partition, [(fam, v) for v in firsts], workers)
    counts = {}
    for lam in enumerate_patterns(n):
        total = sum(part.get(lam, [0, 0])[0] for part in partials)
        sq = sum(part.get(lam, [0, 0])[1] for part in partials)
        counts[lam] = (total, sq)
    return Census(q=q, n=n, m=m, family=fam, counts=counts)


def verify_pattern_bounds(census: Census) -> List[BoundCheck]:
    """Per-pattern estimates for |A_lambda^sq| and |A_lambda|, plus the discriminant-locus bound."""
    fam = census.family
    q, n, m = census.q, census.n, census.m
    D, delta = fam.D_L, fam.delta_L
    ok = q > n and fam.within_standing_assumption
    if fam.prescribed:
        note = 'prescribed coefficients' + ('' if ok else '; needs q > n and i_m <= n-m-2')
    else:
        note = '' if ok else 'needs q > n and m <= s <= n-m-2'
    scale = Fraction(q) ** (n - m - 1)
    size = q ** (n - m)

    checks = []
    for lam in enumerate_patterns(n):
        _, T = pattern_constants(lam)
        total, sq = census.counts.get(lam, (0, 0))
        main = T * size
        sq_bound = scale * T * (21 * D ** 3 * delta ** 2 + n ** 2 * delta)
        all_bound = scale * (21 * T * D ** 3 * delta ** 2 + T * n ** 2 * delta + n ** 2)
        checks.append(make_check(f'squarefree[{lam}]', sq, main, sq_bound, 0, size,
                                 D=D, delta=delta, hypotheses_met=ok, note=note))
        checks.append(make_check(f'total[{lam}]', total, main, all_bound, 0, size,
                                 D=D, delta=delta, hypotheses_met=ok, note=note))

    nsq = sum(census.nonsquarefree(lam) for lam in census.counts)
    checks.append(make_check('discriminant_locus', nsq, 0, n * (n - 1) * scale, 0, size,
                             D=D, delta=delta, hypotheses_met=ok, note=note, one_sided=True))
    return checks


# --- ROOT ENCODING ---

@lru_cache(maxsize=None)
def _normal_data(q: int, i: int) -> Tuple[FieldCtx, int, Tuple[Tuple[int, ...], ...]]:
    """(F_{q^i}, normal element, A_i) with A_i[g][h] = theta^(q^(g+h))."""
    ext = build_field(q, i)
    theta = find_normal_element(ext).code
    A = tuple(tuple(ext.frob(theta, g + h) for h in range(i)) for g in range(i))
    if matrix_rank(ext, A) != i:
        raise NotFound(f"conjugate matrix of the normal element of {ext} is singular")
    return ext, theta, A


@dataclass(frozen=True)
class RootEncoding:
    q: int
    n: int
    pattern: FactPattern
    blocks: Tuple[Tuple[int, int, int], ...]
    fields: Dict[int, FieldCtx]
    thetas: Dict[int, int]
    matrices: Dict[int, Tuple[Tuple[int, ...], ...]]

    @property
    def base(self) -> FieldCtx:
        return build_field(self.q, 1)


def block_offsets(pattern: FactPattern) -> List[Tuple[int, int, int]]:
    """(i, j, l_ij) with l_ij = sum_{k<i} k*lambda_k + (j-1)*i; j is 1-based."""
    out = []
    start = 0
    for i, c in enumerate(pattern.counts, start=1):
        for j in range(1, c + 1):
            out.append((i, j, start + (j - 1) * i))
        start += i * c
    return out


def build_root_encoding(q: int, n: int, pattern: FactPattern) -> RootEncoding:
    if pattern.n != n:
        raise InvalidPattern(f"{pattern} is not a pattern of degree {n}")
    if q <= n:
        raise HypothesisRangeViolation(f"root encoding needs q > n, got q={q}, n={n}")
    fields, thetas, matrices = {}, {}, {}
    for i, c in enumerate(pattern.counts, start=1):
        if c:
            fields[i], thetas[i], matrices[i] = _normal_data(q, i)
    return RootEncoding(q=q, n=n, pattern=pattern, blocks=tuple(block_offsets(pattern)),
                        fields=fields, thetas=thetas, matrices=matrices)


def _block_roots(enc: RootEncoding, i: int, sub: Sequence[int]) -> List[int]:
    """Y values of one block: the conjugates of sum_h sub[h] theta^(q^h)."""
    ext, A = enc.fields[i], enc.matrices[i]
    return [ext.sum(ext.mul(a, v) for a, v in zip(row, sub)) for row in A]


def linear_forms_Y(enc: RootEncoding, x: Sequence[int]) -> List[Tuple[int, int]]:
    """(i, Y_k) for k = 1..n; Y_k lives in F_{q^i} for its block degree i."""
    out = []
    for i, _, start in enc.blocks:
        out.extend((i, y) for y in _block_roots(enc, i, x[start:start + i]))
    return out


def evaluate_G(enc: RootEncoding, x: Sequence[int]) -> UPoly:
    """G(x, T) = prod over blocks of prod_h (T - alpha^(q^h)), as a polynomial over F_q."""
    if len(x) != enc.n:
        raise ValueError(f"expected {enc.n} coordinates, got {len(x)}")
    base = enc.base
    f = UPoly(base, (1,))
    for i, _, start in enc.blocks:
        ext = enc.fields[i]
        g = UPoly.from_roots(ext, _block_roots(enc, i, x[start:start + i]))
        if any(c >= enc.q for c in g.coeffs):
            raise CoefficientNotRational(f"block factor {g} over {ext} is not defined over F_{enc.q}")
        f = poly_mul(f, UPoly(base, g.coeffs))
    return f


def _cyclic_shifts(sub: Sequence[int]) -> set:
    sub = tuple(sub)
    return {sub[h:] + sub[:h] for h in range(len(sub))}


def is_type_lambda(enc: RootEncoding, x: Sequence[int]) -> bool:
    """Every block of length i has i distinct cyclic shifts."""
    return all(len(_cyclic_shifts(x[start:start + i])) == i for i, _, start in enc.blocks)


def blocks_pairwise_distinct(enc: RootEncoding, x: Sequence[int]) -> bool:
    """No two blocks of the same degree encode conjugate roots."""
    seen: Dict[int, List[set]] = {}
    for i, _, start in enc.blocks:
        sub = tuple(x[start:start + i])
        for orbit in seen.get(i, []):
            if sub in orbit:
                return False
        seen.setdefault(i, []).append(_cyclic_shifts(sub))
    return True


def common_field_degree(enc: RootEncoding) -> int:
    """L = lcm of the block degrees; F_{q^L} holds every Y_k."""
    return math.lcm(*enc.fields.keys())


def coefficient_identity_supported(enc: RootEncoding) -> bool:
    return enc.q ** common_field_degree(enc) <= get_field_ceiling()


@lru_cache(maxsize=None)
def _common_embedding(q: int, degrees: Tuple[int, ...]) -> Tuple[FieldCtx, Dict[int, Tuple[int, ...]]]:
    big = build_field(q, math.lcm(*degrees))
    return big, {i: embed(build_field(q, i), big) for i in degrees}


def coefficient_identity_check(enc: RootEncoding, x: Sequence[int]) -> bool:
    """
    Coefficient of T^k in G(x, T) equals (-1)^(n-k) Pi_{n-k}(Y(x)), with Pi
    computed over one common extension containing every Y_k. Raises
    FieldTooLarge when F_{q^L} exceeds the field ceiling.
    """
    big, tables = _common_embedding(enc.q, tuple(sorted(enc.fields)))
    ys = [tables[i][y] for i, y in linear_forms_Y(enc, x)]
    pis = elem_sym_eval(big, ys, enc.n)
    f = evaluate_G(enc, x)
    minus_one = big.neg(1)
    for k in range(enc.n):
        expected = big.mul(big.pow(minus_one, enc.n - k), pis[enc.n - k - 1])
        if f.coeff(k) != expected:
            return False
    return True


@dataclass
class CorrespondenceReport:
    pattern: str
    w: int
    type_count: int
    member_vectors: int
    squarefree_members: int
    expected_squarefree: int
    cross_block_count: int
    expected_cross_block: int
    preimage_mismatches: List[Tuple[str, int]]
    identity_checked: int
    identity_failures: int
    passed: bool
    note: str = ''


def _correspondence_partition(args):
    fam, enc, first, with_identity = args
    preimages: Counter = Counter()
    type_count = cross = checked = failures = 0
    for rest in itertools.product(range(fam.q), repeat=fam.n - 1):
        x = (first,) + rest
        if not is_type_lambda(enc, x):
            continue
        type_count += 1
        f = evaluate_G(enc, x)
        if not fam.contains(f):
            continue
        preimages[f.coeffs] += 1
        if blocks_pairwise_distinct(enc, x):
            cross += 1
        if with_identity:
            checked += 1
            failures += not coefficient_identity_check(enc, x)
    return preimages, type_count, cross, checked, failures


def correspondence_check(fam: LinearFamily, pattern: FactPattern,
                         census: Optional[Census] = None, workers: int = 1) -> CorrespondenceReport:
    """
    Scan F_q^n: every squarefree member with this pattern must have exactly w
    preimages among type-lambda vectors, and the type-lambda member vectors with
    pairwise non-conjugate blocks must number w * |A_lambda^sq|.
    """
    q, n = fam.q, fam.n
    enc = build_root_encoding(q, n, pattern)
    check_work(q ** n * n, f"correspondence scan of F_{q}^{n}")
    census = census or family_census(fam, workers)
    w, _ = pattern_constants(pattern)
    expected_sq = census.counts.get(pattern, (0, 0))[1]

    with_identity = coefficient_identity_supported(enc)
    note = '' if with_identity else (
        f"coefficient identity skipped: F_{q}^{common_field_degree(enc)} exceeds the field ceiling")
    partials = map_partitions(_correspondence_partition, [(fam, enc, v, with_identity) for v in range(q)], workers)
    preimages: Counter = Counter()
    type_count = cross = checked = failures = 0
    for part, tc, cb, ck, fl in partials:
        preimages.update(part)
        type_count += tc
        cross += cb
        checked += ck
        failures += fl

    mismatches = []
    squarefree_hit = 0
    for coeffs in sorted(preimages):
        f = UPoly(fam.ctx, coeffs)
        if not is_squarefree(f):
            continue
        squarefree_hit += 1
        if preimages[coeffs] != w or factorization_pattern(f) != pattern:
            mismatches.append((str(f), preimages[coeffs]))

    return CorrespondenceReport(
        pattern=str(pattern),
        w=w,
        type_count=type_count,
        member_vectors=sum(preimages.values()),
        squarefree_members=squarefree_hit,
        expected_squarefree=expected_sq,
        cross_block_count=cross,
        expected_cross_block=w * expected_sq,
        preimage_mismatches=mismatches,
        identity_checked=checked,
        identity_failures=failures,
        passed=(not mismatches and not failures and squarefree_hit == expected_sq
                and cross == w * expected_sq),
        note=note,
    )
