"""
Average value sets of families with prescribed top coefficients.

For a window a = (a_{n-1}, ..., a_{n-s}) the family A(n, s, a) holds every monic
f = T^n + a_{n-1}T^{n-1} + ... + a_{n-s}T^{n-s} + b_{n-s-1}T^{n-s-1} + ... + b_0.
Its average value-set size is computed two ways: by direct enumeration, and
through the number chi(a, r) of r-subsets of F_q on which f_a can be completed
to a vanishing polynomial. chi itself is computed by a subset scan and by
counting points of the symmetric system R_j^a built from the H-table.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from mpmath import iv, libmp
from mpmath.ctx_mp import PrecisionManager

from algebra.algebra.ff import FieldCtx
from algebra.algebra.symsys import MPoly, SymSystem, elem_sym_eval
from algebra.algebra.upoly import UPoly, poly_add, poly_eval, poly_mul, poly_rem
from shared.shared.config import check_work
from shared.shared.errors import (
    DimensionMismatch,
    HypothesisRangeViolation,
    NonDivisibleCount,
)

from .census import BoundCheck, count_points, decimal_ratio, make_check

INTERVAL_DPS = 40
# Enclosures run at INTERVAL_DPS; the caller's iv precision is restored on return.
interval_precision = PrecisionManager(iv, None, lambda _: INTERVAL_DPS)

CHUNK_ROWS = 1 << 16


@dataclass(frozen=True)
class CoeffWindow:
    """a = (a_{n-1}, ..., a_{n-s}); s = 0 is the whole monic family."""
    ctx: FieldCtx
    n: int
    s: int
    a: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'a', tuple(self.a))
        if self.n < 2:
            raise HypothesisRangeViolation(f"degree must be >= 2, got {self.n}")
        if not 0 <= self.s <= self.n - 2:
            raise HypothesisRangeViolation(f"window length must satisfy 0 <= s <= n-2, got s={self.s}, n={self.n}")
        if len(self.a) != self.s:
            raise DimensionMismatch(f"window has {len(self.a)} entries, expected {self.s}")
        if any(not 0 <= c < self.ctx.q for c in self.a):
            raise DimensionMismatch(f"window entries must be field codes of {self.ctx}")

    @property
    def q(self) -> int:
        return self.ctx.q

    def coefficient(self, j: int) -> int:
        """a_j with a_n = 1 and a_j = 0 below the window."""
        if j == self.n:
            return 1
        if self.n - self.s <= j < self.n:
            return self.a[self.n - 1 - j]
        return 0

    def f_a(self) -> UPoly:
        return UPoly(self.ctx, tuple(self.coefficient(j) for j in range(self.n + 1)))

    def completion(self, b: Sequence[int]) -> UPoly:
        """f_b: f_a plus b_0 + b_1 T + ... + b_{n-s-1} T^(n-s-1)."""
        return poly_add(self.f_a(), UPoly(self.ctx, tuple(b)))

    def describe(self) -> Dict:
        return {'q': self.q, 'n': self.n, 's': self.s, 'a': list(self.a)}


def value_set_cardinality(f: UPoly) -> int:
    """|{f(c) : c in F_q}|."""
    return len({poly_eval(f, c) for c in f.ctx.elements()})


# --- DIRECT AVERAGE ---

def _prime_field_value_counts(win: CoeffWindow) -> int:
    """Sum of V(f_b) over all completions, vectorised over b for prime fields."""
    p, n, free = win.q, win.n, win.n - win.s
    c = np.arange(p, dtype=np.int64)
    powers = np.ones((n + 1, p), dtype=np.int64)
    for k in range(1, n + 1):
        powers[k] = (powers[k - 1] * c) % p
    base = np.zeros(p, dtype=np.int64)
    for j in range(free, n + 1):
        base = (base + win.coefficient(j) * powers[j]) % p
    low = powers[:free]
    place = p ** np.arange(free, dtype=np.int64)

    total = 0
    n_rows = p ** free
    for start in range(0, n_rows, CHUNK_ROWS):
        idx = np.arange(start, min(start + CHUNK_ROWS, n_rows), dtype=np.int64)
        b = (idx[:, None] // place[None, :]) % p
        values = (base[None, :] + b @ low) % p
        ordered = np.sort(values, axis=1)
        total += int((1 + np.count_nonzero(np.diff(ordered, axis=1), axis=1)).sum())
    return total


def average_value_set_direct(win: CoeffWindow) -> Fraction:
    """Exact mean of V(f_b) over the q^(n-s) completions b."""
    q, free = win.q, win.n - win.s
    check_work(q ** (free + 1) * win.n, f"value sets of {q ** free} polynomials")
    if win.ctx.k == 1:
        total = _prime_field_value_counts(win)
    else:
        total = 0
        for b in itertools.product(win.ctx.elements(), repeat=free):
            total += value_set_cardinality(win.completion(b))
    return Fraction(total, q ** free)


def translate_window(win: CoeffWindow, c: int) -> CoeffWindow:
    """Window of the translated family {f(T + c) : f in A(n, s, a)}."""
    ctx = win.ctx
    shift = UPoly(ctx, (c, 1))
    g = UPoly(ctx, ())
    for coeff in reversed(win.f_a().coeffs):
        g = poly_add(poly_mul(g, shift), UPoly(ctx, (coeff,)))
    return CoeffWindow(ctx, win.n, win.s, tuple(g.coeff(j) for j in range(win.n - 1, win.n - win.s - 1, -1)))


# --- CLOSED FORMS ---

def mu(n: int) -> Fraction:
    """sum_{r=1}^n (-1)^(r-1)/r!."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return sum((Fraction((-1) ** (r - 1), math.factorial(r)) for r in range(1, n + 1)), Fraction(0))


def head_sum(q: int, k: int) -> Fraction:
    """sum_{r=1}^k (-1)^(r-1) C(q, r) q^(1-r)."""
    return sum((Fraction((-1) ** (r - 1) * math.comb(q, r), q ** (r - 1)) for r in range(1, k + 1)),
               Fraction(0))


def cohen_average(q: int, n: int) -> Fraction:
    """Average value-set size of all monic degree-n polynomials over F_q."""
    return head_sum(q, n)


# --- H-TABLE AND R_j SYSTEMS ---

def build_H_table(ctx: FieldCtx, r: int, n: int) -> Dict[Tuple[int, int], MPoly]:
    """
    H[(i, j)] for r <= j <= n, 0 <= i <= r-1, with
    T^j = sum_i H[(i, j)](Pi) T^i mod prod_{k<=r} (T - X_k); variable Y_k stands for Pi_k.
    """
    if not 1 <= r <= n:
        raise HypothesisRangeViolation(f"H-table needs 1 <= r <= n, got r={r}, n={n}")
    pi = [None] + [MPoly.variable(ctx, r, k) for k in range(1, r + 1)]

    def signed(t: int, poly: MPoly) -> MPoly:
        return poly if t % 2 == 0 else -poly

    H: Dict[Tuple[int, int], MPoly] = {}
    for t in range(r):
        H[(r - 1 - t, r)] = signed(t, pi[t + 1])
    for j in range(r, n):
        top = H[(r - 1, j)]
        H[(0, j + 1)] = signed(r - 1, pi[r] * top)
        for k in range(1, r):
            H[(k, j + 1)] = signed(r - 1 - k, pi[r - k] * top) + H[(k - 1, j)]
    return H


def h_table_check(ctx: FieldCtx, table: Dict[Tuple[int, int], MPoly], x: Sequence[int], n: int) -> bool:
    """sum_i H[(i, j)](Pi(x)) T^i equals T^j mod prod (T - x_k) for every r <= j <= n."""
    r = len(x)
    pis = elem_sym_eval(ctx, x, r)
    modulus = UPoly.from_roots(ctx, x)
    for j in range(r, n + 1):
        expected = poly_rem(UPoly.monomial(ctx, j), modulus)
        got = UPoly(ctx, tuple(table[(i, j)].evaluate(pis) for i in range(r)))
        if got != expected:
            return False
    return True


def build_Rj_system(win: CoeffWindow, r: int) -> SymSystem:
    """
    {R_j^a : n-s <= j <= r-1} with R_j^a = a_j + sum_{i=r}^n a_i H[(j, i)], as a
    non-strict SymSystem in Y_1..Y_min(s, r).
    """
    n, s = win.n, win.s
    if s < 1 or not n - s + 1 <= r <= n:
        raise HypothesisRangeViolation(f"R_j systems need s >= 1 and {n - s + 1} <= r <= {n}, got s={s}, r={r}")
    ctx = win.ctx
    table = build_H_table(ctx, r, n)
    inner = min(s, r)
    polys = []
    for j in range(n - s, r):
        R = MPoly.constant(ctx, r, win.coefficient(j))
        for i in range(r, n + 1):
            if win.coefficient(i):
                R = R + table[(j, i)].scale(win.coefficient(i))
        terms = {}
        for exps, c in R.terms:
            if any(exps[inner:]):
                raise DimensionMismatch(f"R_{j} involves Pi_k with k > {inner}")
            terms[exps[:inner]] = c
        polys.append(MPoly.from_dict(ctx, inner, terms))
    return SymSystem(tuple(polys), r, strict=False)


# --- INTERPOLATING SETS ---

def _chi_subsets(win: CoeffWindow, r: int) -> int:
    ctx, limit = win.ctx, win.n - win.s - 1
    f = win.f_a()
    check_work(math.comb(win.q, r) * win.n, f"{r}-subsets of F_{win.q}")
    count = 0
    for subset in itertools.combinations(ctx.elements(), r):
        if poly_rem(f, UPoly.from_roots(ctx, subset)).degree <= limit:
            count += 1
    return count


def chi(win: CoeffWindow, r: int, method: str = 'subsets', workers: int = 1) -> int:
    """Number of r-subsets X of F_q with deg(f_a mod prod_{x in X}(T - x)) <= n-s-1."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if method == 'subsets':
        return _chi_subsets(win, r)
    if method == 'pointcount':
        report = count_points(build_Rj_system(win, r), None, workers)
        if report.distinct_count % math.factorial(r):
            raise NonDivisibleCount(f"{report.distinct_count} distinct points is not divisible by {r}!")
        return report.distinct_count // math.factorial(r)
    raise ValueError(f"unknown chi method {method!r}")


def chi_range(win: CoeffWindow) -> range:
    return range(win.n - win.s + 1, win.n + 1)


def average_value_set_via_chi(win: CoeffWindow, method: str = 'subsets', workers: int = 1,
                              chis: Optional[Dict[int, int]] = None) -> Fraction:
    """Binomial head plus alternating chi tail."""
    q, n, s = win.q, win.n, win.s
    chis = chis if chis is not None else {r: chi(win, r, method, workers) for r in chi_range(win)}
    tail = sum((Fraction((-1) ** (r - 1) * chis[r]) for r in chi_range(win)), Fraction(0))
    return head_sum(q, n - s) + tail / Fraction(q) ** (n - s - 1)


# --- BOUNDS ---

@interval_precision
def _iv(x: Fraction):
    x = Fraction(x)
    return iv.mpf(x.numerator) / x.denominator


def _endpoints(x) -> Tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return Fraction(*libmp.to_rational(lo)), Fraction(*libmp.to_rational(hi))


@interval_precision
def half_inverse_e():
    return 1 / (2 * iv.e)


@interval_precision
def final_envelope(n: int):
    """(n-2)^5 e^(2 sqrt n) / 2^(n-2) as an interval."""
    return iv.mpf((n - 2) ** 5) * iv.exp(2 * iv.sqrt(n)) / iv.mpf(2) ** (n - 2)


def chi_constants(n: int, s: int, r: int) -> Tuple[int, int]:
    """(D_r, delta_r) for the R_j system in r variables."""
    D = sum(j - 1 for j in range(n - r + 1, s + 1))
    delta = math.factorial(s) // math.factorial(n - r)
    return D, delta


def chi_bound(q: int, n: int, s: int, r: int) -> Fraction:
    D, delta = chi_constants(n, s, r)
    fact = math.factorial(r)
    return (Fraction(r * (r - 1), 2 * fact) * delta * Fraction(q) ** (n - s - 1)
            + Fraction(14, fact) * D ** 3 * delta ** 2 * (q + 1) * Fraction(q) ** (n - s - 2))


def summed_chi_bound(q: int, n: int, s: int) -> Fraction:
    total = Fraction(1, 2 * math.factorial(n - s - 1)) + Fraction(7, q)
    for r in range(n - s + 1, n + 1):
        D, delta = chi_constants(n, s, r)
        fact = math.factorial(r)
        total += Fraction(r * (r - 1), 2 * fact) * delta
        total += Fraction(14, fact) * D ** 3 * delta ** 2 * (1 + Fraction(1, q))
    return total


@interval_precision
def _interval_check(name: str, observed: Fraction, main_iv, bound_iv, low=None, high=None,
                    note: str = '') -> BoundCheck:
    """Passes only when the upper end of |observed - main| is below the lower end of the bound."""
    _, deviation = _endpoints(abs(_iv(observed) - main_iv))
    bound, _ = _endpoints(bound_iv)
    main_lo, main_hi = _endpoints(main_iv)
    vacuous = False
    if low is not None and high is not None:
        vacuous = bound >= max(main_hi - Fraction(low), Fraction(high) - main_lo)
    return BoundCheck(
        name=name, D=0, delta=1, main_term=main_lo, bound=bound, observed=Fraction(observed),
        observed_deviation=deviation, passed=deviation <= bound, slack=decimal_ratio(deviation, bound),
        vacuous=vacuous, hypotheses_met=True,
        note=(note + '; ' if note else '') + f'transcendental terms enclosed at {INTERVAL_DPS} digits',
    )


@interval_precision
def verify_value_set_bounds(win: CoeffWindow, chis: Optional[Dict[int, int]] = None,
                            average: Optional[Fraction] = None) -> List[BoundCheck]:
    """Per-r chi estimates, the head-term estimate, and the two estimates for the average."""
    q, n, s = win.q, win.n, win.s
    if s < 1 or 2 * (s + 1) > n:
        raise HypothesisRangeViolation(f"value-set estimates need 1 <= s and 2(s+1) <= n, got s={s}, n={n}")
    chis = chis if chis is not None else {r: chi(win, r) for r in chi_range(win)}
    average = average if average is not None else average_value_set_direct(win)

    checks = []
    for r in chi_range(win):
        D, delta = chi_constants(n, s, r)
        checks.append(make_check(f'chi[r={r}]', chis[r], Fraction(q ** (n - s), math.factorial(r)),
                                 chi_bound(q, n, s, r), 0, math.comb(q, r), D=D, delta=delta))

    head = sum((Fraction((-1) ** (r - 1)) * (Fraction(math.comb(q, r), q ** (r - 1)) - Fraction(q, math.factorial(r)))
                for r in range(1, n - s + 1)), Fraction(0))
    checks.append(_interval_check('head_term', head, half_inverse_e(),
                                  _iv(Fraction(1, 2 * math.factorial(n - s - 1)) + Fraction(7, q))))

    main = _iv(mu(n) * q) + half_inverse_e()
    checks.append(_interval_check('average_summed', average, main, _iv(summed_chi_bound(q, n, s)), 1, q))
    checks.append(_interval_check('average_final', average, main, final_envelope(n) + _iv(Fraction(7, q)), 1, q))
    return checks
