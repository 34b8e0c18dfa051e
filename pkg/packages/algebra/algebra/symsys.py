"""
Symmetric polynomial systems.

S_1..S_m are sparse polynomials in Y_1..Y_s, graded by wt(Y_j) = j. A SymSystem
composes them with the elementary symmetric polynomials Pi_1..Pi_s of
X_1..X_r: R_i = S_i(Pi_1, ..., Pi_s). The R_i are never expanded in the X
variables; every point computation goes through elem_sym_eval.
"""

import hashlib
import itertools
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from shared.shared.config import check_work, get_max_extension
from shared.shared.errors import (
    DimensionMismatch,
    FieldMismatch,
    InsufficientScalars,
    NonHomogeneousLeadingPart,
    StandingAssumptionViolation,
    ZeroPolynomial,
)

from .ff import FieldCtx, build_field, mat_mul, matrix_det, matrix_rank

Exps = Tuple[int, ...]


def grevlex_key(exps: Exps) -> Tuple:
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _coeff_code(ctx: FieldCtx, c: int) -> int:
    """Integers map through the prime subfield; extension codes must already be canonical."""
    if ctx.k == 1 or c < 0:
        return ctx.from_int(c)
    if c < ctx.q:
        return c
    raise ValueError(f"coefficient code {c} outside {ctx}")


@dataclass(frozen=True)
class MPoly:
    """Sparse polynomial over ctx in Y_1..Y_s; terms sorted by descending grevlex."""
    ctx: FieldCtx
    s: int
    terms: Tuple[Tuple[Exps, int], ...] = ()

    @classmethod
    def from_dict(cls, ctx: FieldCtx, s: int, terms: Dict[Exps, int]) -> 'MPoly':
        clean = []
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) != s:
                raise DimensionMismatch(f"exponent vector {exps} has length != {s}")
            value = _coeff_code(ctx, c)
            if value:
                clean.append((exps, value))
        clean.sort(key=lambda term: grevlex_key(term[0]), reverse=True)
        return cls(ctx, s, tuple(clean))

    @classmethod
    def variable(cls, ctx: FieldCtx, s: int, j: int) -> 'MPoly':
        """Y_j (1-based)."""
        exps = [0] * s
        exps[j - 1] = 1
        return cls.from_dict(ctx, s, {tuple(exps): 1})

    @classmethod
    def constant(cls, ctx: FieldCtx, s: int, c: int) -> 'MPoly':
        return cls.from_dict(ctx, s, {(0,) * s: c})

    def as_dict(self) -> Dict[Exps, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def lift(self, ctx: FieldCtx) -> 'MPoly':
        """Same polynomial read over an extension of a prime coefficient field."""
        if ctx == self.ctx:
            return self
        if self.ctx.k != 1 or ctx.p != self.ctx.p:
            raise FieldMismatch(f"cannot read a polynomial over {self.ctx} in {ctx}")
        return MPoly(ctx, self.s, self.terms)

    # --- grading ---

    @staticmethod
    def term_weight(exps: Exps) -> int:
        return sum((j + 1) * e for j, e in enumerate(exps))

    def weight(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no weight")
        return max(self.term_weight(e) for e, _ in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("the zero polynomial has no degree")
        return max(sum(e) for e, _ in self.terms)

    def is_weighted_homogeneous(self) -> bool:
        return len({self.term_weight(e) for e, _ in self.terms}) <= 1

    # --- arithmetic ---

    def _combine(self, other: 'MPoly', sign: int) -> 'MPoly':
        if other.ctx != self.ctx or other.s != self.s:
            raise DimensionMismatch("polynomials over different rings")
        ctx = self.ctx
        out = dict(self.terms)
        for exps, c in other.terms:
            c = c if sign > 0 else ctx.neg(c)
            out[exps] = ctx.add(out.get(exps, 0), c)
        return MPoly.from_dict(ctx, self.s, out)

    def __add__(self, other: 'MPoly') -> 'MPoly':
        return self._combine(other, 1)

    def __sub__(self, other: 'MPoly') -> 'MPoly':
        return self._combine(other, -1)

    def __neg__(self) -> 'MPoly':
        return self.scale(self.ctx.neg(1))

    def __mul__(self, other: 'MPoly') -> 'MPoly':
        if other.ctx != self.ctx or other.s != self.s:
            raise DimensionMismatch("polynomials over different rings")
        ctx = self.ctx
        out: Dict[Exps, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                exps = tuple(a + b for a, b in zip(e1, e2))
                out[exps] = ctx.add(out.get(exps, 0), ctx.mul(c1, c2))
        return MPoly.from_dict(ctx, self.s, out)

    def scale(self, c: int) -> 'MPoly':
        ctx = self.ctx
        return MPoly.from_dict(ctx, self.s, {e: ctx.mul(c, a) for e, a in self.terms})

    def partial(self, j: int) -> 'MPoly':
        """d/dY_j (0-based j); integer multipliers are reduced mod p."""
        ctx = self.ctx
        out: Dict[Exps, int] = {}
        for exps, c in self.terms:
            if exps[j] == 0:
                continue
            lowered = list(exps)
            lowered[j] -= 1
            out[tuple(lowered)] = ctx.mul(ctx.from_int(exps[j]), c)
        return MPoly.from_dict(ctx, self.s, out)

    def evaluate(self, y: Sequence[int], ctx: Optional[FieldCtx] = None) -> int:
        """Value at y; ctx may be an extension of a prime coefficient field."""
        ctx = ctx or self.ctx
        if len(y) != self.s:
            raise DimensionMismatch(f"expected {self.s} values, got {len(y)}")
        acc = 0
        for exps, c in self.terms:
            term = c
            for v, e in zip(y, exps):
                if e:
                    term = ctx.mul(term, ctx.pow(v, e))
                    if term == 0:
                        break
            acc = ctx.add(acc, term)
        return acc

    # --- text format ---

    def to_text(self) -> str:
        """'c * Y1^e1 Y3^e3' terms joined by ' + '; every exponent written out."""
        if not self.terms:
            return '0'
        out = []
        for exps, c in self.terms:
            mono = ' '.join(f'Y{j + 1}^{e}' for j, e in enumerate(exps) if e)
            out.append(f'{c} * {mono}' if mono else f'{c}')
        return ' + '.join(out)

    def __str__(self) -> str:
        return self.to_text()


_VAR = re.compile(r'^Y(\d+)(?:\^(\d+))?$')


def parse_mpoly(text: str, ctx: FieldCtx, s: int) -> MPoly:
    """
    Parse the text format. Also accepts '-' between terms, implicit coefficients
    and exponents ('Y2 - 1'), and '*' between factors.
    """
    body = text.strip()
    if body in ('', '0'):
        return MPoly(ctx, s, ())
    acc: Dict[Exps, int] = {}
    for raw in body.replace('-', '+-').split('+'):
        term = raw.strip()
        if not term:
            continue
        negate = term.startswith('-')
        if negate:
            term = term[1:].strip()
        coeff = 1
        exps = [0] * s
        for factor in term.replace('*', ' ').split():
            if factor.isdigit():
                coeff = ctx.mul(coeff, _coeff_code(ctx, int(factor)))
                continue
            match = _VAR.match(factor)
            if not match:
                raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
            j = int(match.group(1))
            if not 1 <= j <= s:
                raise DimensionMismatch(f"variable Y{j} outside Y1..Y{s}")
            exps[j - 1] += int(match.group(2) or 1)
        if negate:
            coeff = ctx.neg(coeff)
        key = tuple(exps)
        acc[key] = ctx.add(acc.get(key, 0), coeff)
    return MPoly.from_dict(ctx, s, acc)


def highest_weight_component(S: MPoly) -> MPoly:
    """Terms of S whose weight is maximal."""
    top = S.weight()
    return MPoly(S.ctx, S.s, tuple((e, c) for e, c in S.terms if MPoly.term_weight(e) == top))


# --- ELEMENTARY SYMMETRIC POLYNOMIALS ---

def elem_sym_eval(ctx: FieldCtx, x: Sequence[int], s: int) -> Tuple[int, ...]:
    """(Pi_1(x), ..., Pi_s(x)) from prod (1 + x_i T) truncated at degree s."""
    if not 1 <= s <= len(x):
        raise DimensionMismatch(f"need 1 <= s <= r, got s={s}, r={len(x)}")
    e = [1] + [0] * s
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        for k in range(min(i + 1, s), 0, -1):
            e[k] = ctx.add(e[k], ctx.mul(xi, e[k - 1]))
    return tuple(e[1:])


def _all_elem_sym(ctx: FieldCtx, x: Sequence[int]) -> List[int]:
    """[Pi_0, Pi_1, ..., Pi_r] with Pi_0 = 1."""
    if not x:
        return [1]
    return [1] + list(elem_sym_eval(ctx, x, len(x)))


@dataclass(frozen=True)
class SymSystem:
    """
    R_i = S_i(Pi_1, ..., Pi_s) in r variables.

    Strict construction enforces m <= s <= r - m - 2; non-strict systems stay
    usable for counting and are flagged through within_standing_assumption.
    """
    polys: Tuple[MPoly, ...]
    r: int
    strict: bool = True
    degrees: Tuple[int, ...] = field(default=(), init=False)

    def __post_init__(self):
        polys = tuple(self.polys)
        object.__setattr__(self, 'polys', polys)
        if not polys:
            raise StandingAssumptionViolation("a system needs m >= 1 polynomials")
        ctx, s = polys[0].ctx, polys[0].s
        for S in polys:
            if S.ctx != ctx or S.s != s:
                raise DimensionMismatch("all polynomials must share field and variables")
            if S.is_zero():
                raise ZeroPolynomial("zero polynomial in system")
            if S.weight() == 0:
                raise StandingAssumptionViolation(f"constant polynomial {S} in system")
        if not 1 <= s <= self.r:
            raise DimensionMismatch(f"need 1 <= s <= r, got s={s}, r={self.r}")
        object.__setattr__(self, 'degrees', tuple(S.weight() for S in polys))
        if self.strict and not self.within_standing_assumption:
            raise StandingAssumptionViolation(
                f"m={self.m}, s={s}, r={self.r} violates m <= s <= r - m - 2"
            )

    @property
    def ctx(self) -> FieldCtx:
        return self.polys[0].ctx

    @property
    def s(self) -> int:
        return self.polys[0].s

    @property
    def m(self) -> int:
        return len(self.polys)

    @property
    def within_standing_assumption(self) -> bool:
        return self.m <= self.s <= self.r - self.m - 2

    @property
    def D(self) -> int:
        return sum(d - 1 for d in self.degrees)

    @property
    def delta(self) -> int:
        out = 1
        for d in self.degrees:
            out *= d
        return out

    def to_text(self) -> str:
        return '\n'.join(S.to_text() for S in self.polys)

    def digest(self) -> str:
        """Identifier tying reports to the system that produced them."""
        payload = f"{self.ctx.p}^{self.ctx.k}|{self.ctx.modulus}|r={self.r}|{self.to_text()}"
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:16]

    def leading_system(self) -> 'SymSystem':
        """System of highest-weight components S_i^wt."""
        return SymSystem(tuple(highest_weight_component(S) for S in self.polys), self.r, strict=False)


def parse_system(text: str, ctx: FieldCtx, s: int, r: int, strict: bool = True) -> SymSystem:
    """One polynomial per non-blank line; '#' starts a comment."""
    polys = []
    for line in text.splitlines():
        line = line.split('#', 1)[0].strip()
        if line:
            polys.append(parse_mpoly(line, ctx, s))
    return SymSystem(tuple(polys), r, strict=strict)


def infer_inner_dimension(text: str) -> int:
    """Largest Y index mentioned in a system file."""
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    found = [int(j) for j in re.findall(r"Y(\d+)", body)]
    return max(found) if found else 1


def system_eval(sys: SymSystem, x: Sequence[int], ctx: Optional[FieldCtx] = None) -> Tuple[int, ...]:
    """(R_1(x), ..., R_m(x))."""
    if len(x) != sys.r:
        raise DimensionMismatch(f"expected {sys.r} coordinates, got {len(x)}")
    ctx = ctx or sys.ctx
    pis = elem_sym_eval(ctx, x, sys.s)
    return tuple(S.evaluate(pis, ctx) for S in sys.polys)


# --- JACOBIANS AND HYPOTHESES ---

def jacobian_rank_at(polys: Sequence[MPoly], y: Sequence[int], ctx: Optional[FieldCtx] = None) -> int:
    """Rank of (dS_i/dY_j)(y) over ctx (default: the coefficient field)."""
    ctx = ctx or polys[0].ctx
    rows = [[S.partial(j).evaluate(y, ctx) for j in range(S.s)] for S in polys]
    return matrix_rank(ctx, rows)


@dataclass
class HypothesisReport:
    system: str
    max_ext: int
    label: str
    degrees_checked: List[int]
    points_checked: Dict[int, int]
    zero_set_failures: Dict[int, List[List[int]]]
    leading_failures: Dict[int, List[List[int]]]
    verdict: str
    witness: Optional[Dict] = None

    @property
    def passed(self) -> bool:
        return self.verdict == 'PASS'


MAX_WITNESSES = 10


def hypothesis_check(sys: SymSystem, max_ext: Optional[int] = None) -> HypothesisReport:
    """
    Rank of the Jacobian of S and of S^wt on their zero sets over F_{q^j}, j <= max_ext.
    Exhaustive at each degree, so the verdict is a sampled one, never a proof over the closure.
    """
    ctx = sys.ctx
    if ctx.k != 1:
        raise FieldMismatch("hypothesis_check runs over a prime base field")
    e = max_ext if max_ext is not None else get_max_extension()
    if e < 1:
        raise ValueError(f"max_ext must be >= 1, got {e}")
    s, m = sys.s, sys.m
    check_work(sum(ctx.q ** (j * s) for j in range(1, e + 1)) * 2 * m, "hypothesis check")

    leading = sys.leading_system().polys
    points: Dict[int, int] = {}
    zero_fail: Dict[int, List[List[int]]] = {}
    lead_fail: Dict[int, List[List[int]]] = {}
    witness = None
    for j in range(1, e + 1):
        ext = build_field(ctx.p, j)
        polys = [S.lift(ext) for S in sys.polys]
        lead = [S.lift(ext) for S in leading]
        zero_fail[j], lead_fail[j] = [], []
        count = 0
        for y in itertools.product(ext.elements(), repeat=s):
            count += 1
            for family, bucket, kind in ((polys, zero_fail[j], 'zero_set'), (lead, lead_fail[j], 'leading')):
                if all(S.evaluate(y, ext) == 0 for S in family) and jacobian_rank_at(family, y, ext) < m:
                    if len(bucket) < MAX_WITNESSES:
                        bucket.append(list(y))
                    if witness is None:
                        witness = {'degree': j, 'kind': kind, 'y': list(y)}
        points[j] = count

    return HypothesisReport(
        system=sys.to_text(),
        max_ext=e,
        label=f"sampled up to degree {e}",
        degrees_checked=list(range(1, e + 1)),
        points_checked=points,
        zero_set_failures=zero_fail,
        leading_failures=lead_fail,
        verdict='PASS' if witness is None else 'FAIL',
        witness=witness,
    )


def vandermonde_factorization_check(ctx: FieldCtx, x: Sequence[int]) -> bool:
    """
    Jacobian of (Pi_1, ..., Pi_r) at x equals B_r(x) A_r(x), and its determinant is
    (-1)^(r(r-1)/2) prod_{i<j} (x_j - x_i).

    The Jacobian is taken entrywise as dPi_i/dX_j = Pi_{i-1}(x without x_j).
    """
    r = len(x)
    pis = _all_elem_sym(ctx, x)
    jac = []
    for i in range(1, r + 1):
        row = []
        for j in range(r):
            others = _all_elem_sym(ctx, list(x[:j]) + list(x[j + 1:]))
            row.append(others[i - 1] if i - 1 < len(others) else 0)
        jac.append(row)

    minus_one = ctx.neg(1)
    B = [[ctx.mul(ctx.pow(minus_one, k - 1), pis[i - k]) if k <= i else 0
          for k in range(1, r + 1)] for i in range(1, r + 1)]
    A = [[ctx.pow(x[j], k - 1) for j in range(r)] for k in range(1, r + 1)]
    if mat_mul(ctx, B, A) != jac:
        return False

    expected = ctx.pow(minus_one, r * (r - 1) // 2)
    for i in range(r):
        for j in range(i + 1, r):
            expected = ctx.mul(expected, ctx.sub(x[j], x[i]))
    return matrix_det(ctx, jac) == expected


def leading_component_identity_check(sys: SymSystem, sample: Iterable[Sequence[int]],
                                     ctx: Optional[FieldCtx] = None) -> bool:
    """
    For each sample x and each i, the top homogeneous part of R_i at x, recovered by
    interpolating t -> R_i(t x) through d_i + 1 scalars, equals S_i^wt(Pi(x)).
    """
    ctx = ctx or sys.ctx
    top_degree = max(sys.degrees)
    if ctx.q < top_degree + 1:
        raise InsufficientScalars(
            f"{ctx} has {ctx.q} elements, interpolation of degree {top_degree} needs {top_degree + 1}"
        )
    leading = sys.leading_system().polys
    for x in sample:
        pis_x = elem_sym_eval(ctx, x, sys.s)
        for S, S_wt, d in zip(sys.polys, leading, sys.degrees):
            ts = list(range(d + 1))
            top = 0
            for a in ts:
                scaled = [ctx.mul(a, xi) for xi in x]
                value = S.evaluate(elem_sym_eval(ctx, scaled, sys.s), ctx)
                denom = ctx.prod(ctx.sub(a, b) for b in ts if b != a)
                top = ctx.add(top, ctx.div(value, denom))
            if top != S_wt.evaluate(pis_x, ctx):
                return False
    return True


def diagonal_substitution_check(ctx: FieldCtx, y: Sequence[int]) -> bool:
    """
    Pi_i(y_1, ..., y_{r-1}, y_{r-1}) = Pi_i' + 2 y_{r-1} Pi_{i-1}' + y_{r-1}^2 Pi_{i-2}'
    for every i, where Pi' are taken over y_1..y_{r-2}.
    """
    if len(y) < 1:
        raise DimensionMismatch("need at least one coordinate")
    x = y[-1]
    doubled = _all_elem_sym(ctx, list(y) + [x])
    inner = _all_elem_sym(ctx, list(y[:-1]))
    two_x = ctx.mul(ctx.from_int(2), x)
    x_sq = ctx.mul(x, x)

    def at(k: int) -> int:
        return inner[k] if 0 <= k < len(inner) else 0

    for i in range(1, len(doubled)):
        rhs = ctx.add(at(i), ctx.add(ctx.mul(two_x, at(i - 1)), ctx.mul(x_sq, at(i - 2))))
        if doubled[i] != rhs:
            return False
    return True


def require_homogeneous(sys: SymSystem) -> None:
    for S in sys.polys:
        if not S.is_weighted_homogeneous():
            raise NonHomogeneousLeadingPart(f"{S} is not weighted homogeneous")
