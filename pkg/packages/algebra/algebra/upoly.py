"""
Univariate polynomials over a FieldCtx.

Dense low-to-high coefficient tuples of field codes. The squarefree and
distinct-degree routines follow the classical dense finite-field algorithms;
only degrees and multiplicities of irreducible factors are extracted, never the
factors themselves.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from shared.shared.config import check_work
from shared.shared.errors import (
    DivisionByZeroPoly,
    FieldMismatch,
    InvalidPattern,
    NotMonic,
)

from .ff import FieldCtx


def _strip(coeffs: Iterable[int]) -> Tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class UPoly:
    """Polynomial sum(coeffs[i] * T^i); the zero polynomial has no coefficients."""
    ctx: FieldCtx
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', _strip(self.coeffs))

    @classmethod
    def from_coeffs(cls, ctx: FieldCtx, coeffs: Sequence[int]) -> 'UPoly':
        """Coefficients low-to-high; integers are reduced into the prime subfield."""
        return cls(ctx, tuple(c if 0 <= c < ctx.q else ctx.from_int(c) for c in coeffs))

    @classmethod
    def monomial(cls, ctx: FieldCtx, degree: int, coeff: int = 1) -> 'UPoly':
        return cls(ctx, (0,) * degree + (coeff,))

    @classmethod
    def constant(cls, ctx: FieldCtx, c: int) -> 'UPoly':
        return cls(ctx, (c,))

    @classmethod
    def from_roots(cls, ctx: FieldCtx, roots: Iterable[int]) -> 'UPoly':
        """prod (T - x) over the given roots."""
        f = cls(ctx, (1,))
        for x in roots:
            f = poly_mul(f, cls(ctx, (ctx.neg(x), 1)))
        return f

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_monic(self) -> bool:
        return self.lead == 1

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, c: int) -> int:
        return poly_eval(self, c)

    def __add__(self, other: 'UPoly') -> 'UPoly':
        return poly_add(self, other)

    def __sub__(self, other: 'UPoly') -> 'UPoly':
        return poly_sub(self, other)

    def __mul__(self, other: 'UPoly') -> 'UPoly':
        return poly_mul(self, other)

    def __str__(self) -> str:
        if not self.coeffs:
            return '0'
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = '' if i == 0 else ('T' if i == 1 else f'T^{i}')
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f'{c}*{mono}')
        return ' + '.join(terms)


def _same_ctx(f: UPoly, g: UPoly) -> FieldCtx:
    if f.ctx != g.ctx:
        raise FieldMismatch(f"polynomials over {f.ctx} and {g.ctx}")
    return f.ctx


# --- ARITHMETIC ---

def poly_add(f: UPoly, g: UPoly) -> UPoly:
    ctx = _same_ctx(f, g)
    n = max(len(f.coeffs), len(g.coeffs))
    return UPoly(ctx, tuple(ctx.add(f.coeff(i), g.coeff(i)) for i in range(n)))


def poly_sub(f: UPoly, g: UPoly) -> UPoly:
    ctx = _same_ctx(f, g)
    n = max(len(f.coeffs), len(g.coeffs))
    return UPoly(ctx, tuple(ctx.sub(f.coeff(i), g.coeff(i)) for i in range(n)))


def poly_scale(f: UPoly, c: int) -> UPoly:
    ctx = f.ctx
    return UPoly(ctx, tuple(ctx.mul(c, a) for a in f.coeffs))


def poly_mul(f: UPoly, g: UPoly) -> UPoly:
    ctx = _same_ctx(f, g)
    if f.is_zero() or g.is_zero():
        return UPoly(ctx, ())
    out = [0] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(g.coeffs):
            if b:
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b))
    return UPoly(ctx, tuple(out))


def poly_divrem(f: UPoly, g: UPoly) -> Tuple[UPoly, UPoly]:
    """(quotient, remainder) with f = quotient*g + remainder, deg remainder < deg g."""
    ctx = _same_ctx(f, g)
    if g.is_zero():
        raise DivisionByZeroPoly("division by the zero polynomial")
    dg = g.degree
    if f.degree < dg:
        return UPoly(ctx, ()), f
    inv_lead = 1 if g.lead == 1 else ctx.inv(g.lead)
    rem = list(f.coeffs)
    quo = [0] * (f.degree - dg + 1)
    for i in range(f.degree, dg - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        c = ctx.mul(c, inv_lead)
        quo[i - dg] = c
        for j, b in enumerate(g.coeffs):
            if b:
                rem[i - dg + j] = ctx.sub(rem[i - dg + j], ctx.mul(c, b))
    return UPoly(ctx, tuple(quo)), UPoly(ctx, tuple(rem[:dg]))


def poly_rem(f: UPoly, g: UPoly) -> UPoly:
    return poly_divrem(f, g)[1]


def poly_quo(f: UPoly, g: UPoly) -> UPoly:
    return poly_divrem(f, g)[0]


def poly_monic(f: UPoly) -> UPoly:
    if f.is_zero() or f.lead == 1:
        return f
    return poly_scale(f, f.ctx.inv(f.lead))


def poly_gcd(f: UPoly, g: UPoly) -> UPoly:
    """Monic gcd (zero only when both inputs are zero)."""
    _same_ctx(f, g)
    while not g.is_zero():
        f, g = g, poly_rem(f, g)
    return poly_monic(f)


def poly_derivative(f: UPoly) -> UPoly:
    ctx = f.ctx
    return UPoly(ctx, tuple(ctx.mul(ctx.from_int(i), c) for i, c in enumerate(f.coeffs) if i > 0))


def poly_eval(f: UPoly, c: int) -> int:
    ctx = f.ctx
    acc = 0
    for a in reversed(f.coeffs):
        acc = ctx.add(ctx.mul(acc, c), a)
    return acc


def poly_pow_mod(f: UPoly, e: int, g: UPoly) -> UPoly:
    """f^e mod g by square-and-multiply."""
    ctx = _same_ctx(f, g)
    result = UPoly(ctx, (1,))
    base = poly_rem(f, g)
    while e:
        if e & 1:
            result = poly_rem(poly_mul(result, base), g)
        base = poly_rem(poly_mul(base, base), g)
        e >>= 1
    return poly_rem(result, g)


# --- FACTORIZATION PATTERNS ---

@dataclass(frozen=True)
class FactPattern:
    """lambda = 1^l1 2^l2 ... n^ln: counts[i-1] irreducible factors of degree i."""
    counts: Tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, 'counts', tuple(self.counts))
        if any(c < 0 for c in self.counts):
            raise InvalidPattern(f"negative multiplicity in {self.counts}")
        total = sum((i + 1) * c for i, c in enumerate(self.counts))
        if total != self.n or len(self.counts) != self.n:
            raise InvalidPattern(f"sum of i*lambda_i is {total}, expected n={self.n}")

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> 'FactPattern':
        parts = list(parts)
        n = sum(parts)
        counts = [0] * n
        for d in parts:
            if d < 1:
                raise InvalidPattern(f"part {d} is not a positive degree")
            counts[d - 1] += 1
        return cls(tuple(counts), n)

    @classmethod
    def from_text(cls, text: str) -> 'FactPattern':
        """Parse '1^2 2^1' (degree^multiplicity)."""
        parts = []
        try:
            for token in text.split():
                degree, _, mult = token.partition('^')
                parts.extend([int(degree)] * int(mult or 1))
        except ValueError:
            raise InvalidPattern(f"cannot parse pattern {text!r}")
        return cls.from_parts(parts)

    def parts(self) -> List[int]:
        """Degrees as a non-increasing list."""
        out = []
        for i in range(self.n, 0, -1):
            out.extend([i] * self.counts[i - 1])
        return out

    def __add__(self, other: 'FactPattern') -> 'FactPattern':
        return FactPattern.from_parts(self.parts() + other.parts())

    def __str__(self) -> str:
        return ' '.join(f'{i + 1}^{c}' for i, c in enumerate(self.counts) if c)


def is_squarefree(f: UPoly) -> bool:
    """True iff gcd(f, f') = 1; a vanishing derivative means f is a p-th power."""
    if f.degree < 1:
        raise ValueError("is_squarefree needs degree >= 1")
    df = poly_derivative(f)
    if df.is_zero():
        return False
    return poly_gcd(f, df).is_one()


def _pth_root(f: UPoly) -> UPoly:
    """g with g^p = f, for f whose exponents are all multiples of p."""
    ctx = f.ctx
    p = ctx.p
    return UPoly(ctx, tuple(ctx.frob(f.coeffs[i * p], ctx.k - 1) for i in range(f.degree // p + 1)))


def squarefree_decomposition(f: UPoly) -> List[Tuple[UPoly, int]]:
    """Pairs (g, e) with g squarefree, pairwise coprime and f = lc * prod g^e."""
    f = poly_monic(f)
    if f.degree < 1:
        return []
    factors = []
    n = 1
    one = UPoly(f.ctx, (1,))
    while True:
        df = poly_derivative(f)
        done = False
        if not df.is_zero():
            g = poly_gcd(f, df)
            h = poly_quo(f, g)
            i = 1
            while not h.is_one():
                common = poly_gcd(g, h)
                part = poly_quo(h, common)
                if part.degree > 0:
                    factors.append((part, i * n))
                g, h, i = poly_quo(g, common), common, i + 1
            if g == one:
                done = True
            else:
                f = g
        if done:
            break
        f = _pth_root(f)
        n *= f.ctx.p
    return sorted(factors, key=lambda pair: pair[1])


def distinct_degree_split(f: UPoly) -> List[Tuple[UPoly, int]]:
    """Pairs (g_i, i): g_i is the product of the degree-i irreducible factors of squarefree monic f."""
    ctx = f.ctx
    x = UPoly(ctx, (0, 1))
    factors = []
    i = 1
    g = x
    while 2 * i <= f.degree:
        g = poly_pow_mod(g, ctx.q, f)
        h = poly_gcd(f, poly_sub(g, x))
        if not h.is_one():
            factors.append((h, i))
            f = poly_quo(f, h)
            g = poly_rem(g, f)
        i += 1
    if f.degree > 0:
        factors.append((f, f.degree))
    return factors


def factorization_pattern(f: UPoly) -> FactPattern:
    """Degrees of the monic irreducible factors of f, with multiplicity."""
    if f.is_zero() or not f.is_monic():
        raise NotMonic(f"factorization_pattern needs a monic polynomial, got {f}")
    n = f.degree
    if n < 1:
        raise ValueError("factorization_pattern needs degree >= 1")
    counts = [0] * n
    for part, mult in squarefree_decomposition(f):
        for block, i in distinct_degree_split(part):
            counts[i - 1] += mult * (block.degree // i)
    return FactPattern(tuple(counts), n)


def monic_polys(ctx: FieldCtx, n: int):
    """Every monic polynomial of degree n, lower coefficients in code order."""
    for tail in itertools.product(ctx.elements(), repeat=n):
        yield UPoly(ctx, tuple(reversed(tail)) + (1,))


def monic_census(ctx: FieldCtx, n: int) -> Dict[FactPattern, int]:
    """Number of monic degree-n polynomials per factorization pattern."""
    check_work(ctx.q ** n, f"monic census of degree {n} over {ctx}")
    counts: Dict[FactPattern, int] = {}
    for f in monic_polys(ctx, n):
        lam = factorization_pattern(f)
        counts[lam] = counts.get(lam, 0) + 1
    return counts
