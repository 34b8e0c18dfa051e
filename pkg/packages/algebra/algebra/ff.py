"""
Finite field arithmetic.

Elements of F_q, q = p^k, are integer codes whose base-p digits are the
coefficient vector over F_p, constant term least significant. Codes 0..p-1 are
the prime subfield in every extension, so prime-field values need no
conversion when they are used inside an extension.

Multiplication in extensions goes through exp/log tables of a primitive
element; addition is digit-wise.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from shared.shared.config import check_work, get_field_ceiling
from shared.shared.errors import (
    FieldMismatch,
    FieldTooLarge,
    NonPrime,
    NoIrreducibleFound,
    NotFound,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# --- DENSE POLYNOMIALS OVER F_p (construction helpers only) ---

def _digits(code: int, p: int, k: int) -> Tuple[int, ...]:
    out = []
    for _ in range(k):
        code, d = divmod(code, p)
        out.append(d)
    return tuple(out)


def _from_digits(digits: Sequence[int], p: int) -> int:
    code = 0
    for d in reversed(digits):
        code = code * p + d
    return code


def _prime_poly_rem(f: List[int], g: List[int], p: int) -> List[int]:
    """Remainder of f by monic g over F_p, both low-to-high."""
    f = list(f)
    dg = len(g) - 1
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i]
        if c:
            for j in range(dg + 1):
                f[i - dg + j] = (f[i - dg + j] - c * g[j]) % p
    rem = f[:dg]
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def _is_irreducible_prime_poly(f: List[int], p: int) -> bool:
    """Exhaustive trial division of monic f by every monic polynomial of degree <= deg f / 2."""
    k = len(f) - 1
    for d in range(1, k // 2 + 1):
        for tail in range(p ** d):
            g = list(_digits(tail, p, d)) + [1]
            if not _prime_poly_rem(f, g, p):
                return False
    return True


def _least_irreducible(p: int, k: int) -> Tuple[int, ...]:
    """Monic irreducible of degree k with the smallest tail code."""
    for tail in range(p ** k):
        candidate = list(_digits(tail, p, k)) + [1]
        if candidate[0] == 0:
            continue
        if _is_irreducible_prime_poly(candidate, p):
            return tuple(candidate)
    raise NoIrreducibleFound(f"no monic irreducible of degree {k} over F_{p}")


def _mul_mod(a: int, b: int, modulus: Tuple[int, ...], p: int) -> int:
    k = len(modulus) - 1
    da, db = _digits(a, p, k), _digits(b, p, k)
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(da):
        if x:
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
    rem = _prime_poly_rem(prod, list(modulus), p)
    return _from_digits(rem, p)


def _log_tables(p: int, modulus: Tuple[int, ...]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """exp/log tables for the first primitive element in code order."""
    k = len(modulus) - 1
    q = p ** k
    for g in range(2, q):
        exp = [1]
        cur = g
        while cur != 1:
            exp.append(cur)
            cur = _mul_mod(cur, g, modulus, p)
        if len(exp) == q - 1:
            log = [0] * q
            for i, v in enumerate(exp):
                log[v] = i
            return tuple(exp), tuple(log)
    raise NotFound(f"no primitive element in F_{p}^{k}")


# --- FIELD CONTEXT ---

@dataclass(frozen=True)
class FieldCtx:
    """F_q with q = p^k. Operations take and return integer codes."""
    p: int
    k: int
    modulus: Tuple[int, ...] = ()
    _exp: Tuple[int, ...] = field(default=(), compare=False, repr=False)
    _log: Tuple[int, ...] = field(default=(), compare=False, repr=False)

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def __str__(self) -> str:
        if self.k == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.k}"

    def elements(self) -> range:
        return range(self.q)

    def digits(self, a: int) -> Tuple[int, ...]:
        return _digits(a, self.p, self.k)

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_p -> F_q."""
        return n % self.p

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.k == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        res, place = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            res += ((da + db) % p) * place
            place *= p
        return res

    def neg(self, a: int) -> int:
        p = self.p
        if self.k == 1:
            return (-a) % p
        if p == 2:
            return a
        res, place = 0, 1
        while a:
            a, da = divmod(a, p)
            res += ((p - da) % p) * place
            place *= p
        return res

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frob(self, a: int, e: int = 1) -> int:
        """a^(p^e)."""
        if self.k == 1 or a == 0:
            return a
        return self._exp[(self._log[a] * pow(self.p, e, self.q - 1)) % (self.q - 1)]

    def sum(self, values) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    def prod(self, values) -> int:
        acc = 1
        for v in values:
            acc = self.mul(acc, v)
        return acc


@dataclass(frozen=True)
class FieldElem:
    """An element of a FieldCtx; `code` is its canonical enumeration index."""
    ctx: FieldCtx
    code: int

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.ctx.digits(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise FieldMismatch(f"{self.ctx} vs {other.ctx}")
            return other.code
        return self.ctx.from_int(other)

    def __add__(self, other):
        return FieldElem(self.ctx, self.ctx.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self._other(other), self.code))

    def __mul__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.ctx, self.ctx.div(self.code, self._other(other)))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.code))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.pow(self.code, e))

    def inverse(self) -> 'FieldElem':
        return FieldElem(self.ctx, self.ctx.inv(self.code))

    def is_zero(self) -> bool:
        return self.code == 0


@lru_cache(maxsize=None)
def _build_field(p: int, k: int) -> FieldCtx:
    if k == 1:
        return FieldCtx(p=p, k=1)
    modulus = _least_irreducible(p, k)
    exp, log = _log_tables(p, modulus)
    return FieldCtx(p=p, k=k, modulus=modulus, _exp=exp, _log=log)


def build_field(p: int, k: int = 1) -> FieldCtx:
    """F_{p^k} with the least monic irreducible modulus (deterministic)."""
    if not is_prime(p):
        raise NonPrime(f"characteristic must be prime, got {p}")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    ceiling = get_field_ceiling()
    if p ** k > ceiling:
        raise FieldTooLarge(f"F_{p}^{k} has {p ** k} elements, ceiling is {ceiling}")
    return _build_field(p, k)


def element(ctx: FieldCtx, value: int) -> FieldElem:
    return FieldElem(ctx, value)


def frobenius(x: FieldElem, e: int = 1) -> FieldElem:
    """x^(p^e); the identity for e a multiple of k."""
    if e < 0:
        raise ValueError(f"iteration count must be >= 0, got {e}")
    return FieldElem(x.ctx, x.ctx.frob(x.code, e))


# --- LINEAR ALGEBRA ---

def rref_mod_p(matrix, p: int, ncols: int = None) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over F_p; pivots are searched in the first ncols columns."""
    m = np.array(matrix, dtype=np.int64) % p
    if m.ndim != 2 or m.shape[0] == 0:
        return m, []
    rows, cols = m.shape
    limit = cols if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        for rr in range(rows):
            if rr != r and m[rr, c]:
                m[rr] = (m[rr] - m[rr, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank_mod_p(matrix, p: int) -> int:
    return len(rref_mod_p(matrix, p)[1])


def _eliminate(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> Tuple[int, int]:
    """Gaussian elimination over ctx; returns (rank, determinant when square)."""
    m = [list(row) for row in rows]
    if not m:
        return 0, 1
    nrows, ncols = len(m), len(m[0])
    det = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if m[i][c]), None)
        if pivot is None:
            det = 0
            continue
        if pivot != r:
            m[r], m[pivot] = m[pivot], m[r]
            det = ctx.neg(det)
        lead = m[r][c]
        det = ctx.mul(det, lead)
        inv = ctx.inv(lead)
        for i in range(r + 1, nrows):
            if m[i][c]:
                factor = ctx.mul(m[i][c], inv)
                m[i] = [ctx.sub(a, ctx.mul(factor, b)) for a, b in zip(m[i], m[r])]
        r += 1
    if r < ncols:
        det = 0
    return r, det


def matrix_rank(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> int:
    return _eliminate(ctx, rows)[0]


def matrix_det(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> int:
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    return _eliminate(ctx, rows)[1]


def mat_mul(ctx: FieldCtx, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> List[List[int]]:
    cols = list(zip(*b))
    return [[ctx.sum(ctx.mul(x, y) for x, y in zip(row, col)) for col in cols] for row in a]


# --- NORMAL ELEMENTS AND EMBEDDINGS ---

def find_normal_element(ctx: FieldCtx, base_degree: int = 1) -> FieldElem:
    """
    First element, in code order, whose Frobenius conjugates over F_{p^base_degree}
    form a basis of ctx.
    """
    if ctx.k % base_degree:
        raise ValueError(f"{ctx} is not an extension of F_{ctx.p}^{base_degree}")
    i = ctx.k // base_degree
    for theta in range(1, ctx.q):
        conj = [ctx.frob(theta, base_degree * h) for h in range(i)]
        if base_degree == 1:
            ok = rank_mod_p([ctx.digits(c) for c in conj], ctx.p) == i
        else:
            moore = [[ctx.frob(theta, base_degree * (g + h)) for h in range(i)] for g in range(i)]
            ok = matrix_rank(ctx, moore) == i
        if ok:
            return FieldElem(ctx, theta)
    raise NotFound(f"no normal element found in {ctx}")


def embed(small: FieldCtx, big: FieldCtx) -> Tuple[int, ...]:
    """
    Embedding table F_{p^i} -> F_{p^L} (i | L), sending the generator T of small
    to the first root of small's modulus in big.
    """
    if small.p != big.p or big.k % small.k:
        raise FieldMismatch(f"{small} does not embed in {big}")
    if small.k == 1:
        return tuple(range(small.q))
    check_work(big.q * small.k, f"embedding {small} into {big}")
    root = None
    for rho in big.elements():
        acc = 0
        for c in reversed(small.modulus):
            acc = big.add(big.mul(acc, rho), c)
        if acc == 0:
            root = rho
            break
    if root is None:
        raise NotFound(f"modulus of {small} has no root in {big}")
    powers = [big.pow(root, j) for j in range(small.k)]
    table = []
    for code in small.elements():
        table.append(big.sum(big.mul(d, pw) for d, pw in zip(small.digits(code), powers)))
    return tuple(table)


if __name__ == '__main__':
    print("=== Testing Finite Fields ===")
    for p, k in [(5, 1), (2, 2), (3, 2)]:
        ctx = build_field(p, k)
        theta = find_normal_element(ctx)
        print(f"{ctx}: modulus={ctx.modulus or '-'} normal element code={theta.code}")
